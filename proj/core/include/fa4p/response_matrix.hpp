#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fa4p {

/// n persons x m items of binary responses, stored row-major (one row per
/// person). Requires n >= 2, m >= 2 and every cell in {0, 1}.
class ResponseMatrix {
 public:
  ResponseMatrix(std::size_t persons, std::size_t items, std::vector<std::uint8_t> values,
                 std::vector<std::string> item_ids = {},
                 std::vector<std::string> person_ids = {});

  std::size_t persons() const noexcept { return persons_; }
  std::size_t items() const noexcept { return items_; }

  std::uint8_t operator()(std::size_t person, std::size_t item) const noexcept {
    return values_[person * items_ + item];
  }
  std::span<const std::uint8_t> row(std::size_t person) const noexcept {
    return {values_.data() + person * items_, items_};
  }
  std::span<const std::uint8_t> values() const noexcept { return values_; }

  const std::vector<std::string>& item_ids() const noexcept { return item_ids_; }
  const std::vector<std::string>& person_ids() const noexcept { return person_ids_; }

  /// Observed total score of one person.
  int total(std::size_t person) const noexcept;

 private:
  std::size_t persons_;
  std::size_t items_;
  std::vector<std::uint8_t> values_;
  std::vector<std::string> item_ids_;
  std::vector<std::string> person_ids_;
};

}  // namespace fa4p
