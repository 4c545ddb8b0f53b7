#include "fa4p/response_matrix.hpp"

#include <numeric>

#include "fa4p/errors.hpp"

namespace fa4p {

ResponseMatrix::ResponseMatrix(std::size_t persons, std::size_t items,
                               std::vector<std::uint8_t> values,
                               std::vector<std::string> item_ids,
                               std::vector<std::string> person_ids)
    : persons_(persons),
      items_(items),
      values_(std::move(values)),
      item_ids_(std::move(item_ids)),
      person_ids_(std::move(person_ids)) {
  if (persons_ < 2 || items_ < 2) {
    throw Error(ErrorKind::Data, "response matrix needs at least 2 persons and 2 items");
  }
  if (values_.size() != persons_ * items_) {
    throw Error(ErrorKind::LengthMismatch, "response matrix size does not match n x m");
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (values_[k] > 1) {
      throw Error(ErrorKind::Data, "non-binary response at row " + std::to_string(k / items_ + 1) +
                                       ", column " + std::to_string(k % items_ + 1));
    }
  }
  if (item_ids_.empty()) {
    for (std::size_t i = 0; i < items_; ++i) item_ids_.push_back("item" + std::to_string(i + 1));
  }
  if (person_ids_.empty()) {
    for (std::size_t p = 0; p < persons_; ++p) person_ids_.push_back(std::to_string(p + 1));
  }
  if (item_ids_.size() != items_ || person_ids_.size() != persons_) {
    throw Error(ErrorKind::LengthMismatch, "id list length does not match matrix shape");
  }
}

int ResponseMatrix::total(std::size_t person) const noexcept {
  const auto r = row(person);
  return std::accumulate(r.begin(), r.end(), 0);
}

}  // namespace fa4p
