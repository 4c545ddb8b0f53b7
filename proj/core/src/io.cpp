#include "fa4p/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "fa4p/errors.hpp"

#ifndef FA4P_VERSION
#define FA4P_VERSION "unknown"
#endif

namespace fa4p {

namespace {

constexpr char kTraceMagic[8] = {'F', 'A', '4', 'P', 'T', 'R', 'C', '1'};

std::string location(const std::string& source, std::size_t row, std::size_t col) {
  std::ostringstream os;
  os << source << ": row " << row << ", column " << col;
  return os.str();
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<double> parse_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

double require_double(const std::string& cell, const std::string& where) {
  const auto v = parse_double(cell);
  if (!v || !std::isfinite(*v)) {
    throw Error(ErrorKind::Parse, where + ": expected a finite number, got \"" + cell + "\"");
  }
  return *v;
}

std::string format(double value, int precision) {
  if (std::isnan(value)) return "NA";
  if (std::isinf(value)) return value > 0 ? "Inf" : "-Inf";
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, precision);
  if (ec != std::errc()) throw Error(ErrorKind::Io, "number formatting failed");
  return std::string(buf, ptr);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, path.string() + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::Io, path.string() + ": read failed");
  return ss.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

bool is_item_param(std::string_view which, const ModelSpec& model) {
  if (which == "c") return model.estimates_guessing();
  if (which == "d") return model.estimates_inattention();
  return true;
}

constexpr const char* kItemParams[] = {"alpha", "tau", "c", "d"};

const std::vector<double>& chain_field(const ChainDraws& c, std::string_view which) {
  if (which == "alpha") return c.alpha;
  if (which == "tau") return c.tau;
  if (which == "c") return c.c;
  return c.d;
}

template <class T>
void put(std::string& out, const T& v) {
  const auto* p = reinterpret_cast<const char*>(&v);
  out.append(p, sizeof v);
}

template <class T>
T get(std::string_view data, std::size_t& pos, const std::string& source) {
  if (pos + sizeof(T) > data.size()) throw Error(ErrorKind::Parse, source + ": truncated trace file");
  T v;
  std::memcpy(&v, data.data() + pos, sizeof v);
  pos += sizeof v;
  return v;
}

std::vector<ParameterTraces> parse_binary_traces(std::string_view data,
                                                 const std::string& source) {
  std::size_t pos = sizeof kTraceMagic;
  const auto n_params = get<std::uint64_t>(data, pos, source);
  const auto n_chains = get<std::uint64_t>(data, pos, source);
  std::vector<ParameterTraces> out;
  for (std::uint64_t k = 0; k < n_params; ++k) {
    const auto len = get<std::uint32_t>(data, pos, source);
    if (pos + len > data.size()) throw Error(ErrorKind::Parse, source + ": truncated trace file");
    ParameterTraces t{std::string(data.substr(pos, len)), {}};
    pos += len;
    for (std::uint64_t ch = 0; ch < n_chains; ++ch) {
      const auto draws = get<std::uint64_t>(data, pos, source);
      if (draws > (data.size() - pos) / sizeof(double)) {
        throw Error(ErrorKind::Parse, source + ": truncated trace file");
      }
      std::vector<double> v(draws);
      std::memcpy(v.data(), data.data() + pos, draws * sizeof(double));
      pos += draws * sizeof(double);
      t.chains.push_back(std::move(v));
    }
    out.push_back(std::move(t));
  }
  if (pos != data.size()) throw Error(ErrorKind::Parse, source + ": trailing bytes in trace file");
  return out;
}

std::vector<ParameterTraces> parse_csv_traces(const CsvTable& table, const std::string& source) {
  const auto chain_col = table.column("chain");
  const auto iter_col = table.column("iteration");
  const auto param_col = table.column("parameter");
  const auto value_col = table.column("value");
  if (!chain_col || !iter_col || !param_col || !value_col) {
    throw Error(ErrorKind::Parse,
                source + ": trace header must contain chain, iteration, parameter, value");
  }
  std::vector<ParameterTraces> out;
  std::map<std::string, std::size_t> index;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = location(source, r + 2, *chain_col + 1);
    const double chain_value = require_double(row[*chain_col], where);
    if (chain_value < 1 || chain_value != std::floor(chain_value)) {
      throw Error(ErrorKind::Parse, where + ": chain must be a positive integer");
    }
    const auto chain = static_cast<std::size_t>(chain_value) - 1;
    const auto [it, inserted] = index.try_emplace(row[*param_col], out.size());
    if (inserted) out.push_back({row[*param_col], {}});
    auto& t = out[it->second];
    if (t.chains.size() <= chain) t.chains.resize(chain + 1);
    t.chains[chain].push_back(
        require_double(row[*value_col], location(source, r + 2, *value_col + 1)));
  }
  return out;
}

}  // namespace

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable parse_csv(std::string_view text, const std::string& source) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<std::vector<std::string>> records;
  std::vector<std::size_t> line_of;
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool field_was_quoted = false;
  std::size_t line = 1;
  std::size_t record_line = 1;

  auto end_field = [&] {
    fields.push_back(field_was_quoted ? field : trim(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    const bool blank = fields.size() == 1 && fields[0].empty();
    if (!blank) {
      records.push_back(std::move(fields));
      line_of.push_back(record_line);
    }
    fields.clear();
  };

  for (std::size_t k = 0; k < text.size(); ++k) {
    const char ch = text[k];
    if (quoted) {
      if (ch == '"') {
        if (k + 1 < text.size() && text[k + 1] == '"') {
          field += '"';
          ++k;
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line;
        field += ch;
      }
      continue;
    }
    if (ch == '"' && trim(field).empty()) {
      field.clear();
      quoted = true;
      field_was_quoted = true;
    } else if (ch == ',') {
      end_field();
    } else if (ch == '\r') {
      // CRLF: the newline ends the record.
    } else if (ch == '\n') {
      end_record();
      ++line;
      record_line = line;
    } else {
      field += ch;
    }
  }
  if (quoted) throw Error(ErrorKind::Parse, source + ": unterminated quoted field");
  if (!field.empty() || !fields.empty() || field_was_quoted) end_record();

  if (records.empty()) throw Error(ErrorKind::Parse, source + ": empty file, header row required");
  CsvTable table;
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      std::ostringstream os;
      os << source << ": row " << line_of[r] << " has " << records[r].size()
         << " fields, header has " << table.header.size();
      throw Error(ErrorKind::Parse, os.str());
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  return parse_csv(read_text(path), path.string());
}

ResponseMatrix responses_from_csv(const CsvTable& table, const DichotomizeRule& rule,
                                  const std::string& source) {
  const bool has_id = !table.header.empty() && table.header.front() == "id";
  const std::size_t first = has_id ? 1 : 0;
  const std::size_t m = table.header.size() - first;
  const std::size_t n = table.rows.size();
  std::vector<std::string> item_ids(table.header.begin() + static_cast<std::ptrdiff_t>(first),
                                    table.header.end());
  std::vector<std::string> person_ids;
  std::vector<std::uint8_t> values;
  values.reserve(n * m);
  std::set<std::string> zero_set;
  if (const auto* z = std::get_if<ZeroCategoriesRule>(&rule)) {
    zero_set.insert(z->categories.begin(), z->categories.end());
  }

  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = table.rows[r];
    if (has_id) person_ids.push_back(row[0]);
    for (std::size_t j = first; j < row.size(); ++j) {
      const std::string& cell = row[j];
      const auto where = [&] {
        return location(source, r + 2, j + 1) + " (item " + table.header[j] + ")";
      };
      if (cell.empty()) throw Error(ErrorKind::Parse, where() + ": missing cell");
      std::uint8_t y = 0;
      if (std::holds_alternative<std::monostate>(rule)) {
        if (cell == "0") {
          y = 0;
        } else if (cell == "1") {
          y = 1;
        } else {
          throw Error(ErrorKind::Parse,
                      where() + ": \"" + cell + "\" is not 0/1 and no dichotomization rule is set");
        }
      } else if (const auto* t = std::get_if<ThresholdRule>(&rule)) {
        const auto v = parse_double(cell);
        if (!v || !std::isfinite(*v)) {
          throw Error(ErrorKind::Parse, where() + ": \"" + cell + "\" is not numeric");
        }
        y = *v >= t->threshold ? 1 : 0;
      } else {
        y = zero_set.contains(cell) ? 0 : 1;
      }
      values.push_back(y);
    }
  }
  return ResponseMatrix(n, m, std::move(values), std::move(item_ids), std::move(person_ids));
}

ResponseMatrix load_responses(const std::filesystem::path& path, const DichotomizeRule& rule) {
  return responses_from_csv(read_csv(path), rule, path.string());
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, tmp.string() + ": cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::Io, tmp.string() + ": write failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::Io, path.string() + ": rename failed");
  }
}

double parse_number(const std::string& cell, const std::string& where) {
  return require_double(cell, where);
}

std::string format6(double value) { return format(value, 6); }
std::string format17(double value) { return format(value, 17); }

std::vector<ItemRecord> items_from_csv(const CsvTable& table, const std::string& source) {
  const auto id = table.column("id");
  const auto alpha = table.column("alpha");
  const auto tau = table.column("tau");
  const auto a = table.column("a");
  const auto b = table.column("b");
  const auto c = table.column("c");
  const auto d = table.column("d");
  const bool fa = alpha && tau;
  if (!fa && !(a && b)) {
    throw Error(ErrorKind::Parse, source + ": need alpha,tau or a,b columns");
  }
  std::vector<ItemRecord> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto num = [&](std::size_t col) {
      return require_double(row[col], location(source, r + 2, col + 1));
    };
    const double cv = c ? num(*c) : 0.0;
    const double dv = d ? num(*d) : 1.0;
    std::string name = id ? row[*id] : "item" + std::to_string(r + 1);
    try {
      if (fa) {
        out.push_back({std::move(name), FAItemParams(num(*alpha), num(*tau), cv, dv)});
      } else {
        out.push_back({std::move(name), irt_to_fa(IRTItemParams(num(*a), num(*b), cv, dv))});
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Parse) throw;
      throw Error(e.kind(), source + ": row " + std::to_string(r + 2) + ": " + e.what());
    }
  }
  if (out.empty()) throw Error(ErrorKind::Data, source + ": no items");
  return out;
}

std::vector<ItemRecord> read_items(const std::filesystem::path& path) {
  return items_from_csv(read_csv(path), path.string());
}

std::string items_csv(const FitResult& fit) {
  std::string out = "id,alpha,tau,c,d,a,b,rhat_alpha,rhat_tau,rhat_c,rhat_d\n";
  for (std::size_t i = 0; i < fit.fa_estimates.size(); ++i) {
    const auto& fa = fit.fa_estimates[i];
    const auto& irt = fit.irt_estimates[i];
    out += csv_field(fit.item_ids[i]);
    for (double v : {fa.alpha(), fa.tau(), fa.c(), fa.d(), irt.a(), irt.b()}) {
      out += ',' + format6(v);
    }
    for (const char* which : kItemParams) {
      const auto* s = fit.diagnostics.find(parameter_name(which, fit.item_ids[i]));
      out += ',' + format6(s ? s->rhat : std::nan(""));
    }
    out += '\n';
  }
  return out;
}

std::string persons_csv(const FitResult& fit, const ScoreTable& scores,
                        const std::optional<std::vector<double>>& averaged) {
  std::string out = "id,observed_total,theta_hat,ngni_total";
  if (scores.ng_total) out += ",ng_total";
  if (scores.ni_total) out += ",ni_total";
  if (averaged) out += ",pattern_averaged_ngni";
  out += '\n';
  for (std::size_t p = 0; p < scores.persons(); ++p) {
    out += csv_field(fit.person_ids[p]);
    out += ',' + std::to_string(scores.observed_total[p]);
    out += ',' + format6(scores.theta[p]);
    out += ',' + format6(scores.ngni_total[p]);
    if (scores.ng_total) out += ',' + format6((*scores.ng_total)[p]);
    if (scores.ni_total) out += ',' + format6((*scores.ni_total)[p]);
    if (averaged) out += ',' + format6((*averaged)[p]);
    out += '\n';
  }
  return out;
}

std::string traces_csv(const FitResult& fit) {
  std::string out = "chain,iteration,parameter,value\n";
  const auto& draws = fit.draws;
  std::vector<std::string> names[4];
  for (std::size_t k = 0; k < 4; ++k) {
    for (const auto& id : fit.item_ids) names[k].push_back(csv_field(parameter_name(kItemParams[k], id)));
  }
  for (std::size_t ch = 0; ch < draws.chains.size(); ++ch) {
    const auto& chain = draws.chains[ch];
    const std::string chain_prefix = std::to_string(ch + 1) + ',';
    for (std::size_t t = 0; t < chain.draws; ++t) {
      const std::string prefix = chain_prefix + std::to_string(chain.iterations[t]) + ',';
      for (std::size_t i = 0; i < draws.items; ++i) {
        for (std::size_t k = 0; k < 4; ++k) {
          if (!is_item_param(kItemParams[k], fit.config.model)) continue;
          out += prefix;
          out += names[k][i];
          out += ',';
          out += format17(chain_field(chain, kItemParams[k])[t * draws.items + i]);
          out += '\n';
        }
      }
    }
  }
  return out;
}

std::string traces_binary(const FitResult& fit) {
  std::string out(kTraceMagic, sizeof kTraceMagic);
  const auto& draws = fit.draws;
  std::uint64_t n_params = 0;
  for (const char* which : kItemParams) {
    if (is_item_param(which, fit.config.model)) n_params += draws.items;
  }
  put(out, n_params);
  put(out, static_cast<std::uint64_t>(draws.chains.size()));
  for (std::size_t i = 0; i < draws.items; ++i) {
    for (const char* which : kItemParams) {
      if (!is_item_param(which, fit.config.model)) continue;
      const std::string name = parameter_name(which, fit.item_ids[i]);
      put(out, static_cast<std::uint32_t>(name.size()));
      out += name;
      for (const auto& trace : draws.item_traces(which, i)) {
        put(out, static_cast<std::uint64_t>(trace.size()));
        out.append(reinterpret_cast<const char*>(trace.data()), trace.size() * sizeof(double));
      }
    }
  }
  return out;
}

std::vector<ParameterTraces> read_traces(const std::filesystem::path& path) {
  const std::string data = read_text(path);
  if (data.size() >= sizeof kTraceMagic &&
      std::memcmp(data.data(), kTraceMagic, sizeof kTraceMagic) == 0) {
    return parse_binary_traces(data, path.string());
  }
  return parse_csv_traces(parse_csv(data, path.string()), path.string());
}

RunArtifacts write_artifacts(const FitResult& fit, const ScoreTable& scores,
                             const std::optional<std::vector<double>>& averaged,
                             const std::filesystem::path& outdir,
                             const ArtifactOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) throw Error(ErrorKind::Io, outdir.string() + ": cannot create directory");

  RunArtifacts art;
  art.items_csv = outdir / "items.csv";
  art.persons_csv = outdir / "persons.csv";
  art.traces = outdir / (options.binary_traces ? "traces.bin" : "traces.csv");
  art.manifest = outdir / "manifest.json";

  write_file_atomic(art.items_csv, items_csv(fit));
  write_file_atomic(art.persons_csv, persons_csv(fit, scores, averaged));
  write_file_atomic(art.traces, options.binary_traces ? traces_binary(fit) : traces_csv(fit));

  nlohmann::ordered_json m;
  const auto& cfg = fit.config;
  m["tool"] = "fa4p";
  m["version"] = FA4P_VERSION;
  m["compiler"] = __VERSION__;
  m["input"] = options.input_path;
  m["config"] = {{"model", model_name(cfg.model)},
                 {"link", std::string(link_name(cfg.model.link))},
                 {"chains", cfg.chains},
                 {"burnin", cfg.burnin},
                 {"samples", cfg.samples},
                 {"thin", cfg.thin},
                 {"target_acceptance", cfg.proposal_target_acceptance}};
  m["seed"] = cfg.seed;
  m["data"] = {{"persons", fit.draws.persons}, {"items", fit.draws.items}};
  m["scores"] = options.scores;
  m["pattern_average"] = options.pattern_average;
  m["rhat_threshold"] = fit.diagnostics.rhat_threshold;
  m["rhat_flagged"] = fit.diagnostics.flagged;
  m["files"] = {art.items_csv.filename().string(), art.persons_csv.filename().string(),
                art.traces.filename().string()};
  if (options.wall_seconds) m["wall_time_seconds"] = *options.wall_seconds;
  write_file_atomic(art.manifest, m.dump(2) + "\n");
  return art;
}

std::string diagnostics_json(const DiagnosticsReport& report) {
  nlohmann::ordered_json j;
  j["rhat_threshold"] = report.rhat_threshold;
  j["flagged"] = report.flagged;
  auto& params = j["parameters"] = nlohmann::ordered_json::array();
  for (const auto& s : report.parameters) {
    nlohmann::ordered_json p;
    p["name"] = s.name;
    // Non-finite values serialize as null.
    p["rhat"] = s.rhat;
    p["ess"] = s.ess;
    p["median"] = s.median;
    p["q025"] = s.q025;
    p["q975"] = s.q975;
    p["zero_variance"] = s.zero_variance;
    params.push_back(std::move(p));
  }
  return j.dump(2) + "\n";
}

std::string diagnostics_csv(const DiagnosticsReport& report) {
  std::string out = "parameter,rhat,ess,median,q025,q975,zero_variance,flagged\n";
  for (const auto& s : report.parameters) {
    const bool flagged =
        std::find(report.flagged.begin(), report.flagged.end(), s.name) != report.flagged.end();
    out += csv_field(s.name) + ',' + format6(s.rhat) + ',' + format6(s.ess) + ',' +
           format6(s.median) + ',' + format6(s.q025) + ',' + format6(s.q975) + ',' +
           (s.zero_variance ? "true" : "false") + ',' + (flagged ? "true" : "false") + '\n';
  }
  return out;
}

Comparison compare_estimates(const CsvTable& a, const CsvTable& b, const std::string& label_a,
                             const std::string& label_b) {
  const auto id_a = a.column("id");
  const auto id_b = b.column("id");
  if (!id_a || !id_b) throw Error(ErrorKind::Parse, "compare: both tables need an id column");
  std::map<std::string, std::size_t> rows_b;
  for (std::size_t r = 0; r < b.rows.size(); ++r) rows_b[b.rows[r][*id_b]] = r;

  Comparison out;
  for (const char* param : {"alpha", "tau", "a", "b", "c", "d"}) {
    const auto ca = a.column(param);
    const auto cb = b.column(param);
    if (!ca || !cb) continue;
    std::vector<double> va;
    std::vector<double> vb;
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
      const auto& item = a.rows[r][*id_a];
      const auto it = rows_b.find(item);
      if (it == rows_b.end()) continue;
      const double x = require_double(a.rows[r][*ca], location(label_a, r + 2, *ca + 1));
      const double y =
          require_double(b.rows[it->second][*cb], location(label_b, it->second + 2, *cb + 1));
      va.push_back(x);
      vb.push_back(y);
      out.tidy.push_back({item, param, label_a, x});
      out.tidy.push_back({item, param, label_b, y});
    }
    if (va.empty()) throw Error(ErrorKind::Data, "compare: no item ids in common");
    out.mse.push_back({param, va.size(), mse_compare(va, vb)});
  }
  if (out.mse.empty()) throw Error(ErrorKind::Data, "compare: no parameter columns in common");
  return out;
}

std::string tidy_csv(const Comparison& comparison) {
  std::string out = "item,param,source,value\n";
  for (const auto& t : comparison.tidy) {
    out += csv_field(t.item) + ',' + t.param + ',' + csv_field(t.source) + ',' +
           format6(t.value) + '\n';
  }
  return out;
}

}  // namespace fa4p
