// fa4p command-line tool. Every failure prints exactly one line of the form
// "error[<kind>]: <message>" to stderr and exits nonzero.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fa4p/diagnostics.hpp"
#include "fa4p/equivalence.hpp"
#include "fa4p/errors.hpp"
#include "fa4p/io.hpp"
#include "fa4p/model.hpp"
#include "fa4p/sampler.hpp"
#include "fa4p/scores.hpp"
#include "fa4p/simulate.hpp"

namespace fs = std::filesystem;
using namespace fa4p;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCheckFailed = 3;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(' ');
    const auto last = item.find_last_not_of(' ');
    if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
  }
  return out;
}

std::string one_line(std::string s) {
  for (char& ch : s) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return s;
}

struct FitArgs {
  std::string data;
  std::string model = "4pl";
  std::size_t chains = 2;
  std::size_t burnin = 4000;
  std::size_t samples = 4000;
  std::size_t thin = 1;
  std::uint64_t seed = 20250101;
  std::string out;
  std::optional<double> threshold;
  std::string zero_categories;
  std::string scores = "ngni";
  bool pattern_average = false;
  bool binary_traces = false;
  bool timing = false;
  bool serial = false;
};

int run_fit(const FitArgs& args) {
  const auto start = std::chrono::steady_clock::now();
  DichotomizeRule rule;
  if (args.threshold) {
    rule = ThresholdRule{*args.threshold};
  } else if (!args.zero_categories.empty()) {
    rule = ZeroCategoriesRule{split_list(args.zero_categories)};
  }
  const ResponseMatrix data = load_responses(args.data, rule);

  SamplerConfig config;
  config.chains = args.chains;
  config.burnin = args.burnin;
  config.samples = args.samples;
  config.thin = args.thin;
  config.seed = args.seed;
  config.model = parse_model_name(args.model);
  config.parallel_chains = !args.serial;
  config.validate();

  const auto kinds = split_list(args.scores);
  for (const auto& k : kinds) {
    if (k != "ngni" && k != "ng" && k != "ni") {
      throw Error(ErrorKind::Config, "unknown score kind '" + k + "' (use ngni, ng, ni)");
    }
  }
  const auto wants = [&](const char* k) {
    return std::find(kinds.begin(), kinds.end(), k) != kinds.end();
  };

  const FitResult result = fit(data, config);
  ScoreTable scores = make_score_table(result, data);
  if (wants("ng")) scores.ng_total = restricted_scores(data, config, RestrictedScore::NG);
  if (wants("ni")) scores.ni_total = restricted_scores(data, config, RestrictedScore::NI);
  std::optional<std::vector<double>> averaged;
  if (args.pattern_average) averaged = pattern_average(scores, data).ngni_total;

  ArtifactOptions options;
  options.binary_traces = args.binary_traces;
  options.input_path = fs::path(args.data).filename().string();
  options.scores = kinds;
  options.pattern_average = args.pattern_average;
  if (args.timing) {
    options.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  const auto art = write_artifacts(result, scores, averaged, args.out, options);
  std::cout << "fit " << model_name(config.model) << ": " << data.persons() << " persons x "
            << data.items() << " items, " << config.chains << " chains; wrote "
            << art.items_csv.parent_path().string() << "; rhat > "
            << result.diagnostics.rhat_threshold << ": " << result.diagnostics.flagged.size()
            << " parameters\n";
  return 0;
}

struct SimulateArgs {
  std::string items;
  std::size_t n = 0;
  std::string link = "logistic";
  std::uint64_t seed = 1;
  std::string out;
};

LinkFunction parse_link(const std::string& s) {
  if (s == "logistic") return LinkFunction::Logistic;
  if (s == "normal") return LinkFunction::NormalOgive;
  throw Error(ErrorKind::Config, "unknown link '" + s + "' (use logistic or normal)");
}

int run_simulate(const SimulateArgs& args) {
  const auto records = read_items(args.items);
  std::vector<FAItemParams> items;
  for (const auto& r : records) items.push_back(r.fa);
  const auto link = parse_link(args.link);
  const auto ds = simulate(items, args.n, link, args.seed);

  std::error_code ec;
  fs::create_directories(args.out, ec);
  if (ec) throw Error(ErrorKind::Io, args.out + ": cannot create directory");

  std::string csv = "id";
  for (const auto& r : records) csv += ',' + r.id;
  csv += '\n';
  for (std::size_t p = 0; p < ds.persons; ++p) {
    csv += std::to_string(p + 1);
    for (std::size_t i = 0; i < ds.items; ++i) csv += ds.responses[p * ds.items + i] ? ",1" : ",0";
    csv += '\n';
  }
  write_file_atomic(fs::path(args.out) / "responses.csv", csv);

  nlohmann::ordered_json truth;
  truth["link"] = std::string(link_name(link));
  truth["seed"] = args.seed;
  truth["persons"] = ds.persons;
  auto& jitems = truth["items"] = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    const auto irt = fa_to_irt(r.fa);
    jitems.push_back({{"id", r.id},
                      {"alpha", r.fa.alpha()},
                      {"tau", r.fa.tau()},
                      {"c", r.fa.c()},
                      {"d", r.fa.d()},
                      {"a", irt.a()},
                      {"b", irt.b()}});
  }
  truth["theta"] = ds.true_theta;
  auto& jz = truth["z"] = nlohmann::ordered_json::array();
  for (std::size_t p = 0; p < ds.persons; ++p) {
    jz.push_back(std::vector<int>(ds.true_z.begin() + static_cast<std::ptrdiff_t>(p * ds.items),
                                  ds.true_z.begin() +
                                      static_cast<std::ptrdiff_t>((p + 1) * ds.items)));
  }
  write_file_atomic(fs::path(args.out) / "truth.json", truth.dump() + "\n");
  std::cout << "simulated " << ds.persons << " persons x " << ds.items << " items ("
            << link_name(link) << ", seed " << args.seed << ") into " << args.out << "\n";
  return 0;
}

struct TransformArgs {
  std::string items;
  std::string direction;
  std::string rescale;
  std::string out;
};

int run_transform(const TransformArgs& args) {
  const CsvTable table = read_csv(args.items);
  std::optional<RescaleDirection> rescale;
  if (args.rescale == "to-normal") rescale = RescaleDirection::LogisticToNormal;
  else if (args.rescale == "to-logistic") rescale = RescaleDirection::NormalToLogistic;
  else if (!args.rescale.empty()) {
    throw Error(ErrorKind::Config, "--rescale-1.7 takes to-normal or to-logistic");
  }
  const bool fa2irt = args.direction == "fa2irt";
  if (!fa2irt && args.direction != "irt2fa") {
    throw Error(ErrorKind::Config, "--direction takes fa2irt or irt2fa");
  }
  const char* need[2] = {fa2irt ? "alpha" : "a", fa2irt ? "tau" : "b"};
  for (const char* col : need) {
    if (!table.column(col)) {
      throw Error(ErrorKind::Parse, args.items + ": missing column '" + col + "'");
    }
  }
  const auto id = table.column("id");
  const auto c_col = table.column("c");
  const auto d_col = table.column("d");
  std::string out = fa2irt ? "id,a,b,c,d\n" : "id,alpha,tau,c,d\n";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto num = [&](std::size_t col) {
      return parse_number(row[col], args.items + ": row " + std::to_string(r + 2) + ", column " +
                                        std::to_string(col + 1));
    };
    const double x = num(*table.column(need[0]));
    const double y = num(*table.column(need[1]));
    const double c = c_col ? num(*c_col) : 0.0;
    const double d = d_col ? num(*d_col) : 1.0;
    const std::string name = id ? row[*id] : "item" + std::to_string(r + 1);
    if (fa2irt) {
      IRTItemParams irt = fa_to_irt(FAItemParams(x, y, c, d));
      if (rescale) irt = logistic_normal_rescale(irt, *rescale);
      out += name + ',' + format17(irt.a()) + ',' + format17(irt.b()) + ',' + format17(c) + ',' +
             format17(d) + '\n';
    } else {
      IRTItemParams irt(x, y, c, d);
      // Rescaling acts on the IRT discrimination before conversion.
      if (rescale) irt = logistic_normal_rescale(irt, *rescale);
      const FAItemParams fa = irt_to_fa(irt);
      out += name + ',' + format17(fa.alpha()) + ',' + format17(fa.tau()) + ',' + format17(c) +
             ',' + format17(d) + '\n';
    }
  }
  if (args.out.empty()) {
    std::cout << out;
  } else {
    write_file_atomic(args.out, out);
  }
  return 0;
}

struct VerifyArgs {
  std::string checks = "conditional,marginal,lemma-a1,lemma-a2,lemma-a3";
  std::size_t fuzz = 100;
  std::uint64_t seed = 1;
  std::uint64_t mc_samples = 1'000'000;
  bool summary_only = false;
};

int run_verify(const VerifyArgs& args) {
  FuzzOptions options;
  options.mc_samples = args.mc_samples;
  bool all_ok = true;
  for (const auto& check : split_list(args.checks)) {
    const auto records = fuzz_check(check, args.fuzz, args.seed, options);
    std::size_t failures = 0;
    double worst = 0.0;
    for (const auto& r : records) {
      if (!r.as_expected()) ++failures;
      if (r.expect_pass) worst = std::max(worst, r.report.discrepancy);
      if (args.summary_only) continue;
      nlohmann::ordered_json line;
      line["check"] = check;
      line["name"] = r.report.name;
      line["instance"] = r.instance;
      line["discrepancy"] = r.report.discrepancy;
      line["tolerance"] = r.report.tolerance;
      line["pass"] = r.report.pass;
      line["expected"] = r.expect_pass ? "pass" : "fail";
      line["sample"] = r.report.sample;
      std::cout << line.dump() << "\n";
    }
    nlohmann::ordered_json summary;
    summary["check"] = check;
    summary["summary"] = true;
    summary["instances"] = args.fuzz;
    summary["records"] = records.size();
    summary["unexpected"] = failures;
    summary["max_discrepancy"] = worst;
    summary["ok"] = failures == 0;
    std::cout << summary.dump() << "\n";
    all_ok = all_ok && failures == 0;
  }
  return all_ok ? 0 : kExitCheckFailed;
}

struct DiagnoseArgs {
  std::string traces;
  std::string out;
  double threshold = kDefaultRhatThreshold;
};

int run_diagnose(const DiagnoseArgs& args) {
  const auto traces = read_traces(args.traces);
  const auto report = diagnose(traces, args.threshold);
  write_file_atomic(args.out, diagnostics_json(report));
  fs::path csv = args.out;
  csv.replace_extension(".csv");
  write_file_atomic(csv, diagnostics_csv(report));
  std::cout << report.parameters.size() << " parameters; rhat > " << report.rhat_threshold
            << ": " << report.flagged.size() << "\n";
  return 0;
}

struct CompareArgs {
  std::string a;
  std::string b;
  std::string out;
  std::string labels;
};

int run_compare(const CompareArgs& args) {
  std::string label_a = fs::path(args.a).stem().string();
  std::string label_b = fs::path(args.b).stem().string();
  if (!args.labels.empty()) {
    const auto l = split_list(args.labels);
    if (l.size() != 2) throw Error(ErrorKind::Config, "--labels takes two comma-separated names");
    label_a = l[0];
    label_b = l[1];
  }
  if (label_a == label_b) label_b += "_2";
  const auto cmp = compare_estimates(read_csv(args.a), read_csv(args.b), label_a, label_b);
  write_file_atomic(args.out, tidy_csv(cmp));
  std::cout << "param,items,mse\n";
  for (const auto& m : cmp.mse) {
    std::cout << m.param << ',' << m.items << ',' << format6(m.mse) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Four-parameter factor-analytic / IRT modelling of binary responses"};
  app.require_subcommand(1);
  app.set_version_flag("--version", FA4P_VERSION);

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a model by MCMC and write run artifacts");
  fit_cmd->add_option("data", fit_args.data, "Response CSV (rows persons, columns items)")
      ->required()
      ->check(CLI::ExistingFile);
  fit_cmd->add_option("--model", fit_args.model, "2pl|3pl|4pl|nil|2pno|3pno|4pno|nino")
      ->capture_default_str();
  fit_cmd->add_option("--chains", fit_args.chains)->capture_default_str();
  fit_cmd->add_option("--burnin", fit_args.burnin)->capture_default_str();
  fit_cmd->add_option("--samples", fit_args.samples)->capture_default_str();
  fit_cmd->add_option("--thin", fit_args.thin)->capture_default_str();
  fit_cmd->add_option("--seed", fit_args.seed)->capture_default_str();
  fit_cmd->add_option("--out", fit_args.out, "Output directory")->required();
  auto* thr = fit_cmd->add_option("--dichotomize-threshold", fit_args.threshold,
                                  "Numeric cells >= t become 1");
  auto* zc = fit_cmd->add_option("--zero-categories", fit_args.zero_categories,
                                 "Comma-separated labels mapped to 0; others map to 1");
  thr->excludes(zc);
  fit_cmd->add_option("--scores", fit_args.scores, "Comma list of ngni,ng,ni")
      ->capture_default_str();
  fit_cmd->add_flag("--pattern-average", fit_args.pattern_average,
                    "Add NGNI totals averaged over identical response patterns");
  fit_cmd->add_flag("--binary-traces", fit_args.binary_traces, "Write traces.bin");
  fit_cmd->add_flag("--timing", fit_args.timing,
                    "Record wall time in the manifest (artifacts stop being byte-stable)");
  fit_cmd->add_flag("--serial", fit_args.serial, "Run chains on one thread");

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate responses from item parameters");
  sim_cmd->add_option("--items", sim_args.items)->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--n", sim_args.n)->required();
  sim_cmd->add_option("--link", sim_args.link)->capture_default_str();
  sim_cmd->add_option("--seed", sim_args.seed)->capture_default_str();
  sim_cmd->add_option("--out", sim_args.out)->required();

  TransformArgs tr_args;
  auto* tr_cmd = app.add_subcommand("transform", "Convert item parameters between FA and IRT");
  tr_cmd->add_option("items", tr_args.items)->required()->check(CLI::ExistingFile);
  tr_cmd->add_option("--direction", tr_args.direction, "fa2irt|irt2fa")->required();
  tr_cmd->add_option("--rescale-1.7", tr_args.rescale, "to-normal|to-logistic");
  tr_cmd->add_option("--out", tr_args.out, "Write CSV here instead of stdout");

  VerifyArgs ver_args;
  auto* ver_cmd = app.add_subcommand("verify", "Randomized FA/IRT equivalence checks");
  ver_cmd->add_option("--checks", ver_args.checks)->capture_default_str();
  ver_cmd->add_option("--fuzz", ver_args.fuzz, "Instances per check")->capture_default_str();
  ver_cmd->add_option("--seed", ver_args.seed)->capture_default_str();
  ver_cmd->add_option("--mc-samples", ver_args.mc_samples)->capture_default_str();
  ver_cmd->add_flag("--summary-only", ver_args.summary_only);

  DiagnoseArgs diag_args;
  auto* diag_cmd = app.add_subcommand("diagnose", "R-hat and ESS from a traces file");
  diag_cmd->add_option("traces", diag_args.traces)->required()->check(CLI::ExistingFile);
  diag_cmd->add_option("--out", diag_args.out, "report.json; a .csv is written beside it")
      ->required();
  diag_cmd->add_option("--rhat-threshold", diag_args.threshold)->capture_default_str();

  CompareArgs cmp_args;
  auto* cmp_cmd = app.add_subcommand("compare", "Tidy CSV and MSE for two estimate tables");
  cmp_cmd->add_option("estA", cmp_args.a)->required()->check(CLI::ExistingFile);
  cmp_cmd->add_option("estB", cmp_args.b)->required()->check(CLI::ExistingFile);
  cmp_cmd->add_option("--out", cmp_args.out)->required();
  cmp_cmd->add_option("--labels", cmp_args.labels, "labelA,labelB");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[usage]: " << one_line(e.what()) << "\n";
    return kExitUsage;
  }

  try {
    if (*fit_cmd) return run_fit(fit_args);
    if (*sim_cmd) return run_simulate(sim_args);
    if (*tr_cmd) return run_transform(tr_args);
    if (*ver_cmd) return run_verify(ver_args);
    if (*diag_cmd) return run_diagnose(diag_args);
    if (*cmp_cmd) return run_compare(cmp_args);
  } catch (const Error& e) {
    std::cerr << "error[" << to_string(e.kind()) << "]: " << one_line(e.what()) << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << one_line(e.what()) << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
