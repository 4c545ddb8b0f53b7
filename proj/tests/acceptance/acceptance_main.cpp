// Acceptance suite. Prints one line per criterion:
//   criterion <k> <PASS|FAIL|SKIP> <title>: <details>
// and exits nonzero when any criterion fails. Optional arguments select a
// subset of criteria by number.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fa4p/diagnostics.hpp"
#include "fa4p/equivalence.hpp"
#include "fa4p/io.hpp"
#include "fa4p/model.hpp"
#include "fa4p/probability.hpp"
#include "fa4p/random.hpp"
#include "fa4p/sampler.hpp"
#include "fa4p/scores.hpp"
#include "fa4p/simulate.hpp"

namespace fs = std::filesystem;
using namespace fa4p;

namespace {

// Tolerances and budgets.
constexpr double kCond1Budget = 5.0;
constexpr double kCond2Budget = 30.0;
constexpr double kCond3Budget = 10.0;
constexpr double kCond4Budget = 120.0;
constexpr double kCond5Budget = 5.0;
constexpr double kCond6Budget = 60.0;
constexpr double kCond8Budget = 1.0;
constexpr double kRoundTripTolerance = 1e-12;
constexpr double kSamplerBand = 3.0;
constexpr double kRmseA = 0.6;
constexpr double kRmseB = 0.35;
constexpr double kRmseC = 0.08;
constexpr double kRmseD = 0.08;
constexpr double kThetaCorrelation = 0.85;
constexpr double kRhatLimit = 1.05;
constexpr double kPublishedMseTolerance = 1e-4;
constexpr double kGoldenMseFactor = 2.0;
constexpr double kPerfectNgni = 19.65;
constexpr double kPerfectNgniBand = 0.2;

// Seeds fixed before any run.
constexpr std::uint64_t kSuiteSeed = 20240611;
constexpr std::uint64_t kRecoverySeed = 7;

// Published JAGS-vs-mirt MSE for discrimination, difficulty, guessing and
// inattention on the MSATB item table.
constexpr double kPublishedMse[4] = {0.0779, 0.0202, 0.0019, 0.0036};

struct Outcome {
  enum class Status { Pass, Fail, Skip } status = Status::Fail;
  std::string detail;
};

Outcome pass_if(bool ok, std::string detail) {
  return {ok ? Outcome::Status::Pass : Outcome::Status::Fail, std::move(detail)};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct FuzzTally {
  std::size_t records = 0;
  std::size_t unexpected = 0;
  double worst = 0.0;
  std::string worst_sample;
};

FuzzTally tally(const std::vector<FuzzRecord>& records, std::string_view name) {
  FuzzTally t;
  for (const auto& r : records) {
    if (r.report.name != name) continue;
    ++t.records;
    if (!r.as_expected()) ++t.unexpected;
    if (r.report.discrepancy >= t.worst) {
      t.worst = r.report.discrepancy;
      t.worst_sample = r.report.sample;
    }
  }
  return t;
}

Outcome criterion1() {
  Timer timer;
  const auto t = tally(fuzz_check("conditional", 1000, kSuiteSeed), "conditional");
  const double s = timer.seconds();
  return pass_if(t.records == 1000 && t.unexpected == 0 && t.worst <= kConditionalTolerance &&
                     s < kCond1Budget,
                 "1000 items x 49 theta, max |diff| " + fmt(t.worst) + " (tol 1e-12), " +
                     fmt(s) + " s");
}

Outcome criterion2() {
  Timer timer;
  const auto records = fuzz_check("marginal", 200, kSuiteSeed);
  const auto m = tally(records, "marginal");
  const auto n = tally(records, "marginal-normalization");
  const double s = timer.seconds();
  return pass_if(m.records == 200 && m.unexpected == 0 && n.unexpected == 0 &&
                     m.worst <= kMarginalTolerance && n.worst <= kNormalizationTolerance &&
                     s < kCond2Budget,
                 "200 instances, max pattern diff " + fmt(m.worst) + " (tol 1e-8), max |sum-1| " +
                     fmt(n.worst) + " (tol 1e-10), " + fmt(s) + " s");
}

Outcome criterion3() {
  Timer timer;
  const auto t = tally(fuzz_check("lemma-a2", 500, kSuiteSeed), "lemma-a2");
  const double s = timer.seconds();
  return pass_if(t.records == 500 && t.unexpected == 0 && t.worst <= kSumProductTolerance &&
                     s < kCond3Budget,
                 "500 instances m<=8, max |sum-prod| " + fmt(t.worst) + " (tol 1e-12), " +
                     fmt(s) + " s");
}

Outcome criterion4() {
  Timer timer;
  FuzzOptions options;
  options.mc_samples = 1'000'000;
  const auto a1 = fuzz_check("lemma-a1", 50, kSuiteSeed, options);
  const auto a3 = fuzz_check("lemma-a3", 50, kSuiteSeed, options);
  const auto t1 = tally(a1, "lemma-a1");
  const auto t3 = tally(a3, "lemma-a3");
  const auto control = tally(a3, "lemma-a3-unconditional");
  const bool control_failed_band = control.records == 1 && control.unexpected == 0;
  const double s = timer.seconds();
  return pass_if(t1.records == 50 && t3.records == 50 && t1.unexpected == 0 &&
                     t3.unexpected == 0 && control_failed_band && s < kCond4Budget,
                 "lemma A1 failures " + std::to_string(t1.unexpected) + "/50, lemma A3 failures " +
                     std::to_string(t3.unexpected) + "/50 at 1e6 draws (4 SE); negative control " +
                     (control_failed_band ? "outside" : "INSIDE") + " band (|diff| " +
                     fmt(control.worst) + "), " + fmt(s) + " s");
}

Outcome criterion5() {
  Timer timer;
  Engine rng(derive_seed(kSuiteSeed, 5));
  double worst_fa = 0.0;
  double worst_irt = 0.0;
  double worst_rescale = 0.0;
  constexpr std::size_t kN = 100'000;
  for (std::size_t k = 0; k < kN; ++k) {
    const FAItemParams fa = random_fa_item(rng);
    const FAItemParams fa2 = irt_to_fa(fa_to_irt(fa));
    worst_fa = std::max({worst_fa, std::abs(fa2.alpha() - fa.alpha()),
                         std::abs(fa2.tau() - fa.tau())});

    const IRTItemParams irt(uniform(rng, 0.1, 6.0), uniform(rng, -4.0, 4.0), fa.c(), fa.d());
    const IRTItemParams irt2 = fa_to_irt(irt_to_fa(irt));
    worst_irt = std::max({worst_irt, std::abs(irt2.a() - irt.a()), std::abs(irt2.b() - irt.b())});

    const IRTItemParams back = logistic_normal_rescale(
        logistic_normal_rescale(irt, RescaleDirection::LogisticToNormal),
        RescaleDirection::NormalToLogistic);
    worst_rescale = std::max({worst_rescale, std::abs(back.a() - irt.a()),
                              std::abs(back.b() - irt.b())});
  }
  const double s = timer.seconds();
  const double worst = std::max({worst_fa, worst_irt, worst_rescale});
  return pass_if(worst <= kRoundTripTolerance && s < kCond5Budget,
                 "1e5 sets: FA->IRT->FA " + fmt(worst_fa) + ", IRT->FA->IRT " + fmt(worst_irt) +
                     ", 1.7 rescale " + fmt(worst_rescale) + " (tol 1e-12), " + fmt(s) + " s");
}

// Reference density moments by composite Simpson integration on (lo, hi).
std::pair<double, double> simpson_moments(const std::function<double(double)>& density,
                                          double lo, double hi) {
  constexpr int kIntervals = 20000;
  const double h = (hi - lo) / kIntervals;
  double z = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  for (int k = 0; k <= kIntervals; ++k) {
    const double x = lo + h * k;
    const double w = (k == 0 || k == kIntervals) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    const double f = density(x) * w;
    z += f;
    m1 += f * x;
    m2 += f * x * x;
  }
  const double mean = m1 / z;
  return {mean, std::sqrt(m2 / z - mean * mean)};
}

Outcome criterion6() {
  Timer timer;
  std::vector<std::string> notes;
  bool ok = true;

  // Z update: exact Bernoulli conditional, independent across sweeps.
  {
    const std::size_t n = 4;
    const std::vector<std::uint8_t> y = {1, 0, 1, 0, 0, 1, 1, 0};
    const ResponseMatrix data(n, 2, y);
    SamplerConfig config;
    config.seed = derive_seed(kSuiteSeed, 6, 1);
    ChainState s = init_chain(data, config, 0);
    s.theta = {-1.2, 0.3, 0.9, 2.0};
    s.alpha = {0.7, 0.4};
    s.tau = {0.2, -0.5};
    s.c = {0.2, 0.05};
    s.d = {0.9, 0.97};
    constexpr std::size_t kSweeps = 40000;
    std::vector<std::size_t> ones(n * 2, 0);
    for (std::size_t t = 0; t < kSweeps; ++t) {
      update_z(s, data);
      for (std::size_t k = 0; k < n * 2; ++k) ones[k] += s.z[k];
    }
    double worst = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t i = 0; i < 2; ++i) {
        const double f = link_cdf(LinkFunction::Logistic, s.argument(p, i));
        const double expected = z_posterior_prob(data(p, i), f, s.c[i], s.d[i]);
        const double freq = static_cast<double>(ones[p * 2 + i]) / kSweeps;
        const double se = std::sqrt(expected * (1 - expected) / kSweeps);
        const double zscore = se > 0 ? std::abs(freq - expected) / se : std::abs(freq - expected);
        worst = std::max(worst, zscore);
      }
    }
    ok = ok && worst <= kSamplerBand;
    notes.push_back("update_z max |z-score| " + fmt(worst) + " over 8 cells");
  }

  // Guessing slice update: s0 = 3, f0 = 7, d = 1, Z frozen at 0.
  {
    const std::size_t n = 10;
    std::vector<std::uint8_t> y(n * 2, 0);
    for (std::size_t p = 0; p < 3; ++p) y[p * 2] = 1;
    for (std::size_t p = 0; p < n; ++p) y[p * 2 + 1] = p % 2;
    const ResponseMatrix data(n, 2, y);
    SamplerConfig config;
    config.seed = derive_seed(kSuiteSeed, 6, 2);
    ChainState s = init_chain(data, config, 0);
    std::fill(s.z.begin(), s.z.end(), 0);
    constexpr std::size_t kDraws = 50000;
    std::vector<double> trace;
    trace.reserve(kDraws);
    for (std::size_t t = 0; t < kDraws; ++t) {
      s.d[0] = 1.0;
      update_asymptotes(s, data);
      trace.push_back(s.c[0]);
    }
    const auto [mean, sd] = simpson_moments(
        [](double c) { return std::pow(c, 3) * std::pow(1 - c, 6); }, 0.0, 1.0);
    const double sample_mean = std::accumulate(trace.begin(), trace.end(), 0.0) / kDraws;
    const double n_eff = ess(trace).value;
    const double zscore = std::abs(sample_mean - mean) / (sd / std::sqrt(n_eff));
    ok = ok && zscore <= kSamplerBand;
    notes.push_back("c mean " + fmt(sample_mean) + " vs " + fmt(mean) + " (|z| " + fmt(zscore) +
                    ", ESS " + fmt(n_eff) + ")");
  }

  // Inattention slice update: s1 = 8, f1 = 2, c pinned at 0, Z frozen at 1.
  {
    const std::size_t n = 10;
    std::vector<std::uint8_t> y(n * 2, 1);
    y[0] = 0;
    y[2] = 0;
    const ResponseMatrix data(n, 2, y);
    SamplerConfig config;
    config.seed = derive_seed(kSuiteSeed, 6, 3);
    config.model = parse_model_name("nil");
    ChainState s = init_chain(data, config, 0);
    std::fill(s.z.begin(), s.z.end(), 1);
    constexpr std::size_t kDraws = 50000;
    std::vector<double> trace;
    trace.reserve(kDraws);
    for (std::size_t t = 0; t < kDraws; ++t) {
      update_asymptotes(s, data);
      trace.push_back(s.d[0]);
    }
    const auto [mean, sd] = simpson_moments(
        [](double d) { return std::pow(d, 8) * std::pow(1 - d, 2); }, 0.0, 1.0);
    const double sample_mean = std::accumulate(trace.begin(), trace.end(), 0.0) / kDraws;
    const double n_eff = ess(trace).value;
    const double zscore = std::abs(sample_mean - mean) / (sd / std::sqrt(n_eff));
    ok = ok && zscore <= kSamplerBand;
    notes.push_back("d mean " + fmt(sample_mean) + " vs " + fmt(mean) + " (|z| " + fmt(zscore) +
                    ")");
  }
  const double s = timer.seconds();
  std::string detail;
  for (const auto& n : notes) detail += n + "; ";
  return pass_if(ok && s < kCond6Budget, detail + "band 3 SE, " + fmt(s) + " s");
}

// Criteria 7 and 10 share the recovery run.
struct RecoveryRun {
  bool ready = false;
  std::string error;
  fs::path dir;
  fs::path run1;
  fs::path run2;
  double fit_seconds = 0.0;
};

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = quote(FA4P_CLI_PATH) + " " + args + " > " + quote(log) + " 2>&1";
  return std::system(cmd.c_str());
}

RecoveryRun& recovery_run(bool need_second) {
  static RecoveryRun run;
  if (!run.ready && run.error.empty()) {
    run.dir = fs::path(FA4P_WORK_DIR) / "recovery";
    fs::remove_all(run.dir);
    fs::create_directories(run.dir);

    // Items from the priors: tau ~ N(0,1), alpha ~ TN(0.25, 1; 0, 1),
    // c ~ U(0,1), d | c ~ U(c, 1).
    Engine rng(derive_seed(kRecoverySeed, 7));
    std::string items = "id,alpha,tau,c,d\n";
    for (int i = 1; i <= 20; ++i) {
      const double tau = std_normal(rng);
      const double alpha = truncated_normal(rng, kAlphaPriorMean, kAlphaPriorSd, 0.0, 1.0);
      const double c = uniform(rng, 0.0, 1.0);
      const double d = uniform(rng, c, 1.0);
      items += "item" + std::to_string(i) + ',' + format17(alpha) + ',' + format17(tau) + ',' +
               format17(c) + ',' + format17(d) + '\n';
    }
    write_file_atomic(run.dir / "items_true.csv", items);
    if (run_cli("simulate --items " + quote(run.dir / "items_true.csv") +
                    " --n 2000 --link logistic --seed " + std::to_string(kRecoverySeed) +
                    " --out " + quote(run.dir / "sim"),
                run.dir / "simulate.log") != 0) {
      run.error = "simulate failed";
      return run;
    }
    run.run1 = run.dir / "run1";
    Timer timer;
    const std::string fit_args = "fit " + quote(run.dir / "sim" / "responses.csv") +
                                 " --model 4pl --chains 2 --burnin 4000 --samples 4000"
                                 " --thin 1 --seed " +
                                 std::to_string(kRecoverySeed) + " --out ";
    if (run_cli(fit_args + quote(run.run1), run.dir / "fit1.log") != 0) {
      run.error = "fit run 1 failed";
      return run;
    }
    run.fit_seconds = timer.seconds();
    run.ready = true;
  }
  if (need_second && run.ready && run.run2.empty()) {
    run.run2 = run.dir / "run2";
    const std::string fit_args = "fit " + quote(run.dir / "sim" / "responses.csv") +
                                 " --model 4pl --chains 2 --burnin 4000 --samples 4000"
                                 " --thin 1 --seed " +
                                 std::to_string(kRecoverySeed) + " --out ";
    if (run_cli(fit_args + quote(run.run2), run.dir / "fit2.log") != 0) {
      run.error = "fit run 2 failed";
    }
  }
  return run;
}

double rmse(const std::vector<double>& a, const std::vector<double>& b) {
  return std::sqrt(mse_compare(a, b));
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
    syy += (y[k] - my) * (y[k] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> column(const CsvTable& t, const std::string& name) {
  const auto col = t.column(name);
  if (!col) throw std::runtime_error("missing column " + name);
  std::vector<double> out;
  for (const auto& row : t.rows) out.push_back(parse_number(row[*col], name));
  return out;
}

Outcome criterion7() {
  auto& run = recovery_run(false);
  if (!run.ready) return pass_if(false, run.error);
  const auto est = read_csv(run.run1 / "items.csv");
  const auto persons = read_csv(run.run1 / "persons.csv");
  std::ifstream truth_in(run.dir / "sim" / "truth.json");
  const auto truth = nlohmann::json::parse(truth_in);

  std::vector<double> ta, tb, tc, td;
  for (const auto& item : truth["items"]) {
    ta.push_back(item["a"].get<double>());
    tb.push_back(item["b"].get<double>());
    tc.push_back(item["c"].get<double>());
    td.push_back(item["d"].get<double>());
  }
  const double ra = rmse(column(est, "a"), ta);
  const double rb = rmse(column(est, "b"), tb);
  const double rc = rmse(column(est, "c"), tc);
  const double rd = rmse(column(est, "d"), td);
  const double r = pearson(column(persons, "theta_hat"), truth["theta"].get<std::vector<double>>());
  double max_rhat = 0.0;
  for (const char* name : {"rhat_alpha", "rhat_tau", "rhat_c", "rhat_d"}) {
    for (double v : column(est, name)) max_rhat = std::max(max_rhat, std::isnan(v) ? INFINITY : v);
  }
  const bool ok = ra <= kRmseA && rb <= kRmseB && rc <= kRmseC && rd <= kRmseD &&
                  r >= kThetaCorrelation && max_rhat < kRhatLimit;
  return pass_if(ok, "RMSE a " + fmt(ra) + " (<=0.6), b " + fmt(rb) + " (<=0.35), c " + fmt(rc) +
                         " (<=0.08), d " + fmt(rd) + " (<=0.08); cor(theta) " + fmt(r) +
                         " (>=0.85); max R-hat " + fmt(max_rhat) + " (<1.05); fit " +
                         fmt(run.fit_seconds) + " s");
}

Outcome criterion8() {
  Timer timer;
  const auto table = read_csv(FA4P_FIXTURE_DIR "/msatb_items.csv");
  const char* params[4] = {"a", "b", "c", "d"};
  double worst = 0.0;
  std::string values;
  for (int k = 0; k < 4; ++k) {
    const double mse =
        mse_compare(column(table, std::string("jags_") + params[k]),
                    column(table, std::string("mirt_") + params[k]));
    worst = std::max(worst, std::abs(mse - kPublishedMse[k]));
    values += std::string(k ? ", " : "") + params[k] + " " + fmt(mse);
  }
  const double s = timer.seconds();
  return pass_if(worst <= kPublishedMseTolerance && s < kCond8Budget,
                 "JAGS vs mirt MSE " + values + "; max deviation from 0.0779/0.0202/0.0019/0.0036 " +
                     fmt(worst) + " (tol 1e-4)");
}

Outcome criterion9() {
  const char* path = std::getenv("FA4P_MSATB_CSV");
  if (path == nullptr || *path == '\0') {
    return {Outcome::Status::Skip, "FA4P_MSATB_CSV not set; golden MSATB check skipped"};
  }
  const ResponseMatrix data = load_responses(path);
  SamplerConfig config;
  const FitResult result = fit(data, config);
  const auto table = read_csv(FA4P_FIXTURE_DIR "/msatb_items.csv");
  const auto item_col = *table.column("item");
  const char* params[4] = {"a", "b", "c", "d"};
  bool ok = true;
  std::string detail;
  for (int k = 0; k < 4; ++k) {
    std::vector<double> ours;
    std::vector<double> jags;
    const auto jcol = *table.column(std::string("jags_") + params[k]);
    for (const auto& row : table.rows) {
      const auto it = std::find(result.item_ids.begin(), result.item_ids.end(), row[item_col]);
      if (it == result.item_ids.end()) {
        return pass_if(false, "item " + row[item_col] + " missing from the supplied dataset");
      }
      const auto i = static_cast<std::size_t>(it - result.item_ids.begin());
      const auto& irt = result.irt_estimates[i];
      const double v[4] = {irt.a(), irt.b(), irt.c(), irt.d()};
      ours.push_back(v[k]);
      jags.push_back(parse_number(row[jcol], "fixture"));
    }
    const double mse = mse_compare(ours, jags);
    ok = ok && mse <= kGoldenMseFactor * kPublishedMse[k];
    detail += std::string(params[k]) + " MSE " + fmt(mse) + " (<=" +
              fmt(kGoldenMseFactor * kPublishedMse[k]) + "); ";
  }
  const auto averaged = pattern_average(make_score_table(result, data), data);
  double perfect_sum = 0.0;
  std::size_t perfect = 0;
  for (std::size_t p = 0; p < data.persons(); ++p) {
    if (static_cast<std::size_t>(data.total(p)) == data.items()) {
      perfect_sum += averaged.ngni_total[p];
      ++perfect;
    }
  }
  const double perfect_mean = perfect ? perfect_sum / static_cast<double>(perfect) : NAN;
  ok = ok && perfect > 0 && std::abs(perfect_mean - kPerfectNgni) <= kPerfectNgniBand;
  return pass_if(ok, detail + "perfect-score NGNI " + fmt(perfect_mean) + " (19.65 +- 0.2)");
}

bool same_bytes(const fs::path& a, const fs::path& b) {
  std::ifstream fa(a, std::ios::binary);
  std::ifstream fb(b, std::ios::binary);
  if (!fa || !fb) return false;
  return std::string(std::istreambuf_iterator<char>(fa), {}) ==
         std::string(std::istreambuf_iterator<char>(fb), {});
}

Outcome criterion10() {
  auto& run = recovery_run(true);
  if (!run.ready || !run.error.empty()) return pass_if(false, run.error);
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(run.run1)) {
    names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  std::size_t identical = 0;
  std::string differing;
  for (const auto& name : names) {
    if (same_bytes(run.run1 / name, run.run2 / name)) {
      ++identical;
    } else {
      differing += " " + name;
    }
  }
  std::size_t run2_files = 0;
  for ([[maybe_unused]] const auto& entry : fs::directory_iterator(run.run2)) ++run2_files;
  const bool ok = !names.empty() && identical == names.size() && run2_files == names.size();
  return pass_if(ok, std::to_string(identical) + "/" + std::to_string(names.size()) +
                         " artifacts byte-identical across two fit runs" +
                         (differing.empty() ? "" : "; differing:" + differing));
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int number;
    const char* title;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "conditional equivalence", criterion1},
      {2, "marginal equivalence", criterion2},
      {3, "sum-product exchange", criterion3},
      {4, "threshold CDF and conditional independence (Monte Carlo)", criterion4},
      {5, "transformation round-trip", criterion5},
      {6, "sampler conditional correctness", criterion6},
      {7, "parameter recovery", criterion7},
      {8, "MSE recomputation from the MSATB item table", criterion8},
      {9, "MSATB golden fit (dataset-gated)", criterion9},
      {10, "end-to-end determinism", criterion10},
  };
  std::set<int> selected;
  for (int k = 1; k < argc; ++k) selected.insert(std::atoi(argv[k]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.contains(c.number)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Outcome::Status::Fail, std::string("exception: ") + e.what()};
    }
    const char* status = o.status == Outcome::Status::Pass   ? "PASS"
                         : o.status == Outcome::Status::Skip ? "SKIP"
                                                             : "FAIL";
    if (o.status == Outcome::Status::Fail) ++failures;
    std::cout << "criterion " << c.number << " " << status << " " << c.title << ": " << o.detail
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
