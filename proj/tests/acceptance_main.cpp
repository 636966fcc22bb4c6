// Acceptance gate: eight numbered checks covering the closed-form moment
// values, the decomposition invariants, the local-likelihood posterior
// against a dense oracle, tracking of a drifting slope, premia recovery on
// simulated panels, sort-engine power and size, end-to-end determinism of
// the command-line pipeline, and byte-exact table rendering.  One PASS/FAIL
// line per criterion; exit status 0 only if all eight pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hmr/cross_section.hpp"
#include "hmr/csv.hpp"
#include "hmr/decompose.hpp"
#include "hmr/errors.hpp"
#include "hmr/moments.hpp"
#include "hmr/ols.hpp"
#include "hmr/qbll.hpp"
#include "hmr/report.hpp"
#include "hmr/rng.hpp"
#include "hmr/simulate.hpp"
#include "hmr/sorts.hpp"
#include "oracle.hpp"
#include "report_fixtures.hpp"

namespace {

// ---------------------------------------------------------------- harness

struct CheckFailure {
  std::string msg;
};

[[noreturn]] void fail(const std::string& msg) { throw CheckFailure{msg}; }

int g_failures = 0;

void run_criterion(int index, const std::string& name, double budget_seconds,
                   const std::function<void()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string verdict = "PASS";
  std::string detail;
  try {
    body();
  } catch (const CheckFailure& f) {
    verdict = "FAIL";
    detail = f.msg;
  } catch (const std::exception& e) {
    verdict = "FAIL";
    detail = std::string("unexpected exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (verdict == "PASS" && secs > budget_seconds) {
    verdict = "FAIL";
    detail = "runtime budget exceeded";
  }
  if (detail.empty())
    std::printf("[%s] %d. %s (%.1f s, budget %.0f s)\n", verdict.c_str(),
                index, name.c_str(), secs, budget_seconds);
  else
    std::printf("[%s] %d. %s (%.1f s, budget %.0f s): %s\n", verdict.c_str(),
                index, name.c_str(), secs, budget_seconds, detail.c_str());
  std::fflush(stdout);
  if (verdict != "PASS") ++g_failures;
}

bool same_bits(double a, double b) {
  return std::memcmp(&a, &b, sizeof(double)) == 0;
}

double ulp_of(double v) {
  v = std::fabs(v);
  return std::nextafter(v, std::numeric_limits<double>::infinity()) - v;
}

bool close_rel(double got, double want, double tol) {
  return std::fabs(got - want) <=
         tol * std::max({1.0, std::fabs(got), std::fabs(want)});
}

std::string g_hmr_path;  // --hmr: the pipeline executable under test
std::string g_work_dir = "acceptance_work";

// ------------------------------------------------- 1. closed-form moments

constexpr double kMomentTol = 1e-12;

void criterion_moments() {
  const auto expect = [](const char* what, double got, double want) {
    if (!close_rel(got, want, kMomentTol))
      fail(std::string(what) + ": got " + std::to_string(got) + ", want " +
           std::to_string(want));
  };

  const std::vector<double> zeros(78, 0.0);
  std::vector<double> equal(78, 0.001);
  std::vector<double> single(78, 0.0);
  single[0] = 0.01;
  std::vector<double> pair(78, 0.0);
  pair[0] = 0.01;
  pair[1] = -0.01;

  expect("variance of 78 zeros", hmr::realized_variance(zeros), 0.0);
  expect("variance of 78 equal returns", hmr::realized_variance(equal),
         7.8e-5);
  expect("variance with one nonzero return", hmr::realized_variance(single),
         1e-4);

  expect("skewness of a symmetric pair", hmr::realized_skewness(pair), 0.0);
  expect("skewness with one nonzero return", hmr::realized_skewness(single),
         std::sqrt(78.0));
  expect("skewness of equal returns", hmr::realized_skewness(equal), 1.0);

  expect("kurtosis of equal returns", hmr::realized_kurtosis(equal), 1.0);
  expect("kurtosis with one nonzero return", hmr::realized_kurtosis(single),
         78.0);
  expect("kurtosis of a symmetric pair", hmr::realized_kurtosis(pair), 39.0);
}

// --------------------------------------- 2. decomposition invariants

constexpr std::size_t kSeries = 1000;
constexpr std::size_t kLen = 4096;
constexpr double kAdditivityUlps = 4.0;
constexpr double kOrthoBound = 0.2;

void criterion_decompose() {
  std::vector<double> x(kLen), s_full(kLen), l_full(kLen), s_pre(kLen),
      l_pre(kLen);

  for (std::size_t i = 0; i < kSeries; ++i) {
    const int J = 1 + static_cast<int>(i % 8);
    std::mt19937_64 eng = hmr::substream(20260823, i);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t t = 0; t < kLen; ++t) x[t] = normal(eng);

    hmr::decompose_into(x.data(), kLen, J, s_full.data(), l_full.data());

    for (std::size_t t = 0; t < kLen; ++t) {
      const double scale =
          std::max({std::fabs(x[t]), std::fabs(s_full[t]), std::fabs(l_full[t])});
      if (std::fabs(x[t] - (s_full[t] + l_full[t])) >
          kAdditivityUlps * ulp_of(scale))
        fail("additivity worse than 4 ulp (series " + std::to_string(i) +
             ", t=" + std::to_string(t) + ")");
    }

    // every truncation must reproduce the full run bitwise on its prefix:
    // the freshest element is compared at every n, interior elements on a
    // phase-rotated prime stride, and the whole prefix on a coarser stride
    for (std::size_t n = 1; n <= kLen; ++n) {
      hmr::decompose_into(x.data(), n, J, s_pre.data(), l_pre.data());
      if (!same_bits(s_pre[n - 1], s_full[n - 1]) ||
          !same_bits(l_pre[n - 1], l_full[n - 1]))
        fail("prefix of length " + std::to_string(n) +
             " differs from the full run (series " + std::to_string(i) + ")");
      for (std::size_t t = n % 61; t + 1 < n; t += 61)
        if (!same_bits(s_pre[t], s_full[t]) || !same_bits(l_pre[t], l_full[t]))
          fail("prefix interior differs at t=" + std::to_string(t) +
               " for truncation " + std::to_string(n));
      if (n % 256 == 0 &&
          (std::memcmp(s_pre.data(), s_full.data(), n * sizeof(double)) != 0 ||
           std::memcmp(l_pre.data(), l_full.data(), n * sizeof(double)) != 0))
        fail("dense prefix comparison failed at truncation " +
             std::to_string(n));
    }
  }

  // short and long components stay nearly uncorrelated on persistent input
  constexpr std::size_t kArLen = 10000;
  constexpr double kPhi = 0.5;
  std::vector<double> ar(kArLen), s(kArLen), l(kArLen);
  for (int J = 1; J <= 8; ++J) {
    std::mt19937_64 eng = hmr::substream(555, static_cast<uint64_t>(J));
    std::normal_distribution<double> normal(0.0, 1.0);
    ar[0] = normal(eng);
    for (std::size_t t = 1; t < kArLen; ++t)
      ar[t] = kPhi * ar[t - 1] + normal(eng);
    hmr::decompose_into(ar.data(), kArLen, J, s.data(), l.data());
    double ms = 0, ml = 0;
    for (std::size_t t = 0; t < kArLen; ++t) {
      ms += s[t];
      ml += l[t];
    }
    ms /= kArLen;
    ml /= kArLen;
    double css = 0, cll = 0, csl = 0;
    for (std::size_t t = 0; t < kArLen; ++t) {
      css += (s[t] - ms) * (s[t] - ms);
      cll += (l[t] - ml) * (l[t] - ml);
      csl += (s[t] - ms) * (l[t] - ml);
    }
    const double corr = csl / std::sqrt(css * cll);
    if (std::fabs(corr) >= kOrthoBound)
      fail("|corr(short, long)| = " + std::to_string(std::fabs(corr)) +
           " at J=" + std::to_string(J));
  }
}

// ------------------------------------- 3. local posterior vs dense oracle

constexpr double kPosteriorTol = 1e-10;
constexpr int kPosteriorInstances = 100;

oracle::Mat to_oracle(const Eigen::MatrixXd& m) {
  oracle::Mat out(m.rows(), std::vector<double>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
  return out;
}

std::vector<double> to_oracle(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

void criterion_posterior() {
  std::mt19937_64 eng = hmr::substream(303, 7);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (int inst = 0; inst < kPosteriorInstances; ++inst) {
    const int T = 10 + static_cast<int>(eng() % 191);  // 10..200
    const int k = 1 + static_cast<int>(eng() % 5);     // 1..5 columns

    Eigen::MatrixXd X(T, k);
    for (int t = 0; t < T; ++t) {
      X(t, 0) = 1.0;
      for (int j = 1; j < k; ++j) X(t, j) = normal(eng);
    }
    Eigen::VectorXd btrue(k);
    for (int j = 0; j < k; ++j) btrue(j) = normal(eng);
    Eigen::VectorXd y = X * btrue;
    for (int t = 0; t < T; ++t) y(t) += 0.5 * normal(eng);

    Eigen::VectorXd vartheta(T);
    if (inst % 2 == 0) {
      const int s = static_cast<int>(eng() % T);
      const double H = 1.0 + unif(eng) * 2.0 * T;
      vartheta = hmr::kernel_weights(T, s, H, inst % 4 < 2).vartheta;
    } else {
      for (int t = 0; t < T; ++t) vartheta(t) = 0.05 + 1.95 * unif(eng);
    }

    hmr::NormalGammaPrior prior;
    prior.beta0 = Eigen::VectorXd(k);
    for (int j = 0; j < k; ++j) prior.beta0(j) = normal(eng);
    prior.kappa0 = Eigen::MatrixXd::Zero(k, k);
    if (inst % 3 != 0)  // every third instance keeps the diffuse prior
      for (int j = 0; j < k; ++j) prior.kappa0(j, j) = 4.0 * unif(eng);
    prior.alpha0 = 0.5 + 2.5 * unif(eng);
    prior.gamma0 = 0.5 + 2.5 * unif(eng);

    const hmr::LocalPosterior got =
        hmr::local_posterior(X, y, vartheta, prior);
    const oracle::Posterior want = oracle::conjugate_posterior(
        to_oracle(X), to_oracle(y), to_oracle(vartheta),
        to_oracle(prior.beta0), to_oracle(prior.kappa0), prior.alpha0,
        prior.gamma0);

    const std::string tag = " (instance " + std::to_string(inst) + ")";
    for (int j = 0; j < k; ++j) {
      if (!close_rel(got.beta_hat(j), want.beta_hat[j], kPosteriorTol))
        fail("beta_hat mismatch" + tag);
      if (!close_rel(got.beta_bar(j), want.beta_bar[j], kPosteriorTol))
        fail("beta_bar mismatch" + tag);
      for (int j2 = 0; j2 < k; ++j2)
        if (!close_rel(got.kappa_bar(j, j2), want.kappa_bar[j][j2],
                       kPosteriorTol))
          fail("kappa_bar mismatch" + tag);
    }
    if (!close_rel(got.alpha_bar, want.alpha_bar, kPosteriorTol))
      fail("alpha_bar mismatch" + tag);
    if (!close_rel(got.gamma_bar, want.gamma_bar, kPosteriorTol))
      fail("gamma_bar mismatch" + tag);
  }

  // uniform-kernel limit with a diffuse prior collapses onto plain OLS
  for (int inst = 0; inst < 25; ++inst) {
    const int T = 20 + static_cast<int>(eng() % 181);
    const int k = 1 + static_cast<int>(eng() % 5);
    Eigen::MatrixXd X(T, k);
    Eigen::VectorXd y(T);
    for (int t = 0; t < T; ++t) {
      X(t, 0) = 1.0;
      for (int j = 1; j < k; ++j) X(t, j) = normal(eng);
      y(t) = normal(eng);
    }
    const Eigen::VectorXd vartheta =
        hmr::kernel_weights(T, static_cast<int>(eng() % T), 1e12, true)
            .vartheta;
    hmr::NormalGammaPrior diffuse;
    diffuse.beta0 = Eigen::VectorXd::Zero(k);
    diffuse.kappa0 = Eigen::MatrixXd::Zero(k, k);
    const hmr::LocalPosterior post =
        hmr::local_posterior(X, y, vartheta, diffuse);
    const hmr::OlsFit fit = hmr::ols(X, y, false);
    for (int j = 0; j < k; ++j)
      if (!close_rel(post.beta_bar(j), fit.coef(j), kPosteriorTol))
        fail("uniform/diffuse reduction differs from OLS (instance " +
             std::to_string(inst) + ")");
  }
}

// --------------------------------------------- 4. drifting-slope tracking

constexpr int kTrackT = 1000;
constexpr double kTrackAmplitude = 1.0;
constexpr int kTrackIterations = 1000;

void criterion_tracking() {
  std::mt19937_64 eng = hmr::substream(4242, 0);
  std::normal_distribution<double> normal(0.0, 1.0);

  Eigen::MatrixXd X(kTrackT, 2);
  Eigen::VectorXd y(kTrackT);
  std::vector<double> slope(kTrackT);
  for (int t = 0; t < kTrackT; ++t) {
    slope[t] = 1.0 + kTrackAmplitude *
                         std::sin(2.0 * M_PI * t / static_cast<double>(kTrackT));
    X(t, 0) = 1.0;
    X(t, 1) = normal(eng);
    y(t) = 0.5 + slope[t] * X(t, 1) + 0.5 * normal(eng);
  }

  hmr::TvpOptions opt;
  opt.H = 0.0;  // defaults to sqrt(T)
  opt.iterations = kTrackIterations;
  opt.burn_frac = 0.1;
  opt.seed = 99;
  const hmr::TvpSummary sum = hmr::sample_tvp(X, y, opt);

  double sq = 0.0;
  for (int t = 0; t < kTrackT; ++t) {
    const double e = sum.mean(t, 1) - slope[t];
    sq += e * e;
  }
  const double rmse = std::sqrt(sq / kTrackT);
  if (!(rmse < kTrackAmplitude / 3.0))
    fail("posterior-mean RMSE " + std::to_string(rmse) +
         " not below amplitude/3 = " + std::to_string(kTrackAmplitude / 3.0));
}

// ------------------------------------------------- 5. premia recovery

constexpr int kFmbSeeds = 20;
constexpr double kFmbPremium = 0.5;
constexpr double kFmbTol = 0.05;
constexpr double kDynamicRelTol = 0.10;

void criterion_premia() {
  hmr::PanelDgp dgp;  // N=100, T=2000, premium 0.5, unit vols
  for (int s = 1; s <= kFmbSeeds; ++s) {
    const hmr::SimulatedPanel sim =
        hmr::simulate_return_panel(1000 + static_cast<uint64_t>(s), dgp);
    const hmr::RiskPremiaEstimate est =
        hmr::fama_macbeth(sim.panel, sim.factors);
    const double lambda_static = est.lambda(1);
    if (std::fabs(lambda_static - kFmbPremium) > kFmbTol)
      fail("static premium " + std::to_string(lambda_static) +
           " misses 0.5 +/- 0.05 (seed " + std::to_string(s) + ")");

    hmr::TvpOptions opt;  // bandwidth defaults to sqrt(T)
    const hmr::DynamicPremia dyn =
        hmr::dynamic_fama_macbeth(sim.panel, sim.factors, opt);
    const double lambda_dynamic = dyn.lambda_bar(1);
    if (std::fabs(lambda_dynamic - lambda_static) >
        kDynamicRelTol * std::fabs(lambda_static))
      fail("dynamic mean " + std::to_string(lambda_dynamic) +
           " not within 10% of static " + std::to_string(lambda_static) +
           " (seed " + std::to_string(s) + ")");
  }
}

// ------------------------------------------- 6. sort power and size

constexpr double kSortPremium = -0.0004;  // per-day premium per unit loading
constexpr int kPowerSeeds = 20;
constexpr int kPowerRequired = 19;  // 95% of 20
constexpr int kNullSeeds = 100;
constexpr int kNullRequired = 94;

hmr::SortReport run_panel_sort(uint64_t seed, double premium) {
  hmr::PanelDgp dgp;
  dgp.n_assets = 500;
  dgp.n_periods = 2000;
  dgp.premia = {premium};
  dgp.factor_vol = 0.003;
  dgp.beta_sd = 1.0;
  dgp.noise_vol = 0.005;
  const hmr::SimulatedPanel sim = hmr::simulate_return_panel(seed, dgp);

  hmr::SortConfig sc;
  sc.window = 63;
  sc.holding = 5;
  sc.step = 5;
  sc.n_quantiles = 5;
  sc.exposure_factors = {"F1"};
  sc.sort_variable = "F1";
  return hmr::run_sort(sim.panel, sim.factors, sc);
}

void criterion_sorts() {
  int detected = 0;
  for (int s = 1; s <= kPowerSeeds; ++s)
    if (run_panel_sort(static_cast<uint64_t>(s), kSortPremium).high_low_tstat <
        -2.0)
      ++detected;
  if (detected < kPowerRequired)
    fail("injected premium detected in only " + std::to_string(detected) +
         "/" + std::to_string(kPowerSeeds) + " seeds");

  int quiet = 0;
  for (int s = 1; s <= kNullSeeds; ++s)
    if (std::fabs(
            run_panel_sort(static_cast<uint64_t>(s), 0.0).high_low_tstat) <
        2.0)
      ++quiet;
  if (quiet < kNullRequired)
    fail("null |t| < 2 in only " + std::to_string(quiet) + "/" +
         std::to_string(kNullSeeds) + " seeds");
}

// --------------------------------------- 7. end-to-end determinism

void run_cli(const std::string& args) {
  const std::string cmd =
      "\"" + g_hmr_path + "\" " + args + " > /dev/null 2>&1";
  if (std::system(cmd.c_str()) != 0) fail("pipeline command failed: " + args);
}

void run_pipeline(const std::string& dir, int threads) {
  const std::string common =
      " --dir " + dir + " --set threads=" + std::to_string(threads) +
      " --set sim_assets=20 --set sim_days=400 --set sim_seed=11"
      " --set j_daily=6 --set j_weekly=4 --set frequency=daily"
      " --set seed=3";
  for (const char* stage : {"simulate", "ingest", "moments", "decompose",
                            "factors", "sort", "crosssection", "tvp",
                            "report"})
    run_cli(std::string(stage) + common);
}

std::map<std::string, std::string> snapshot(const std::string& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry :
       std::filesystem::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string rel =
        std::filesystem::relative(entry.path(), dir).string();
    files[rel] = hmr::read_text_file(entry.path().string());
  }
  return files;
}

bool is_config_echo(const std::string& name) {
  const std::string suffix = ".config.resolved";
  return name.size() >= suffix.size() &&
         name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void criterion_determinism() {
  if (g_hmr_path.empty()) fail("--hmr <pipeline binary> not provided");
  std::filesystem::remove_all(g_work_dir);
  std::filesystem::create_directories(g_work_dir);
  const std::string a = g_work_dir + "/run_a";
  const std::string b = g_work_dir + "/run_b";
  const std::string c = g_work_dir + "/run_c";

  run_pipeline(a, 1);
  run_pipeline(b, 1);
  run_pipeline(c, 4);

  const auto fa = snapshot(a);
  const auto fb = snapshot(b);
  const auto fc = snapshot(c);
  if (fa.empty()) fail("pipeline produced no artifacts");
  if (fa.size() != fb.size() || fa.size() != fc.size())
    fail("runs produced different artifact sets");

  for (const auto& [name, bytes] : fa) {
    const auto ib = fb.find(name);
    if (ib == fb.end() || ib->second != bytes)
      fail("rerun differs in " + name);
    const auto ic = fc.find(name);
    if (ic == fc.end()) fail("threaded run is missing " + name);
    // the config echo legitimately records the differing threads= setting;
    // every computed artifact must match byte for byte
    if (!is_config_echo(name) && ic->second != bytes)
      fail("thread count changed the bytes of " + name);
  }
}

// --------------------------------------------- 8. golden table rendering

void criterion_goldens() {
  const auto golden = [](const char* name) {
    return hmr::read_text_file(std::string(HMR_SOURCE_DIR) +
                               "/tests/golden/" + name);
  };
  if (hmr::render_sort_table(fixtures::golden_sort_panels()) !=
      golden("sort_table.golden.txt"))
    fail("sort table rendering differs from sort_table.golden.txt");
  if (hmr::render_premia_table("Static premia",
                               fixtures::golden_static_premia()) !=
      golden("premia_static.golden.txt"))
    fail("static premia rendering differs from premia_static.golden.txt");
  if (hmr::render_premia_table("Time-varying premia",
                               fixtures::golden_dynamic_premia()) !=
      golden("premia_tvp.golden.txt"))
    fail("dynamic premia rendering differs from premia_tvp.golden.txt");
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--hmr" && i + 1 < argc)
      g_hmr_path = argv[++i];
    else if (arg == "--work" && i + 1 < argc)
      g_work_dir = argv[++i];
    else {
      std::fprintf(stderr,
                   "usage: %s --hmr <pipeline binary> [--work <dir>]\n",
                   argv[0]);
      return 2;
    }
  }

  run_criterion(1, "realized-moment closed forms", 1.0, criterion_moments);
  run_criterion(2, "decomposition invariants", 30.0, criterion_decompose);
  run_criterion(3, "local posterior vs dense oracle", 60.0,
                criterion_posterior);
  run_criterion(4, "drifting-slope tracking", 300.0, criterion_tracking);
  run_criterion(5, "risk premia recovery", 600.0, criterion_premia);
  run_criterion(6, "sort power and size", 600.0, criterion_sorts);
  run_criterion(7, "end-to-end determinism", 300.0, criterion_determinism);
  run_criterion(8, "golden table rendering", 60.0, criterion_goldens);

  return g_failures == 0 ? 0 : 1;
}
