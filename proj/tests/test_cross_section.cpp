#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hmr/cross_section.hpp"
#include "hmr/errors.hpp"
#include "hmr/simulate.hpp"
#include "oracle.hpp"

using namespace hmr;

TEST_CASE("injected premium is recovered on a simulated panel") {
  PanelDgp dgp;  // 100 assets x 2000 periods, premium 0.5
  const SimulatedPanel sim = simulate_return_panel(11, dgp);
  const RiskPremiaEstimate est = fama_macbeth(sim.panel, sim.factors);
  REQUIRE(est.lambda.size() == 2);
  CHECK(std::fabs(est.lambda(0)) < 0.05);         // cross-sectional intercept
  CHECK(std::fabs(est.lambda(1) - 0.5) < 0.05);   // premium
  CHECK(est.n_assets == 100);
  CHECK(est.n_periods == 1999);
  CHECK(est.tstat(1) > 4.0);
  CHECK(est.r2 > 0.9);
}

TEST_CASE("two premia with opposite signs are recovered") {
  PanelDgp dgp;
  dgp.premia = {0.5, -0.3};
  const SimulatedPanel sim = simulate_return_panel(29, dgp);
  const RiskPremiaEstimate est = fama_macbeth(sim.panel, sim.factors);
  REQUIRE(est.lambda.size() == 3);
  CHECK(std::fabs(est.lambda(1) - 0.5) < 0.05);
  CHECK(std::fabs(est.lambda(2) + 0.3) < 0.05);
}

TEST_CASE("noiseless panel: perfect second-stage fit through the origin") {
  const int T = 400, N = 50;
  const double lambda = 0.25;
  std::mt19937_64 eng(5);
  std::normal_distribution<double> nd(0.0, 1.0);

  FactorMatrix fm;
  fm.freq = Frequency::daily;
  fm.names = {"F"};
  fm.dates.resize(T);
  fm.values = Matrix(T, 1);
  double xs = 0.0;
  std::vector<double> x(T);
  for (int t = 0; t < T; ++t) {
    x[t] = nd(eng);
    xs += x[t];
  }
  for (int t = 0; t < T; ++t) {
    x[t] -= xs / T;
    fm.dates[t] = t;
    fm.values.at(t, 0) = x[t];
  }

  ReturnPanel panel;
  panel.freq = Frequency::daily;
  panel.dates = fm.dates;
  panel.returns = Matrix(T, N);
  std::vector<double> b(N);
  for (int i = 0; i < N; ++i) {
    b[i] = nd(eng);
    panel.assets.push_back("A" + std::to_string(i));
    panel.returns.at(0, i) = 0.0;
    for (int t = 0; t + 1 < T; ++t)
      panel.returns.at(t + 1, i) = b[i] * (x[t] + lambda);
  }

  const RiskPremiaEstimate est = fama_macbeth(panel, fm);
  CHECK(est.r2 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::fabs(est.lambda(0)) < 1e-8);
  // the factor mean over the first T-1 rows is not exactly zero, so allow
  // the O(1/T) wobble around the injected value
  CHECK(std::fabs(est.lambda(1) - lambda) < 0.05);
}

TEST_CASE("both stages agree with the dense oracle") {
  const int T = 60, N = 12, K = 2;
  std::mt19937_64 eng(31);
  std::normal_distribution<double> nd(0.0, 1.0);

  FactorMatrix fm;
  fm.freq = Frequency::daily;
  fm.names = {"F1", "F2"};
  fm.dates.resize(T);
  fm.values = Matrix(T, K);
  for (int t = 0; t < T; ++t) {
    fm.dates[t] = t;
    for (int j = 0; j < K; ++j) fm.values.at(t, j) = nd(eng);
  }

  ReturnPanel panel;
  panel.freq = Frequency::daily;
  panel.dates = fm.dates;
  panel.returns = Matrix(T, N);
  for (int i = 0; i < N; ++i) {
    panel.assets.push_back("A" + std::to_string(i));
    for (int t = 0; t < T; ++t) panel.returns.at(t, i) = nd(eng);
  }

  const RiskPremiaEstimate est = fama_macbeth(panel, fm);

  // replicate with the oracle: loadings from predictive pairs, then the
  // cross-sectional regression of mean returns on the loadings
  const int P = T - 1;
  oracle::Mat B(N, std::vector<double>(K + 1, 1.0));
  std::vector<double> rbar(N);
  for (int i = 0; i < N; ++i) {
    oracle::Mat X(P, std::vector<double>(K + 1));
    std::vector<double> y(P);
    double sum = 0.0;
    for (int t = 0; t < P; ++t) {
      X[t][0] = 1.0;
      for (int j = 0; j < K; ++j) X[t][j + 1] = fm.values.at(t, j);
      y[t] = panel.returns.at(t + 1, i);
      sum += y[t];
    }
    const oracle::Ols fit = oracle::ols(X, y);
    for (int j = 0; j < K; ++j) B[i][j + 1] = fit.coef[j + 1];
    rbar[i] = sum / P;
  }
  const oracle::Ols cs = oracle::ols(B, rbar);
  for (int j = 0; j <= K; ++j) {
    CHECK(est.lambda(j) == doctest::Approx(cs.coef[j]).epsilon(1e-10));
    CHECK(est.tstat(j) ==
          doctest::Approx(cs.coef[j] / cs.se[j]).epsilon(1e-10));
  }
  CHECK(est.r2 == doctest::Approx(cs.r2).epsilon(1e-10));
}

TEST_CASE("errors-in-variables adjustment deflates the t-stats") {
  PanelDgp dgp;
  dgp.n_assets = 60;
  dgp.n_periods = 600;
  const SimulatedPanel sim = simulate_return_panel(3, dgp);

  FmbConfig plain, adj;
  adj.shanken = true;
  const RiskPremiaEstimate a = fama_macbeth(sim.panel, sim.factors, plain);
  const RiskPremiaEstimate b = fama_macbeth(sim.panel, sim.factors, adj);
  REQUIRE(a.lambda.size() == b.lambda.size());
  for (int j = 0; j < a.lambda.size(); ++j)
    CHECK(a.lambda(j) == b.lambda(j));  // point estimates untouched

  // recompute the multiplier from the factor sample moments
  const int P = a.n_periods;
  double mean = 0.0;
  for (int t = 0; t < P; ++t) mean += sim.factors.values.at(t, 0);
  mean /= P;
  double var = 0.0;
  for (int t = 0; t < P; ++t) {
    const double d = sim.factors.values.at(t, 0) - mean;
    var += d * d;
  }
  var /= (P - 1);
  const double lam = a.lambda(1);
  const double mult = std::sqrt(1.0 + lam * lam / var);
  for (int j = 0; j < a.tstat.size(); ++j)
    CHECK(b.tstat(j) == doctest::Approx(a.tstat(j) / mult).epsilon(1e-10));
}

TEST_CASE("assets without enough usable rows are dropped") {
  PanelDgp dgp;
  dgp.n_assets = 30;
  dgp.n_periods = 200;
  SimulatedPanel sim = simulate_return_panel(13, dgp);
  // starve two assets below the k+3 floor
  for (int t = 0; t < 200; ++t) {
    if (t > 2) sim.panel.returns.at(t, 4) = kNaN;
    sim.panel.returns.at(t, 9) = kNaN;
  }
  const RiskPremiaEstimate est = fama_macbeth(sim.panel, sim.factors);
  CHECK(est.n_assets == 28);
}

TEST_CASE("masked estimation path agrees with dense estimation on gapless data") {
  PanelDgp dgp;
  dgp.n_assets = 20;
  dgp.n_periods = 300;
  SimulatedPanel sim = simulate_return_panel(17, dgp);
  const RiskPremiaEstimate dense = fama_macbeth(sim.panel, sim.factors);

  // knock a hole in one asset: only that asset's loading changes
  SimulatedPanel gappy = sim;
  gappy.panel.returns.at(150, 0) = kNaN;
  const RiskPremiaEstimate est = fama_macbeth(gappy.panel, gappy.factors);
  CHECK(est.n_assets == dense.n_assets);
  CHECK(est.lambda(1) == doctest::Approx(dense.lambda(1)).epsilon(0.25));
}

TEST_CASE("degenerate inputs are rejected") {
  PanelDgp dgp;
  dgp.n_assets = 20;
  dgp.n_periods = 100;
  const SimulatedPanel sim = simulate_return_panel(19, dgp);

  ReturnPanel tiny = sim.panel;
  tiny.dates.resize(3);
  CHECK_THROWS_AS(fama_macbeth(tiny, sim.factors), InsufficientDataError);

  ReturnPanel thin = sim.panel;
  for (size_t i = 2; i < thin.assets.size(); ++i)
    for (size_t t = 0; t < thin.dates.size(); ++t)
      thin.returns.at(t, i) = kNaN;
  CHECK_THROWS_AS(fama_macbeth(thin, sim.factors), InsufficientDataError);

  FactorMatrix collinear = sim.factors;
  collinear.names.push_back("F1_copy");
  Matrix v(collinear.dates.size(), 2);
  for (size_t t = 0; t < collinear.dates.size(); ++t) {
    v.at(t, 0) = collinear.values.at(t, 0);
    v.at(t, 1) = 2.0 * collinear.values.at(t, 0);
  }
  collinear.values = v;
  CHECK_THROWS_AS(fama_macbeth(sim.panel, collinear), CollinearityError);
}
