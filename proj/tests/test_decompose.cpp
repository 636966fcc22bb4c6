#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hmr/decompose.hpp"
#include "hmr/errors.hpp"
#include "oracle.hpp"

using namespace hmr;

TEST_CASE("linear trend: long component lags by half the window") {
  std::vector<double> x(64);
  for (size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i + 1);
  const Decomposition d = decompose(x, 1);  // window 2
  CHECK(d.long_run[0] == 1.0);              // expanding warm-up
  for (size_t i = 1; i < x.size(); ++i) {
    CHECK(d.long_run[i] == doctest::Approx(x[i] - 0.5).epsilon(1e-15));
    CHECK(d.short_run[i] == doctest::Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("constant series: long equals the constant, short is zero") {
  std::vector<double> x(100, 3.25);
  for (int J : {0, 1, 3, 5}) {
    const Decomposition d = decompose(x, J);
    for (size_t i = 0; i < x.size(); ++i) {
      CHECK(d.long_run[i] == 3.25);
      CHECK(d.short_run[i] == 0.0);
    }
  }
}

TEST_CASE("J=0 degenerates to identity long component") {
  std::vector<double> x = {1.0, -2.0, 7.5};
  const Decomposition d = decompose(x, 0);
  for (size_t i = 0; i < x.size(); ++i) {
    CHECK(d.long_run[i] == x[i]);
    CHECK(d.short_run[i] == 0.0);
  }
}

TEST_CASE("trailing mean matches the direct-window oracle") {
  std::mt19937_64 eng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> x(300);
  for (double& v : x) v = n(eng);
  for (int J : {1, 2, 4, 6}) {
    const Decomposition d = decompose(x, J);
    const std::vector<double> ref = oracle::trailing_mean(x, J);
    for (size_t i = 0; i < x.size(); ++i)
      CHECK(d.long_run[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  }
}

TEST_CASE("additivity within a few ulp") {
  std::mt19937_64 eng(9);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> x(2048);
  for (double& v : x) v = n(eng);
  for (int J : {1, 4, 8}) {
    const Decomposition d = decompose(x, J);
    for (size_t i = 0; i < x.size(); ++i) {
      const double sum = d.short_run[i] + d.long_run[i];
      const double scale = std::max({std::fabs(x[i]), std::fabs(d.long_run[i]),
                                     std::fabs(d.short_run[i])});
      const double ulp = std::nextafter(scale, INFINITY) - scale;
      CHECK(std::fabs(sum - x[i]) <= 4.0 * std::max(ulp, 0.0));
    }
  }
}

TEST_CASE("prefix causality is bitwise at every truncation point") {
  std::mt19937_64 eng(13);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> x(257);
  for (double& v : x) v = n(eng);
  const Decomposition full = decompose(x, 3);
  std::vector<double> s(x.size()), l(x.size());
  for (size_t len = 1; len <= x.size(); ++len) {
    decompose_into(x.data(), len, 3, s.data(), l.data());
    for (size_t i = 0; i < len; ++i) {
      REQUIRE(l[i] == full.long_run[i]);   // bitwise
      REQUIRE(s[i] == full.short_run[i]);
    }
  }
}

TEST_CASE("AR(1): components are close to uncorrelated") {
  std::mt19937_64 eng(21);
  std::normal_distribution<double> n(0.0, 1.0);
  const size_t T = 10000;
  std::vector<double> x(T);
  double prev = 0.0;
  for (size_t t = 0; t < T; ++t) {
    prev = 0.5 * prev + n(eng);
    x[t] = prev;
  }
  for (int J : {2, 5, 7}) {
    const Decomposition d = decompose(x, J);
    double ms = 0.0, ml = 0.0;
    for (size_t t = 0; t < T; ++t) {
      ms += d.short_run[t];
      ml += d.long_run[t];
    }
    ms /= T;
    ml /= T;
    double cov = 0.0, vs = 0.0, vl = 0.0;
    for (size_t t = 0; t < T; ++t) {
      cov += (d.short_run[t] - ms) * (d.long_run[t] - ml);
      vs += (d.short_run[t] - ms) * (d.short_run[t] - ms);
      vl += (d.long_run[t] - ml) * (d.long_run[t] - ml);
    }
    const double corr = cov / std::sqrt(vs * vl);
    CHECK(std::fabs(corr) < 0.2);
  }
}

TEST_CASE("multi-band decomposition telescopes and sums back") {
  std::mt19937_64 eng(33);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> x(500);
  for (double& v : x) v = n(eng);
  const auto bands = decompose_bands(x, {2, 5, 7});
  REQUIRE(bands.size() == 4u);
  for (size_t t = 0; t < x.size(); ++t) {
    double sum = 0.0;
    for (const auto& b : bands) sum += b[t];
    const double ulp = std::nextafter(std::fabs(x[t]) + 1.0, INFINITY) -
                       (std::fabs(x[t]) + 1.0);
    CHECK(std::fabs(sum - x[t]) <= 8.0 * ulp);
  }
  // two-band case must agree with plain decompose
  const auto two = decompose_bands(x, {5});
  const Decomposition d = decompose(x, 5);
  for (size_t t = 0; t < x.size(); ++t) {
    CHECK(two[0][t] == d.short_run[t]);
    CHECK(two[1][t] == d.long_run[t]);
  }
  CHECK_THROWS_AS(decompose_bands(x, {5, 3}), ConfigError);
  CHECK_THROWS_AS(decompose_bands(x, {}), ConfigError);
}

TEST_CASE("panel decomposition: parallel equals serial bitwise") {
  std::mt19937_64 eng(44);
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix panel(400, 7);
  for (size_t t = 0; t < panel.rows; ++t)
    for (size_t c = 0; c < panel.cols; ++c) panel.at(t, c) = n(eng);
  const PanelDecomposition a = decompose_panel(panel, 4);
  const PanelDecomposition b = decompose_panel_serial(panel, 4);
  for (size_t t = 0; t < panel.rows; ++t)
    for (size_t c = 0; c < panel.cols; ++c) {
      CHECK(a.short_run.at(t, c) == b.short_run.at(t, c));
      CHECK(a.long_run.at(t, c) == b.long_run.at(t, c));
    }
}

TEST_CASE("decompose input validation") {
  std::vector<double> bad = {1.0, std::nan(""), 2.0};
  CHECK_THROWS_AS(decompose(bad, 2), NumericalError);
  std::vector<double> ok = {1.0, 2.0};
  CHECK_THROWS_AS(decompose(ok, -1), ConfigError);
  CHECK_THROWS_AS(decompose(ok, 31), ConfigError);
}
