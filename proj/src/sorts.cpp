#include "hmr/sorts.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "hmr/errors.hpp"
#include "hmr/ols.hpp"

namespace hmr {

std::vector<int> quantile_assign(const std::vector<double>& loadings, int Q) {
  const int n = static_cast<int>(loadings.size());
  if (Q < 2) throw ConfigError("need >= 2 quantiles");
  if (n < Q) throw InsufficientDataError("fewer assets than quantiles");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return loadings[a] < loadings[b];  // ties keep identifier order
  });
  const int base = n / Q;
  const int extra = n % Q;  // lowest portfolios absorb the remainder
  std::vector<int> assign(n);
  int pos = 0;
  for (int p = 0; p < Q; ++p) {
    const int size = base + (p < extra ? 1 : 0);
    for (int i = 0; i < size; ++i) assign[order[pos++]] = p;
  }
  return assign;
}

namespace {

struct Aligned {
  std::vector<size_t> panel_row;   // per merged date
  std::vector<size_t> factor_row;
  size_t n = 0;
};

Aligned align_dates(const ReturnPanel& panel, const FactorMatrix& factors) {
  Aligned a;
  size_t pi = 0;
  for (size_t fi = 0; fi < factors.dates.size(); ++fi) {
    while (pi < panel.dates.size() && panel.dates[pi] < factors.dates[fi]) ++pi;
    if (pi < panel.dates.size() && panel.dates[pi] == factors.dates[fi]) {
      a.panel_row.push_back(pi);
      a.factor_row.push_back(fi);
    }
  }
  a.n = a.panel_row.size();
  return a;
}

}  // namespace

SortReport run_sort(const ReturnPanel& panel, const FactorMatrix& factors,
                    const SortConfig& cfg) {
  const int Q = cfg.n_quantiles;
  if (Q < 2) throw ConfigError("need >= 2 quantiles");
  if (cfg.window < 2 || cfg.holding < 1 || cfg.step < 1)
    throw ConfigError("bad sort window/holding/step");

  // columns of the exposure regression, sort variable among them
  std::vector<size_t> fcols;
  size_t sort_col_local = SIZE_MAX;
  for (const auto& name : cfg.exposure_factors) {
    auto it = std::find(factors.names.begin(), factors.names.end(), name);
    if (it == factors.names.end())
      throw ConfigError("unknown exposure factor '" + name + "'");
    if (name == cfg.sort_variable) sort_col_local = fcols.size();
    fcols.push_back(static_cast<size_t>(it - factors.names.begin()));
  }
  if (sort_col_local == SIZE_MAX)
    throw ConfigError("sort variable '" + cfg.sort_variable +
                      "' not among exposure factors");

  const Aligned al = align_dates(panel, factors);
  const size_t m = fcols.size();
  const size_t N = panel.assets.size();
  const int pairs = cfg.contemporaneous ? cfg.window : cfg.window - 1;
  if (pairs < static_cast<int>(m) + 3)
    throw ConfigError("estimation window too short for exposure regression");
  if (al.n < static_cast<size_t>(cfg.window + cfg.holding))
    throw InsufficientDataError("not enough aligned dates for one window");

  // dense aligned copies; factor block gets the intercept up front
  Eigen::MatrixXd F(al.n, m);
  Eigen::MatrixXd R(al.n, N);
  for (size_t t = 0; t < al.n; ++t) {
    for (size_t j = 0; j < m; ++j)
      F(t, j) = factors.values.at(al.factor_row[t], fcols[j]);
    for (size_t i = 0; i < N; ++i)
      R(t, i) = panel.returns.at(al.panel_row[t], i);
  }

  std::vector<size_t> starts;
  for (size_t w = 0; w + cfg.window + cfg.holding <= al.n; w += cfg.step)
    starts.push_back(w);
  if (starts.empty())
    throw InsufficientDataError("no complete sort windows");

  const size_t n_w = starts.size();
  Matrix port_ret(n_w, Q);  // per window per portfolio, NaN = undefined
  std::vector<char> window_ok(n_w, 0);

  const long long WN = static_cast<long long>(n_w);
#pragma omp parallel for schedule(static)
  for (long long wi = 0; wi < WN; ++wi) {
    const size_t w = starts[wi];
    // rows of the regression: x at w+p (+ response offset)
    const int off = cfg.contemporaneous ? 0 : 1;
    Eigen::MatrixXd X(pairs, m + 1);
    for (int p = 0; p < pairs; ++p) {
      X(p, 0) = 1.0;
      for (size_t j = 0; j < m; ++j) X(p, j + 1) = F(w + p, j);
    }
    const Eigen::MatrixXd gram_full = X.transpose() * X;
    Eigen::LDLT<Eigen::MatrixXd> ldlt_full(gram_full);
    const bool full_ok =
        ldlt_full.info() == Eigen::Success &&
        ldlt_full.vectorD().minCoeff() >
            gram_full.diagonal().maxCoeff() * (m + 1) * 1e-13;

    std::vector<int> members;     // asset ids that obtained a loading
    std::vector<double> loadings;
    Eigen::VectorXd y(pairs);
    for (size_t i = 0; i < N; ++i) {
      int good = 0;
      for (int p = 0; p < pairs; ++p) {
        y(p) = R(w + p + off, i);
        if (std::isfinite(y(p))) ++good;
      }
      if (good < static_cast<int>(std::ceil(cfg.min_obs_frac * pairs)) ||
          good < static_cast<int>(m) + 2)
        continue;
      Eigen::VectorXd beta;
      if (good == pairs) {
        if (!full_ok) continue;
        beta = ldlt_full.solve(X.transpose() * y);
      } else {
        // rebuild gram from the asset's usable rows
        Eigen::MatrixXd Xi(good, m + 1);
        Eigen::VectorXd yi(good);
        int r = 0;
        for (int p = 0; p < pairs; ++p) {
          if (!std::isfinite(y(p))) continue;
          Xi.row(r) = X.row(p);
          yi(r) = y(p);
          ++r;
        }
        const Eigen::MatrixXd gram = Xi.transpose() * Xi;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
        if (ldlt.info() != Eigen::Success ||
            ldlt.vectorD().minCoeff() <=
                gram.diagonal().maxCoeff() * (m + 1) * 1e-13)
          continue;
        beta = ldlt.solve(Xi.transpose() * yi);
      }
      members.push_back(static_cast<int>(i));
      loadings.push_back(beta(1 + sort_col_local));
    }

    if (static_cast<int>(members.size()) < Q) continue;  // window skipped
    const std::vector<int> assign = quantile_assign(loadings, Q);

    bool all_defined = true;
    for (int p = 0; p < Q; ++p) {
      double sum_days = 0.0;
      int n_days = 0;
      for (int d = 0; d < cfg.holding; ++d) {
        const size_t row = w + cfg.window + d;
        double s = 0.0;
        int n_mem = 0;
        for (size_t k = 0; k < members.size(); ++k) {
          if (assign[k] != p) continue;
          const double r = R(row, members[k]);
          if (std::isfinite(r)) {
            s += r;
            ++n_mem;
          }
        }
        if (n_mem > 0) {
          sum_days += s / n_mem;
          ++n_days;
        }
      }
      if (n_days == 0) {
        all_defined = false;
        break;
      }
      port_ret.at(wi, p) = sum_days / n_days;
    }
    window_ok[wi] = all_defined ? 1 : 0;
  }

  // serial reduction over windows keeps results thread-count independent
  std::vector<size_t> kept;
  for (size_t wi = 0; wi < n_w; ++wi)
    if (window_ok[wi]) kept.push_back(wi);
  if (kept.empty()) throw InsufficientDataError("all sort windows degenerate");

  SortReport rep;
  rep.sort_variable = cfg.sort_variable;
  rep.n_quantiles = Q;
  rep.n_windows = static_cast<int>(kept.size());
  rep.mean_bps.resize(Q);
  rep.tstat.resize(Q);
  Eigen::VectorXd series(kept.size());
  for (int p = 0; p < Q; ++p) {
    for (size_t k = 0; k < kept.size(); ++k) series(k) = port_ret.at(kept[k], p);
    const double mean = series.mean();
    rep.mean_bps[p] = mean * 1e4;
    rep.tstat[p] = mean / hac_se_of_mean(series, cfg.hac_lags);
  }
  for (size_t k = 0; k < kept.size(); ++k)
    series(k) = port_ret.at(kept[k], Q - 1) - port_ret.at(kept[k], 0);
  rep.high_low_bps = series.mean() * 1e4;
  rep.high_low_tstat = series.mean() / hac_se_of_mean(series, cfg.hac_lags);
  return rep;
}

std::vector<std::string> exposure_group(const std::string& sort_variable) {
  // family: market vs idio; flavour: aggregate vs horizon-split
  const bool idio = sort_variable.size() > 2 &&
                    sort_variable.compare(sort_variable.size() - 2, 2, "_I") == 0;
  const bool market = sort_variable.size() > 2 &&
                      sort_variable.compare(sort_variable.size() - 2, 2, "_m") == 0;
  if (!idio && !market)
    throw ConfigError("unrecognised sort variable '" + sort_variable + "'");
  const std::string suffix = idio ? "_I" : "_m";
  const bool horizon = sort_variable.find("_s_") != std::string::npos ||
                       sort_variable.find("_l_") != std::string::npos;
  std::vector<std::string> group;
  for (const char* base : {"RVOL", "RS", "RK"}) {
    if (horizon) {
      group.push_back(std::string(base) + "_s" + suffix);
      group.push_back(std::string(base) + "_l" + suffix);
    } else {
      group.push_back(std::string(base) + suffix);
    }
  }
  for (const auto& g : group)
    if (g == sort_variable) return group;
  throw ConfigError("sort variable '" + sort_variable +
                    "' does not match a factor family");
}

}  // namespace hmr
