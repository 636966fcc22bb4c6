#include "hmr/cross_section.hpp"

#include <cmath>

#include "hmr/errors.hpp"
#include "hmr/ols.hpp"

namespace hmr {

namespace {

struct AlignedRows {
  std::vector<size_t> panel_row;
  std::vector<size_t> factor_row;
};

AlignedRows align(const ReturnPanel& panel, const FactorMatrix& factors) {
  AlignedRows a;
  size_t pi = 0;
  for (size_t fi = 0; fi < factors.dates.size(); ++fi) {
    while (pi < panel.dates.size() && panel.dates[pi] < factors.dates[fi]) ++pi;
    if (pi < panel.dates.size() && panel.dates[pi] == factors.dates[fi]) {
      a.panel_row.push_back(pi);
      a.factor_row.push_back(fi);
    }
  }
  return a;
}

}  // namespace

RiskPremiaEstimate fama_macbeth(const ReturnPanel& panel,
                                const FactorMatrix& factors,
                                const FmbConfig& cfg) {
  const AlignedRows al = align(panel, factors);
  const size_t n = al.panel_row.size();
  const size_t K = factors.names.size();
  const size_t N = panel.assets.size();
  if (n < K + 4) throw InsufficientDataError("too few aligned dates");

  // predictive pairs: x_t with r_{t+1}
  const size_t P = n - 1;
  Eigen::MatrixXd X(P, K + 1);
  for (size_t t = 0; t < P; ++t) {
    X(t, 0) = 1.0;
    for (size_t j = 0; j < K; ++j)
      X(t, j + 1) = factors.values.at(al.factor_row[t], j);
  }
  const Eigen::MatrixXd gram_full = X.transpose() * X;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_full(gram_full);
  const bool full_ok =
      ldlt_full.info() == Eigen::Success &&
      ldlt_full.vectorD().minCoeff() >
          gram_full.diagonal().maxCoeff() * (K + 1) * 1e-13;

  std::vector<int> kept;
  std::vector<Eigen::VectorXd> betas;  // K slopes per kept asset
  std::vector<double> mean_ret;
  Eigen::VectorXd y(P);
  for (size_t i = 0; i < N; ++i) {
    int good = 0;
    for (size_t t = 0; t < P; ++t) {
      y(t) = panel.returns.at(al.panel_row[t + 1], i);
      if (std::isfinite(y(t))) ++good;
    }
    if (good < static_cast<int>(K) + 3) continue;
    Eigen::VectorXd coef;
    double ybar;
    if (good == static_cast<int>(P)) {
      if (!full_ok) throw CollinearityError("factor matrix is rank deficient");
      coef = ldlt_full.solve(X.transpose() * y);
      ybar = y.mean();
    } else {
      Eigen::MatrixXd Xi(good, K + 1);
      Eigen::VectorXd yi(good);
      int r = 0;
      for (size_t t = 0; t < P; ++t) {
        if (!std::isfinite(y(t))) continue;
        Xi.row(r) = X.row(t);
        yi(r) = y(t);
        ++r;
      }
      OlsFit fit = ols(Xi, yi, false);
      coef = fit.coef;
      ybar = yi.mean();
    }
    kept.push_back(static_cast<int>(i));
    betas.push_back(coef.tail(K));
    mean_ret.push_back(ybar);
  }

  const size_t NA = kept.size();
  if (NA < K + 2)
    throw InsufficientDataError("too few assets with estimated loadings");

  Eigen::MatrixXd B(NA, K + 1);
  Eigen::VectorXd rbar(NA);
  for (size_t i = 0; i < NA; ++i) {
    B(i, 0) = 1.0;
    B.row(i).tail(K) = betas[i];
    rbar(i) = mean_ret[i];
  }
  OlsFit cs = ols(B, rbar, true);

  RiskPremiaEstimate est;
  est.names = factors.names;
  est.lambda = cs.coef;
  est.r2 = cs.r2;
  est.n_assets = static_cast<int>(NA);
  est.n_periods = static_cast<int>(P);

  Eigen::VectorXd se = cs.se;
  if (cfg.shanken) {
    // factor sample covariance over the aligned window
    Eigen::MatrixXd Fm(P, K);
    for (size_t t = 0; t < P; ++t)
      for (size_t j = 0; j < K; ++j)
        Fm(t, j) = factors.values.at(al.factor_row[t], j);
    const Eigen::RowVectorXd mu = Fm.colwise().mean();
    const Eigen::MatrixXd C = (Fm.rowwise() - mu).transpose() *
                              (Fm.rowwise() - mu) /
                              static_cast<double>(P - 1);
    Eigen::LDLT<Eigen::MatrixXd> cf(C);
    if (cf.info() == Eigen::Success) {
      const Eigen::VectorXd lam = cs.coef.tail(K);
      const double adj = 1.0 + lam.dot(cf.solve(lam));
      se *= std::sqrt(adj);
    }
  }
  est.tstat = (cs.coef.array() / se.array()).matrix();
  return est;
}

}  // namespace hmr
