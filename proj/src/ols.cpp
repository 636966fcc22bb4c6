#include "hmr/ols.hpp"

#include <cmath>

#include "hmr/errors.hpp"

namespace hmr {

OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, bool want_se) {
  const Eigen::Index n = X.rows();
  const Eigen::Index k = X.cols();
  if (y.size() != n) throw NumericalError("ols: X/y row mismatch");
  if (n < k) throw InsufficientDataError("ols: fewer rows than regressors");

  const Eigen::MatrixXd gram = X.transpose() * X;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <=
          gram.diagonal().maxCoeff() * k * 1e-13) {
    throw CollinearityError("ols: design matrix is rank deficient");
  }

  OlsFit fit;
  fit.coef = ldlt.solve(X.transpose() * y);
  fit.residuals = y - X * fit.coef;
  const double ssr = fit.residuals.squaredNorm();
  const double mean_y = y.mean();
  const double tss = (y.array() - mean_y).matrix().squaredNorm();
  fit.r2 = tss > 0.0 ? 1.0 - ssr / tss : 0.0;
  fit.sigma2 = n > k ? ssr / static_cast<double>(n - k) : 0.0;
  if (want_se) {
    const Eigen::MatrixXd inv =
        ldlt.solve(Eigen::MatrixXd::Identity(k, k));
    fit.se = (fit.sigma2 * inv.diagonal().array()).sqrt();
  }
  return fit;
}

double hac_se_of_mean(const Eigen::VectorXd& series, int lags) {
  const Eigen::Index n = series.size();
  if (n < 2) throw InsufficientDataError("hac_se_of_mean: need >= 2 points");
  const double mean = series.mean();
  const Eigen::VectorXd u = series.array() - mean;
  double v = u.squaredNorm() / static_cast<double>(n);  // gamma_0
  for (int l = 1; l <= lags && l < n; ++l) {
    double g = 0.0;
    for (Eigen::Index t = l; t < n; ++t) g += u[t] * u[t - l];
    g /= static_cast<double>(n);
    const double w = 1.0 - static_cast<double>(l) / (lags + 1.0);  // Bartlett
    v += 2.0 * w * g;
  }
  if (v < 0.0) v = 0.0;
  return std::sqrt(v / static_cast<double>(n));
}

}  // namespace hmr
