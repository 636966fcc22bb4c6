#pragma once

#include <Eigen/Dense>

namespace hmr {

// Ordinary least squares with classical standard errors.  X must have full
// column rank (CollinearityError otherwise).  r2 is unadjusted and uses the
// total sum of squares around the mean of y.
struct OlsFit {
  Eigen::VectorXd coef;
  Eigen::VectorXd se;
  Eigen::VectorXd residuals;
  double sigma2 = 0.0;  // residual variance, SSR / (n - k)
  double r2 = 0.0;
};

OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
           bool want_se = true);

// Newey-West standard error of the mean of a series; lags = 0 reduces to
// the classical sd/sqrt(n).
double hac_se_of_mean(const Eigen::VectorXd& series, int lags);

}  // namespace hmr
