#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "hmr/types.hpp"

namespace hmr {

// Quasi-Bayesian local-likelihood estimation of a regression with
// time-varying coefficients.  Each time point s gets its own Normal-Gamma
// posterior formed from kernel-weighted data; draws are exact conjugate
// samples, so chains need no mixing beyond the burn-in discard.

double gaussian_kernel(double u);  // (1/sqrt(2*pi)) exp(-u^2/2)

// Weights for target point s (0-based) out of T.  In the normalized
// scheme the raw kernel values are rescaled to sum to one, the effective
// sample size is zeta = 1 / sum(w~^2), and vartheta = zeta * w~ (so the
// weights sum to zeta and approach one each in the uniform limit).  The
// unnormalized scheme applies the same two formulas to the raw kernel
// values instead.
struct KernelWeights {
  Eigen::VectorXd vartheta;
  double zeta = 0.0;
};

KernelWeights kernel_weights(int T, int s, double H, bool normalized = true);

struct NormalGammaPrior {
  Eigen::VectorXd beta0;
  Eigen::MatrixXd kappa0;
  double alpha0 = 1.0;
  double gamma0 = 1.0;
};

// beta0 / gamma0 from full-sample OLS, kappa0 = 0.01 * diag(var(x_j))
// (unit scale for constant columns).
NormalGammaPrior default_prior(const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y);

// One time point's posterior:
//   kappa_bar = kappa0 + X'DX
//   beta_bar  = kappa_bar^-1 (X'DX beta_hat + kappa0 beta0)
//   alpha_bar = alpha0 + sum(vartheta)
//   gamma_bar = gamma0 + (y'Dy - beta_bar' kappa_bar beta_bar
//                         + beta0' kappa0 beta0) / 2
// with D = diag(vartheta) and beta_hat the weighted least-squares fit
// (RankError if X'DX is singular).
struct LocalPosterior {
  Eigen::VectorXd beta_hat;
  Eigen::VectorXd beta_bar;
  Eigen::MatrixXd kappa_bar;
  double alpha_bar = 0.0;
  double gamma_bar = 0.0;
};

LocalPosterior local_posterior(const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y,
                               const Eigen::VectorXd& vartheta,
                               const NormalGammaPrior& prior);

struct TvpOptions {
  double H = 0.0;          // bandwidth; <= 0 means sqrt(T)
  int iterations = 1000;   // posterior draws per time point
  double burn_frac = 0.1;  // leading share of draws discarded
  uint64_t seed = 1;
  bool normalized_weights = true;
};

// Pointwise posterior summaries of the coefficient paths (T x k each).
struct TvpSummary {
  Eigen::MatrixXd mean, sd, q05, q95;
  double H = 0.0;
  uint64_t seed = 0;
};

TvpSummary sample_tvp(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const TvpOptions& opt,
                      const NormalGammaPrior* prior = nullptr);
TvpSummary sample_tvp_serial(const Eigen::MatrixXd& X,
                             const Eigen::VectorXd& y, const TvpOptions& opt,
                             const NormalGammaPrior* prior = nullptr);

// Dynamic two-stage premia: stage 1 replaces the static loadings with
// local posterior means beta_bar(s) per asset, stage 2 runs one
// cross-sectional regression per time point; the premia are the time
// averages of the per-period estimates with plain time-series t-stats.
struct DynamicPremia {
  std::vector<std::string> names;   // factor labels
  Eigen::VectorXd lambda_bar;       // intercept first, then one per factor
  Eigen::VectorXd tstat;
  Eigen::MatrixXd lambda_path;      // per-period estimates (S x (K+1))
  std::vector<SerialDay> path_dates;
  int n_assets = 0;
  double H = 0.0;
};

DynamicPremia dynamic_fama_macbeth(const ReturnPanel& panel,
                                   const FactorMatrix& factors,
                                   const TvpOptions& opt);

}  // namespace hmr
