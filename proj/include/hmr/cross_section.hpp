#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "hmr/types.hpp"

namespace hmr {

struct FmbConfig {
  bool shanken = false;  // scale second-stage SEs by sqrt(1 + lam' Sf^-1 lam)
};

// Two-stage estimate of factor risk premia.  names holds the factor
// labels; lambda/tstat put the cross-sectional intercept (omega) first,
// then one premium per factor.  r2 is the unadjusted second-stage fit.
struct RiskPremiaEstimate {
  std::vector<std::string> names;
  Eigen::VectorXd lambda;
  Eigen::VectorXd tstat;
  double r2 = 0.0;
  int n_assets = 0;
  int n_periods = 0;
};

// Stage 1: per-asset time-series regression of next-period excess returns
// on the factors (with intercept).  Stage 2: cross-sectional regression of
// the assets' mean returns on the estimated loadings.  Assets with fewer
// than k+3 usable periods are dropped.
RiskPremiaEstimate fama_macbeth(const ReturnPanel& panel,
                                const FactorMatrix& factors,
                                const FmbConfig& cfg = {});

}  // namespace hmr
