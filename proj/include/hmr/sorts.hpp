#pragma once

#include <string>
#include <vector>

#include "hmr/types.hpp"

namespace hmr {

struct SortConfig {
  int window = 63;      // estimation window, trading days
  int holding = 5;      // post-ranking days per window
  int step = 5;         // roll step
  int n_quantiles = 5;
  bool contemporaneous = false;  // pair x_t with r_t instead of r_{t+1}
  double min_obs_frac = 0.8;     // per-asset usable-row share in a window
  int hac_lags = 0;              // 0 = classical t-stat
  std::vector<std::string> exposure_factors;
  std::string sort_variable;     // must be one of exposure_factors
};

struct SortReport {
  std::string sort_variable;
  int n_quantiles = 0;
  int n_windows = 0;
  std::vector<double> mean_bps;  // per quantile, ascending exposure
  std::vector<double> tstat;
  double high_low_bps = 0.0;
  double high_low_tstat = 0.0;
};

// Ascending assignment into Q groups: lowest loadings to portfolio 0.
// When n % Q != 0 the extra members go to the lowest portfolios; ties keep
// input (identifier) order.
std::vector<int> quantile_assign(const std::vector<double>& loadings, int Q);

// Rolling exposure-sorted portfolios: estimate per-asset loadings on the
// exposure factors inside each window (next-period returns unless
// contemporaneous), rank on the sort variable, then record equal-weight
// mean daily returns over the holding days after the window.
SortReport run_sort(const ReturnPanel& panel, const FactorMatrix& factors,
                    const SortConfig& cfg);

// The regression companions of a sort variable: the three aggregate
// market/idio factors, or the six horizon-split ones, matching the variable's
// family.  E.g. RVOL_m -> {RVOL_m, RS_m, RK_m}; RS_s_I -> the six *_[sl]_I.
std::vector<std::string> exposure_group(const std::string& sort_variable);

}  // namespace hmr
