#pragma once

#include <string>
#include <vector>

#include "hmr/moments.hpp"
#include "hmr/types.hpp"

namespace hmr {

// Factor matrices for the cross-sectional work.  Six base series: market
// vol/skew/kurt plus the equal-weight averages of the per-asset series
// ("_m" vs "_I" suffixes).  Rows with any missing base value are dropped
// (listwise), so FactorMatrix rows are always complete.
//
// Aggregate set (6):  RVOL_m RS_m RK_m RVOL_I RS_I RK_I
// Horizon set  (12):  short/long split of each base series at scale J,
//                     e.g. RVOL_s_m / RVOL_l_m.  The averaging happens
//                     before the decomposition.
FactorMatrix build_aggregate_factors(const MomentPanel& panel);
FactorMatrix build_horizon_factors(const MomentPanel& panel, int J);

// Inner join on dates, appending the right-hand columns (duplicate names
// rejected).  Used to add MKT/SMB/HML style controls.
FactorMatrix merge_factors(const FactorMatrix& left, const FactorMatrix& right);

// Pearson correlations between factor columns; constant columns yield NaN
// against everything (diagonal stays 1 only for non-constant columns).
Matrix correlation_matrix(const FactorMatrix& fm);

FactorMatrix load_factor_matrix(const std::string& path, Frequency freq);
void write_factor_matrix(const std::string& path, const FactorMatrix& fm,
                         const std::vector<std::string>& comments = {});

}  // namespace hmr
