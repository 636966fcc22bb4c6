#pragma once

#include <vector>

#include "hmr/bars.hpp"
#include "hmr/types.hpp"

namespace hmr {

// Realized moments of one day's intraday log returns.  With K returns r_k
// and RDV = sum r^2:
//   vol  = sqrt(RDV)
//   skew = sqrt(K) * sum r^3 / RDV^(3/2)
//   kurt = K * sum r^4 / RDV^2
// skew/kurt are undefined (NaN) on zero-variance days.
double realized_variance(const std::vector<double>& r);
double realized_vol(const std::vector<double>& r);
double realized_skewness(const std::vector<double>& r);
double realized_kurtosis(const std::vector<double>& r);

struct DayMoments {
  double vol = kNaN;
  double skew = kNaN;
  double kurt = kNaN;
};

DayMoments day_moments(const std::vector<double>& r);

// How the weekly vol handles the 252/5 annualization factor.  The printed
// form puts the factor outside the square root; the switch keeps the
// alternative readings available.
enum class Annualization { outside_sqrt, inside_sqrt, none };

// rdv_week = trailing five daily realized variances (not vols).
double weekly_vol(const std::vector<double>& rdv_week, Annualization mode);

// Daily moment panel over all symbols in `groups`.  One column per
// non-index symbol; the index symbol fills the market series.  Excluded or
// absent symbol-days stay NaN.
MomentPanel compute_moment_panel(const BarGroups& groups,
                                 const IngestConfig& cfg);
MomentPanel compute_moment_panel_serial(const BarGroups& groups,
                                        const IngestConfig& cfg);

// Weekly aggregation: at every date with the anchor weekday (default
// Monday = 0) and at least four predecessors, vol is formed from the five
// trailing daily variances and skew/kurt as five-day means.  Weeks with
// any undefined constituent are NaN.
MomentPanel aggregate_weekly_moments(const MomentPanel& daily,
                                     int anchor_weekday,
                                     Annualization mode);

// Equal-weight cross-sectional averages of the per-asset columns, skipping
// missing entries.  count = number of assets contributing per date.
struct IdioAverages {
  std::vector<double> vol, skew, kurt;
  std::vector<int> count;
};

IdioAverages average_idiosyncratic(const MomentPanel& panel);

}  // namespace hmr
