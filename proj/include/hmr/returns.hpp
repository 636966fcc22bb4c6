#pragma once

#include <string>
#include <vector>

#include "hmr/bars.hpp"
#include "hmr/types.hpp"

namespace hmr {

// Annualized risk-free rates keyed by date.  Lookups take the most recent
// rate at or before the requested date (MissingRateError if none exists).
class RiskFreeCurve {
 public:
  RiskFreeCurve() = default;
  RiskFreeCurve(std::vector<SerialDay> dates, std::vector<double> rates);

  static RiskFreeCurve load(const std::string& path);  // date,annualized_rate

  double annualized_at(SerialDay day) const;
  // simple scaling: /252 per trading day, /52 per week
  double per_period(SerialDay day, Frequency freq) const;

  bool empty() const { return dates_.empty(); }

 private:
  std::vector<SerialDay> dates_;  // ascending
  std::vector<double> rates_;
};

// log(close/open) minus the per-period risk-free rate
double period_excess_return(double open_price, double close_price,
                            double rf_per_period);

// Daily excess-return panel from grids: per asset-day, open-to-close log
// return net of that day's risk-free rate.  Index symbol is excluded from
// the cross-section.  Short sessions follow the IngestConfig policy.
ReturnPanel build_return_panel(const BarGroups& groups, const IngestConfig& cfg,
                               const RiskFreeCurve& rf);

// Weekly excess return = sum of the five trailing daily excess returns at
// each anchor-weekday date (default Monday = 0).  Weeks with a missing day
// are missing; partial weeks at the start of the sample are dropped.
ReturnPanel aggregate_weekly_returns(const ReturnPanel& daily,
                                     int anchor_weekday);

ReturnPanel load_return_panel(const std::string& path);
void write_return_panel(const std::string& path, const ReturnPanel& panel);

}  // namespace hmr
