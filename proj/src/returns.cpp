#include "hmr/returns.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "hmr/csv.hpp"
#include "hmr/errors.hpp"

namespace hmr {

RiskFreeCurve::RiskFreeCurve(std::vector<SerialDay> dates,
                             std::vector<double> rates)
    : dates_(std::move(dates)), rates_(std::move(rates)) {
  if (dates_.size() != rates_.size())
    throw ConfigError("risk-free dates/rates length mismatch");
  if (!std::is_sorted(dates_.begin(), dates_.end()))
    throw DataError("risk-free dates not ascending");
}

RiskFreeCurve RiskFreeCurve::load(const std::string& path) {
  CsvFile csv = read_csv(path);
  if (csv.header.size() != 2 || csv.header[0] != "date" ||
      csv.header[1] != "annualized_rate") {
    throw BadRecordError("expected header 'date,annualized_rate' in " + path);
  }
  std::vector<SerialDay> dates;
  std::vector<double> rates;
  for (const auto& row : csv.rows) {
    if (row.size() != 2)
      throw BadRecordError("bad risk-free row in " + path);
    dates.push_back(parse_date(row[0]));
    rates.push_back(parse_double_field(row[1], path + " row " + row[0]));
  }
  if (dates.empty()) throw NoDataError("no risk-free rows in " + path);
  // sort by date, keep last entry on duplicates
  std::vector<size_t> order(dates.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return dates[a] < dates[b]; });
  std::vector<SerialDay> d2;
  std::vector<double> r2;
  for (size_t i : order) {
    if (!d2.empty() && d2.back() == dates[i]) {
      r2.back() = rates[i];
    } else {
      d2.push_back(dates[i]);
      r2.push_back(rates[i]);
    }
  }
  return RiskFreeCurve(std::move(d2), std::move(r2));
}

double RiskFreeCurve::annualized_at(SerialDay day) const {
  auto it = std::upper_bound(dates_.begin(), dates_.end(), day);
  if (it == dates_.begin())
    throw MissingRateError("no risk-free rate at or before " +
                           format_date(day));
  return rates_[static_cast<size_t>(it - dates_.begin()) - 1];
}

double RiskFreeCurve::per_period(SerialDay day, Frequency freq) const {
  const double ann = annualized_at(day);
  return freq == Frequency::daily ? ann / 252.0 : ann / 52.0;
}

double period_excess_return(double open_price, double close_price,
                            double rf_per_period) {
  return std::log(close_price / open_price) - rf_per_period;
}

ReturnPanel build_return_panel(const BarGroups& groups, const IngestConfig& cfg,
                               const RiskFreeCurve& rf) {
  if (groups.empty()) throw NoDataError("no bar groups");
  ReturnPanel panel;
  panel.freq = Frequency::daily;

  std::map<SerialDay, size_t> date_index;
  for (const auto& [sym, days] : groups) {
    if (sym == cfg.index_symbol) continue;
    panel.assets.push_back(sym);
    for (const auto& [day, bars] : days) date_index.emplace(day, 0);
  }
  for (auto& [day, idx] : date_index) {
    idx = panel.dates.size();
    panel.dates.push_back(day);
  }
  panel.returns = Matrix(panel.dates.size(), panel.assets.size());

  size_t col = 0;
  for (const auto& [sym, days] : groups) {
    if (sym == cfg.index_symbol) continue;
    for (const auto& [day, bars] : days) {
      IntradayGrid grid = build_five_minute_grid(bars, cfg.session);
      if (!cfg.include_short_sessions && grid.coverage < cfg.min_coverage)
        continue;
      const double open = std::exp(grid.log_price.front());
      const double close = std::exp(grid.log_price.back());
      panel.returns.at(date_index[day], col) = period_excess_return(
          open, close, rf.per_period(day, Frequency::daily));
    }
    ++col;
  }
  return panel;
}

ReturnPanel aggregate_weekly_returns(const ReturnPanel& daily,
                                     int anchor_weekday) {
  if (daily.freq != Frequency::daily)
    throw ConfigError("weekly aggregation expects a daily panel");
  ReturnPanel weekly;
  weekly.freq = Frequency::weekly;
  weekly.assets = daily.assets;

  std::vector<size_t> anchors;
  for (size_t i = 4; i < daily.dates.size(); ++i)
    if (weekday(daily.dates[i]) == anchor_weekday) anchors.push_back(i);

  weekly.returns = Matrix(anchors.size(), daily.assets.size());
  weekly.dates.resize(anchors.size());
  for (size_t w = 0; w < anchors.size(); ++w) {
    const size_t i = anchors[w];
    weekly.dates[w] = daily.dates[i];
    for (size_t c = 0; c < daily.assets.size(); ++c) {
      double sum = 0.0;
      bool ok = true;
      for (size_t back = 0; back < 5; ++back) {
        const double r = daily.returns.at(i - back, c);
        if (!std::isfinite(r)) {
          ok = false;
          break;
        }
        sum += r;
      }
      if (ok) weekly.returns.at(w, c) = sum;
    }
  }
  return weekly;
}

ReturnPanel load_return_panel(const std::string& path) {
  CsvFile csv = read_csv(path);
  if (csv.header.size() != 3 || csv.header[0] != "date" ||
      csv.header[1] != "asset" || csv.header[2] != "excess_return") {
    throw BadRecordError("expected header 'date,asset,excess_return' in " +
                         path);
  }
  std::map<SerialDay, size_t> date_index;
  std::map<std::string, size_t> asset_index;
  struct Rec {
    SerialDay day;
    std::string asset;
    double r;
  };
  std::vector<Rec> recs;
  recs.reserve(csv.rows.size());
  for (const auto& row : csv.rows) {
    if (row.size() != 3) throw BadRecordError("bad panel row in " + path);
    Rec rec{parse_date(row[0]), row[1],
            parse_double_field(row[2], path + " row " + row[0])};
    date_index.emplace(rec.day, 0);
    asset_index.emplace(rec.asset, 0);
    recs.push_back(std::move(rec));
  }
  if (recs.empty()) throw NoDataError("no panel rows in " + path);

  ReturnPanel panel;
  // weekly panels round-trip through the same format; the caller fixes freq
  panel.freq = Frequency::daily;
  for (auto& [day, idx] : date_index) {
    idx = panel.dates.size();
    panel.dates.push_back(day);
  }
  for (auto& [asset, idx] : asset_index) {
    idx = panel.assets.size();
    panel.assets.push_back(asset);
  }
  panel.returns = Matrix(panel.dates.size(), panel.assets.size());
  for (const auto& rec : recs)
    panel.returns.at(date_index[rec.day], asset_index[rec.asset]) = rec.r;
  return panel;
}

void write_return_panel(const std::string& path, const ReturnPanel& panel) {
  std::ostringstream out;
  out << "date,asset,excess_return\n";
  for (size_t t = 0; t < panel.dates.size(); ++t)
    for (size_t c = 0; c < panel.assets.size(); ++c) {
      const double r = panel.returns.at(t, c);
      if (!std::isfinite(r)) continue;  // sparse format: missing rows omitted
      out << format_date(panel.dates[t]) << ',' << panel.assets[c] << ','
          << format_double(r) << '\n';
    }
  write_text_file(path, out.str());
}

}  // namespace hmr
