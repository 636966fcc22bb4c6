#include "hmr/moments.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hmr/errors.hpp"

namespace hmr {

double realized_variance(const std::vector<double>& r) {
  double s = 0.0;
  for (double v : r) s += v * v;
  return s;
}

double realized_vol(const std::vector<double>& r) {
  return std::sqrt(realized_variance(r));
}

double realized_skewness(const std::vector<double>& r) {
  const double rdv = realized_variance(r);
  if (rdv == 0.0) return kNaN;
  double s3 = 0.0;
  for (double v : r) s3 += v * v * v;
  const double k = static_cast<double>(r.size());
  return std::sqrt(k) * s3 / (rdv * std::sqrt(rdv));
}

double realized_kurtosis(const std::vector<double>& r) {
  const double rdv = realized_variance(r);
  if (rdv == 0.0) return kNaN;
  double s4 = 0.0;
  for (double v : r) {
    const double v2 = v * v;
    s4 += v2 * v2;
  }
  return static_cast<double>(r.size()) * s4 / (rdv * rdv);
}

DayMoments day_moments(const std::vector<double>& r) {
  DayMoments m;
  const double rdv = realized_variance(r);
  m.vol = std::sqrt(rdv);
  if (rdv == 0.0) return m;  // skew/kurt undefined, left NaN
  double s3 = 0.0, s4 = 0.0;
  for (double v : r) {
    const double v2 = v * v;
    s3 += v2 * v;
    s4 += v2 * v2;
  }
  const double k = static_cast<double>(r.size());
  m.skew = std::sqrt(k) * s3 / (rdv * std::sqrt(rdv));
  m.kurt = k * s4 / (rdv * rdv);
  return m;
}

double weekly_vol(const std::vector<double>& rdv_week, Annualization mode) {
  double s = 0.0;
  for (double v : rdv_week) s += v;
  const double factor = 252.0 / 5.0;
  switch (mode) {
    case Annualization::outside_sqrt:
      return factor * std::sqrt(s);
    case Annualization::inside_sqrt:
      return std::sqrt(factor * s);
    case Annualization::none:
      return std::sqrt(s);
  }
  return kNaN;
}

namespace {

struct WorkItem {
  const std::vector<BarRecord>* bars;
  size_t date_idx;
  size_t col;  // asset column, or SIZE_MAX for the market series
};

void fill_panel(MomentPanel& panel, const std::vector<WorkItem>& items,
                const IngestConfig& cfg, bool parallel) {
  const auto run_one = [&](const WorkItem& it) {
    IntradayGrid grid = build_five_minute_grid(*it.bars, cfg.session);
    if (!cfg.include_short_sessions && grid.coverage < cfg.min_coverage)
      return;  // flagged short session, leave NaN
    DayMoments m = day_moments(grid_log_returns(grid));
    if (it.col == SIZE_MAX) {
      panel.market_vol[it.date_idx] = m.vol;
      panel.market_skew[it.date_idx] = m.skew;
      panel.market_kurt[it.date_idx] = m.kurt;
    } else {
      panel.vol.at(it.date_idx, it.col) = m.vol;
      panel.skew.at(it.date_idx, it.col) = m.skew;
      panel.kurt.at(it.date_idx, it.col) = m.kurt;
    }
  };
  const auto n = static_cast<long long>(items.size());
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) run_one(items[i]);
  } else {
    for (long long i = 0; i < n; ++i) run_one(items[i]);
  }
}

MomentPanel build_moment_panel(const BarGroups& groups, const IngestConfig& cfg,
                               bool parallel) {
  if (groups.empty()) throw NoDataError("no bar groups");
  MomentPanel panel;
  panel.freq = Frequency::daily;

  std::map<SerialDay, size_t> date_index;
  for (const auto& [sym, days] : groups) {
    if (sym != cfg.index_symbol) panel.assets.push_back(sym);
    for (const auto& [day, bars] : days) date_index.emplace(day, 0);
  }
  for (auto& [day, idx] : date_index) {
    idx = panel.dates.size();
    panel.dates.push_back(day);
  }

  const size_t T = panel.dates.size();
  const size_t N = panel.assets.size();
  panel.vol = Matrix(T, N);
  panel.skew = Matrix(T, N);
  panel.kurt = Matrix(T, N);
  panel.market_vol.assign(T, kNaN);
  panel.market_skew.assign(T, kNaN);
  panel.market_kurt.assign(T, kNaN);

  std::vector<WorkItem> items;
  size_t col = 0;
  for (const auto& [sym, days] : groups) {
    const bool is_index = (sym == cfg.index_symbol);
    for (const auto& [day, bars] : days)
      items.push_back({&bars, date_index[day], is_index ? SIZE_MAX : col});
    if (!is_index) ++col;
  }
  fill_panel(panel, items, cfg, parallel);
  return panel;
}

}  // namespace

MomentPanel compute_moment_panel(const BarGroups& groups,
                                 const IngestConfig& cfg) {
  return build_moment_panel(groups, cfg, true);
}

MomentPanel compute_moment_panel_serial(const BarGroups& groups,
                                        const IngestConfig& cfg) {
  return build_moment_panel(groups, cfg, false);
}

MomentPanel aggregate_weekly_moments(const MomentPanel& daily,
                                     int anchor_weekday, Annualization mode) {
  if (daily.freq != Frequency::daily)
    throw ConfigError("weekly aggregation expects a daily panel");
  MomentPanel weekly;
  weekly.freq = Frequency::weekly;
  weekly.assets = daily.assets;

  std::vector<size_t> anchors;
  for (size_t i = 4; i < daily.dates.size(); ++i)
    if (hmr::weekday(daily.dates[i]) == anchor_weekday) anchors.push_back(i);

  const size_t W = anchors.size();
  const size_t N = daily.assets.size();
  weekly.vol = Matrix(W, N);
  weekly.skew = Matrix(W, N);
  weekly.kurt = Matrix(W, N);
  weekly.market_vol.assign(W, kNaN);
  weekly.market_skew.assign(W, kNaN);
  weekly.market_kurt.assign(W, kNaN);

  // each moment series aggregates independently: a week is missing for a
  // series iff any of its five trailing daily values is missing/undefined
  const auto aggregate = [&](auto vol_at, auto skew_at, auto kurt_at,
                             auto sink) {
    for (size_t w = 0; w < W; ++w) {
      const size_t i = anchors[w];
      std::vector<double> rdv(5);
      double rs = 0.0, rk = 0.0;
      bool vol_ok = true, skew_ok = true, kurt_ok = true;
      for (size_t back = 0; back < 5; ++back) {
        const size_t t = i - back;
        const double v = vol_at(t), s = skew_at(t), k = kurt_at(t);
        if (std::isfinite(v))
          rdv[back] = v * v;
        else
          vol_ok = false;
        if (std::isfinite(s))
          rs += s;
        else
          skew_ok = false;
        if (std::isfinite(k))
          rk += k;
        else
          kurt_ok = false;
      }
      sink(w, vol_ok ? weekly_vol(rdv, mode) : kNaN,
           skew_ok ? rs / 5.0 : kNaN, kurt_ok ? rk / 5.0 : kNaN);
    }
  };

  for (size_t c = 0; c < N; ++c) {
    aggregate([&](size_t t) { return daily.vol.at(t, c); },
              [&](size_t t) { return daily.skew.at(t, c); },
              [&](size_t t) { return daily.kurt.at(t, c); },
              [&](size_t w, double v, double s, double k) {
                weekly.vol.at(w, c) = v;
                weekly.skew.at(w, c) = s;
                weekly.kurt.at(w, c) = k;
              });
  }
  aggregate([&](size_t t) { return daily.market_vol[t]; },
            [&](size_t t) { return daily.market_skew[t]; },
            [&](size_t t) { return daily.market_kurt[t]; },
            [&](size_t w, double v, double s, double k) {
              weekly.market_vol[w] = v;
              weekly.market_skew[w] = s;
              weekly.market_kurt[w] = k;
            });

  weekly.dates.resize(W);
  for (size_t w = 0; w < W; ++w) weekly.dates[w] = daily.dates[anchors[w]];
  return weekly;
}

IdioAverages average_idiosyncratic(const MomentPanel& panel) {
  const size_t T = panel.dates.size();
  const size_t N = panel.assets.size();
  IdioAverages out;
  out.vol.assign(T, kNaN);
  out.skew.assign(T, kNaN);
  out.kurt.assign(T, kNaN);
  out.count.assign(T, 0);
  for (size_t t = 0; t < T; ++t) {
    double sv = 0.0, ss = 0.0, sk = 0.0;
    int nv = 0, ns = 0, nk = 0;
    for (size_t c = 0; c < N; ++c) {
      const double v = panel.vol.at(t, c);
      const double s = panel.skew.at(t, c);
      const double k = panel.kurt.at(t, c);
      if (std::isfinite(v)) sv += v, ++nv;
      if (std::isfinite(s)) ss += s, ++ns;
      if (std::isfinite(k)) sk += k, ++nk;
    }
    // count reports the smallest contributing set across the three series
    out.count[t] = std::min(nv, std::min(ns, nk));
    if (nv > 0) out.vol[t] = sv / nv;
    if (ns > 0) out.skew[t] = ss / ns;
    if (nk > 0) out.kurt[t] = sk / nk;
  }
  return out;
}

}  // namespace hmr
