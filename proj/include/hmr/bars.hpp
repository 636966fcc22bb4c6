#pragma once

#include <map>
#include <string>
#include <vector>

#include "hmr/calendar.hpp"

namespace hmr {

struct BarRecord {
  Timestamp ts;
  std::string symbol;
  double price;
};

// Regular-session clock.  Defaults give the 78 five-minute intervals of a
// 9:30-16:00 session; K below always means bars_per_day.
struct TradingSession {
  int open_minute = 9 * 60 + 30;
  int bar_minutes = 5;
  int bars_per_day = 78;

  int close_minute() const { return open_minute + bar_minutes * bars_per_day; }
};

// Snapped price path for one (symbol, day): K+1 log prices at the session
// open, each interval boundary, and the close.
struct IntradayGrid {
  SerialDay day = 0;
  double coverage = 0.0;  // fraction of intervals containing >= 1 bar
  std::vector<double> log_price;
};

// Reads `timestamp,symbol,price` rows.  Rows come back sorted by symbol,
// then time.  Throws NoDataError / BadRecordError (naming the offender).
std::vector<BarRecord> load_bars(const std::string& path);

// Bars for a single symbol-day, sorted by time.  Each slot takes the last
// observed price at or before the slot boundary; slots before the first
// bar reuse the first bar's price.
IntradayGrid build_five_minute_grid(const std::vector<BarRecord>& bars,
                                    const TradingSession& session);

// K log returns between adjacent grid slots.
std::vector<double> grid_log_returns(const IntradayGrid& grid);

// bars grouped as symbol -> day -> bars (time-sorted within each day)
using BarGroups = std::map<std::string, std::map<SerialDay, std::vector<BarRecord>>>;

BarGroups group_bars(std::vector<BarRecord> bars);

// Shared policy for everything built on top of the grids.  Days whose bar
// coverage falls below min_coverage (halts, short sessions) are excluded
// unless include_short_sessions is set.  index_symbol marks the market
// series; it is kept out of the asset cross-section.
struct IngestConfig {
  TradingSession session;
  double min_coverage = 0.8;
  bool include_short_sessions = false;
  std::string index_symbol = "INDEX";
};

}  // namespace hmr
