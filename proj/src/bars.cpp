#include "hmr/bars.hpp"

#include <algorithm>
#include <cmath>

#include "hmr/csv.hpp"
#include "hmr/errors.hpp"

namespace hmr {

std::vector<BarRecord> load_bars(const std::string& path) {
  CsvFile csv = read_csv(path);
  if (csv.header.size() != 3 || csv.header[0] != "timestamp" ||
      csv.header[1] != "symbol" || csv.header[2] != "price") {
    throw BadRecordError("expected header 'timestamp,symbol,price' in " + path);
  }
  if (csv.rows.empty()) throw NoDataError("no bar rows in " + path);
  std::vector<BarRecord> bars;
  bars.reserve(csv.rows.size());
  for (const auto& row : csv.rows) {
    if (row.size() != 3) {
      throw BadRecordError("bar row with " + std::to_string(row.size()) +
                           " fields in " + path);
    }
    BarRecord rec;
    rec.ts = parse_timestamp(row[0]);
    rec.symbol = row[1];
    rec.price = parse_double_field(row[2], path + " row '" + row[0] + "'");
    if (!(rec.price > 0.0)) {
      throw BadRecordError("nonpositive price at " + row[0] + " (" + row[1] +
                           ") in " + path);
    }
    bars.push_back(std::move(rec));
  }
  std::stable_sort(bars.begin(), bars.end(),
                   [](const BarRecord& a, const BarRecord& b) {
                     if (a.symbol != b.symbol) return a.symbol < b.symbol;
                     return a.ts < b.ts;
                   });
  return bars;
}

IntradayGrid build_five_minute_grid(const std::vector<BarRecord>& bars,
                                    const TradingSession& session) {
  if (bars.empty()) throw NoDataError("no bars for grid");
  const int K = session.bars_per_day;
  IntradayGrid grid;
  grid.day = bars.front().ts.day;
  grid.log_price.resize(K + 1);

  // walk bars and boundaries together; bars are time-sorted
  size_t next = 0;
  double last_price = bars.front().price;  // slots before first bar
  int covered = 0;
  for (int k = 0; k <= K; ++k) {
    const int boundary = session.open_minute + k * session.bar_minutes;
    bool saw_bar_in_interval = false;
    while (next < bars.size() && bars[next].ts.minute <= boundary) {
      if (!(bars[next].price > 0.0)) {
        throw BadRecordError("nonpositive price at " +
                             format_timestamp(bars[next].ts));
      }
      last_price = bars[next].price;
      if (k > 0 && bars[next].ts.minute > boundary - session.bar_minutes)
        saw_bar_in_interval = true;
      ++next;
    }
    if (saw_bar_in_interval) ++covered;
    grid.log_price[k] = std::log(last_price);
  }
  grid.coverage = static_cast<double>(covered) / K;
  return grid;
}

std::vector<double> grid_log_returns(const IntradayGrid& grid) {
  std::vector<double> r(grid.log_price.size() - 1);
  for (size_t k = 0; k + 1 < grid.log_price.size(); ++k)
    r[k] = grid.log_price[k + 1] - grid.log_price[k];
  return r;
}

BarGroups group_bars(std::vector<BarRecord> bars) {
  BarGroups groups;
  for (auto& b : bars) {
    auto day = b.ts.day;
    auto sym = b.symbol;
    groups[sym][day].push_back(std::move(b));
  }
  for (auto& [sym, days] : groups)
    for (auto& [day, v] : days)
      std::stable_sort(v.begin(), v.end(), [](const BarRecord& a,
                                              const BarRecord& b) {
        return a.ts < b.ts;
      });
  return groups;
}

}  // namespace hmr
