#include "hmr/factors.hpp"

#include <cmath>
#include <sstream>

#include "hmr/csv.hpp"
#include "hmr/decompose.hpp"
#include "hmr/errors.hpp"

namespace hmr {

namespace {

struct BaseSeries {
  std::vector<SerialDay> dates;       // complete rows only
  std::vector<std::vector<double>> s; // six series, same length
};

// market vol/skew/kurt + idio averages, listwise-complete rows
BaseSeries base_series(const MomentPanel& panel) {
  IdioAverages idio = average_idiosyncratic(panel);
  BaseSeries out;
  out.s.resize(6);
  for (size_t t = 0; t < panel.dates.size(); ++t) {
    const double vals[6] = {panel.market_vol[t],  panel.market_skew[t],
                            panel.market_kurt[t], idio.vol[t],
                            idio.skew[t],         idio.kurt[t]};
    bool ok = true;
    for (double v : vals)
      if (!std::isfinite(v)) ok = false;
    if (!ok) continue;
    out.dates.push_back(panel.dates[t]);
    for (int j = 0; j < 6; ++j) out.s[j].push_back(vals[j]);
  }
  if (out.dates.empty())
    throw NoDataError("no complete factor rows (market or idio series empty)");
  return out;
}

const char* kBaseNames[6] = {"RVOL_m", "RS_m", "RK_m",
                             "RVOL_I", "RS_I", "RK_I"};

}  // namespace

FactorMatrix build_aggregate_factors(const MomentPanel& panel) {
  BaseSeries base = base_series(panel);
  FactorMatrix fm;
  fm.freq = panel.freq;
  fm.dates = base.dates;
  fm.names.assign(kBaseNames, kBaseNames + 6);
  fm.values = Matrix(base.dates.size(), 6);
  for (size_t t = 0; t < base.dates.size(); ++t)
    for (int j = 0; j < 6; ++j) fm.values.at(t, j) = base.s[j][t];
  return fm;
}

FactorMatrix build_horizon_factors(const MomentPanel& panel, int J) {
  BaseSeries base = base_series(panel);
  FactorMatrix fm;
  fm.freq = panel.freq;
  fm.dates = base.dates;
  fm.names.reserve(12);
  fm.values = Matrix(base.dates.size(), 12);
  for (int j = 0; j < 6; ++j) {
    // RVOL_m -> RVOL_s_m / RVOL_l_m etc.
    const std::string name(kBaseNames[j]);
    const size_t us = name.rfind('_');
    fm.names.push_back(name.substr(0, us) + "_s" + name.substr(us));
    fm.names.push_back(name.substr(0, us) + "_l" + name.substr(us));
    Decomposition d = decompose(base.s[j], J);
    for (size_t t = 0; t < base.dates.size(); ++t) {
      fm.values.at(t, 2 * j) = d.short_run[t];
      fm.values.at(t, 2 * j + 1) = d.long_run[t];
    }
  }
  return fm;
}

FactorMatrix merge_factors(const FactorMatrix& left, const FactorMatrix& right) {
  for (const auto& n : right.names)
    for (const auto& m : left.names)
      if (n == m) throw ConfigError("duplicate factor column '" + n + "'");
  FactorMatrix out;
  out.freq = left.freq;
  out.names = left.names;
  out.names.insert(out.names.end(), right.names.begin(), right.names.end());

  size_t ri = 0;
  std::vector<std::pair<size_t, size_t>> matches;  // (left row, right row)
  for (size_t li = 0; li < left.dates.size(); ++li) {
    while (ri < right.dates.size() && right.dates[ri] < left.dates[li]) ++ri;
    if (ri < right.dates.size() && right.dates[ri] == left.dates[li])
      matches.emplace_back(li, ri);
  }
  if (matches.empty()) throw DataError("factor merge: no overlapping dates");

  out.values = Matrix(matches.size(), out.names.size());
  out.dates.resize(matches.size());
  for (size_t k = 0; k < matches.size(); ++k) {
    const auto [li, rj] = matches[k];
    out.dates[k] = left.dates[li];
    for (size_t c = 0; c < left.names.size(); ++c)
      out.values.at(k, c) = left.values.at(li, c);
    for (size_t c = 0; c < right.names.size(); ++c)
      out.values.at(k, left.names.size() + c) = right.values.at(rj, c);
  }
  return out;
}

Matrix correlation_matrix(const FactorMatrix& fm) {
  const size_t T = fm.dates.size();
  const size_t K = fm.names.size();
  if (T < 2) throw InsufficientDataError("correlation needs >= 2 rows");
  std::vector<double> mean(K, 0.0), sd(K, 0.0);
  for (size_t j = 0; j < K; ++j) {
    for (size_t t = 0; t < T; ++t) mean[j] += fm.values.at(t, j);
    mean[j] /= static_cast<double>(T);
    for (size_t t = 0; t < T; ++t) {
      const double d = fm.values.at(t, j) - mean[j];
      sd[j] += d * d;
    }
    sd[j] = std::sqrt(sd[j]);
  }
  Matrix corr(K, K, kNaN);
  for (size_t a = 0; a < K; ++a) {
    for (size_t b = 0; b <= a; ++b) {
      if (sd[a] == 0.0 || sd[b] == 0.0) continue;  // NaN for constants
      double cov = 0.0;
      for (size_t t = 0; t < T; ++t)
        cov += (fm.values.at(t, a) - mean[a]) * (fm.values.at(t, b) - mean[b]);
      corr.at(a, b) = corr.at(b, a) = cov / (sd[a] * sd[b]);
    }
  }
  return corr;
}

FactorMatrix load_factor_matrix(const std::string& path, Frequency freq) {
  CsvFile csv = read_csv(path);
  if (csv.header.size() < 2 || csv.header[0] != "date")
    throw BadRecordError("expected 'date,<factors...>' header in " + path);
  FactorMatrix fm;
  fm.freq = freq;
  fm.names.assign(csv.header.begin() + 1, csv.header.end());
  fm.values = Matrix(csv.rows.size(), fm.names.size());
  fm.dates.resize(csv.rows.size());
  SerialDay prev = 0;
  for (size_t t = 0; t < csv.rows.size(); ++t) {
    const auto& row = csv.rows[t];
    if (row.size() != csv.header.size())
      throw BadRecordError("ragged factor row in " + path);
    fm.dates[t] = parse_date(row[0]);
    if (t > 0 && fm.dates[t] <= prev)
      throw BadRecordError("factor dates not strictly ascending in " + path);
    prev = fm.dates[t];
    for (size_t j = 0; j < fm.names.size(); ++j) {
      const double v = parse_double_field(row[j + 1], path + " row " + row[0]);
      if (!std::isfinite(v))
        throw BadRecordError("missing factor value at " + row[0] + " in " +
                             path);
      fm.values.at(t, j) = v;
    }
  }
  if (fm.dates.empty()) throw NoDataError("no factor rows in " + path);
  return fm;
}

void write_factor_matrix(const std::string& path, const FactorMatrix& fm,
                         const std::vector<std::string>& comments) {
  std::ostringstream out;
  for (const auto& c : comments) out << c << '\n';
  out << "date";
  for (const auto& n : fm.names) out << ',' << n;
  out << '\n';
  for (size_t t = 0; t < fm.dates.size(); ++t) {
    out << format_date(fm.dates[t]);
    for (size_t j = 0; j < fm.names.size(); ++j)
      out << ',' << format_double(fm.values.at(t, j));
    out << '\n';
  }
  write_text_file(path, out.str());
}

}  // namespace hmr
