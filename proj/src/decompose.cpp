#include "hmr/decompose.hpp"

#include <cmath>
#include <string>

#include "hmr/errors.hpp"

namespace hmr {

namespace {

// trailing MA(2^J) with expanding warm-up, written into long_out
void trailing_mean(const double* x, std::size_t n, int J, double* long_out) {
  const std::size_t w = static_cast<std::size_t>(1) << J;
  // reciprocals once per call: division inside the loop costs ~4x and the
  // choice (multiply vs divide) is part of the pinned bitwise behaviour
  static thread_local std::vector<double> inv;
  if (inv.size() < w) {
    const std::size_t old = inv.size();
    inv.resize(w);
    for (std::size_t i = old; i < w; ++i) inv[i] = 1.0 / static_cast<double>(i + 1);
  }
  double sum = 0.0;
  const std::size_t head = n < w ? n : w;
  for (std::size_t t = 0; t < head; ++t) {
    sum += x[t];
    long_out[t] = sum * inv[t];
  }
  const double inv_w = inv[w - 1];
  for (std::size_t t = w; t < n; ++t) {
    sum += x[t] - x[t - w];
    long_out[t] = sum * inv_w;
  }
}

}  // namespace

void decompose_into(const double* x, std::size_t n, int J, double* short_out,
                    double* long_out) {
  if (J < 0 || J > 30) throw ConfigError("scale J out of range [0,30]");
  for (std::size_t t = 0; t < n; ++t)
    if (!std::isfinite(x[t]))
      throw NumericalError("non-finite input to decompose at index " +
                           std::to_string(t));
  trailing_mean(x, n, J, long_out);
  for (std::size_t t = 0; t < n; ++t) short_out[t] = x[t] - long_out[t];
}

Decomposition decompose(const std::vector<double>& x, int J) {
  Decomposition d;
  d.short_run.resize(x.size());
  d.long_run.resize(x.size());
  decompose_into(x.data(), x.size(), J, d.short_run.data(), d.long_run.data());
  return d;
}

namespace {

PanelDecomposition decompose_panel_impl(const Matrix& panel, int J,
                                        bool parallel) {
  PanelDecomposition out;
  out.short_run = Matrix(panel.rows, panel.cols);
  out.long_run = Matrix(panel.rows, panel.cols);
  const long long C = static_cast<long long>(panel.cols);
  const auto run_col = [&](long long c) {
    std::vector<double> x(panel.rows), s(panel.rows), l(panel.rows);
    for (std::size_t t = 0; t < panel.rows; ++t) x[t] = panel.at(t, c);
    decompose_into(x.data(), x.size(), J, s.data(), l.data());
    for (std::size_t t = 0; t < panel.rows; ++t) {
      out.short_run.at(t, c) = s[t];
      out.long_run.at(t, c) = l[t];
    }
  };
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (long long c = 0; c < C; ++c) run_col(c);
  } else {
    for (long long c = 0; c < C; ++c) run_col(c);
  }
  return out;
}

}  // namespace

PanelDecomposition decompose_panel(const Matrix& panel, int J) {
  return decompose_panel_impl(panel, J, true);
}

PanelDecomposition decompose_panel_serial(const Matrix& panel, int J) {
  return decompose_panel_impl(panel, J, false);
}

std::vector<std::vector<double>> decompose_bands(
    const std::vector<double>& x, const std::vector<int>& scales) {
  if (scales.empty()) throw ConfigError("decompose_bands needs >= 1 scale");
  for (std::size_t i = 1; i < scales.size(); ++i)
    if (scales[i] <= scales[i - 1])
      throw ConfigError("decompose_bands scales must be strictly ascending");

  const std::size_t n = x.size();
  const std::size_t m = scales.size();
  // one trailing mean per scale; bands telescope so the sum is exact
  std::vector<std::vector<double>> ma(m, std::vector<double>(n));
  std::vector<double> tmp_short(n);
  for (std::size_t i = 0; i < m; ++i)
    decompose_into(x.data(), n, scales[i], tmp_short.data(), ma[i].data());

  std::vector<std::vector<double>> bands(m + 1, std::vector<double>(n));
  for (std::size_t t = 0; t < n; ++t) {
    bands[0][t] = x[t] - ma[0][t];
    for (std::size_t i = 1; i < m; ++i) bands[i][t] = ma[i - 1][t] - ma[i][t];
    bands[m][t] = ma[m - 1][t];
  }
  return bands;
}

}  // namespace hmr
