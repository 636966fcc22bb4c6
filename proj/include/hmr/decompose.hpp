#pragma once

#include <cstddef>
#include <vector>

#include "hmr/types.hpp"

namespace hmr {

// Two-component horizon split of a series.  The long-run component is the
// trailing moving average of width 2^J (including the current point; an
// expanding mean over the first 2^J - 1 points), the short-run component is
// the remainder:  x[t] = short[t] + long[t].
//
// The long component at t is computed from x[0..t] only, via a forward
// running-sum recurrence, so feeding any prefix of the series reproduces
// the full run's outputs bitwise on that prefix.
struct Decomposition {
  std::vector<double> short_run;
  std::vector<double> long_run;
};

Decomposition decompose(const std::vector<double>& x, int J);

// Preallocated-buffer kernel used by the panel wrappers and the property
// tests; short_out/long_out must hold n doubles.  Throws NumericalError on
// non-finite input and ConfigError for J outside [0, 30].
void decompose_into(const double* x, std::size_t n, int J, double* short_out,
                    double* long_out);

// Column-wise decomposition of a panel (dates x series).  Columns are
// independent, so the parallel variant splits over columns.
struct PanelDecomposition {
  Matrix short_run;
  Matrix long_run;
};

PanelDecomposition decompose_panel(const Matrix& panel, int J);
PanelDecomposition decompose_panel_serial(const Matrix& panel, int J);

// Multi-band extension: for ascending scales J1 < ... < Jm, returns m+1
// bands that sum to the input exactly:
//   band 0   = x - MA(2^J1)            (finest detail)
//   band k   = MA(2^Jk) - MA(2^Jk+1)
//   band m   = MA(2^Jm)                (residual trend)
std::vector<std::vector<double>> decompose_bands(const std::vector<double>& x,
                                                 const std::vector<int>& scales);

}  // namespace hmr
