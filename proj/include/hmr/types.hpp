#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "hmr/calendar.hpp"

namespace hmr {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Dense row-major matrix.  Missing / undefined observations are NaN.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = kNaN)
      : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

enum class Frequency { daily, weekly };

inline std::string frequency_name(Frequency f) {
  return f == Frequency::daily ? "daily" : "weekly";
}

// Panel of per-asset excess returns on a common date index.
struct ReturnPanel {
  Frequency freq = Frequency::daily;
  std::vector<SerialDay> dates;      // ascending; weekly panels use anchors
  std::vector<std::string> assets;   // column order
  Matrix returns;                    // dates x assets, NaN = missing
};

// Per-asset realized moment series plus the market (index) series on the
// same date axis.  vol/skew/kurt hold one column per asset.
struct MomentPanel {
  Frequency freq = Frequency::daily;
  std::vector<SerialDay> dates;
  std::vector<std::string> assets;
  Matrix vol, skew, kurt;
  std::vector<double> market_vol, market_skew, market_kurt;
};

// Factor matrix for the cross-sectional work: dates with complete rows only.
struct FactorMatrix {
  Frequency freq = Frequency::daily;
  std::vector<SerialDay> dates;
  std::vector<std::string> names;
  Matrix values;  // dates x names, no NaN by construction
};

}  // namespace hmr
