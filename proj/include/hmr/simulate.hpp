#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hmr/bars.hpp"
#include "hmr/types.hpp"

namespace hmr {

// ---- intraday DGP: Gaussian diffusion plus compound-Poisson jumps ----

struct JumpSpec {
  double intensity = 0.0;  // expected jumps per day
  double scale = 0.0;      // jump magnitude sd
  int sign = 0;            // -1 negative only, 0 symmetric, +1 positive only
};

struct IntradayDgp {
  double daily_var = 1e-4;  // diffusion variance over the whole day
  JumpSpec jumps;
};

// K five-minute log returns for one day; diffusion slots are
// N(0, daily_var/K), each jump lands on one uniform slot.
std::vector<double> simulate_intraday_returns(std::mt19937_64& eng, int K,
                                              const IntradayDgp& dgp);

// ---- bar-level market simulation (feeds the ingest stage) ----

struct MarketSimConfig {
  int n_assets = 10;
  int n_days = 260;
  SerialDay start_day = days_from_civil(2018, 1, 2);
  TradingSession session;
  IntradayDgp dgp;
  double index_var_scale = 0.5;  // index diffusion variance multiplier
  double rf_annual = 0.02;
  uint64_t seed = 42;
  std::string index_symbol = "INDEX";
};

struct SimulatedMarket {
  std::vector<BarRecord> bars;  // sorted by symbol, then time
  std::vector<SerialDay> rf_dates;
  std::vector<double> rf_rates;
  std::vector<std::string> symbols;  // assets then index
  std::vector<SerialDay> days;       // trading days (weekends skipped)
};

SimulatedMarket simulate_market(const MarketSimConfig& cfg);

// ---- panel-level DGP for the estimator checks ----
//
// r_{t+1,i} = sum_j beta_{i,j} (x_{t,j} + lambda_{t,j}) + noise * eps,
// with factor realizations sample-centered so the injected premia are
// recovered exactly up to the noise term.  lambda_{t,j} = premia[j] +
// premium_amplitude[j] * sin(2*pi*t/T).
struct PanelDgp {
  int n_assets = 100;
  int n_periods = 2000;
  std::vector<double> premia = {0.5};  // one entry per factor
  std::vector<double> premium_amplitude = {};  // empty = all zero
  double factor_vol = 1.0;
  double beta_sd = 1.0;
  double noise_vol = 1.0;
  SerialDay start_day = days_from_civil(2018, 1, 2);
};

struct SimulatedPanel {
  ReturnPanel panel;
  FactorMatrix factors;
  Eigen::MatrixXd beta;     // n_assets x n_factors
  Eigen::VectorXd lambda;   // time-averaged injected premia
};

SimulatedPanel simulate_return_panel(uint64_t seed, const PanelDgp& dgp);

}  // namespace hmr
