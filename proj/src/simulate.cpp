#include "hmr/simulate.hpp"

#include <cmath>
#include <cstdio>

#include "hmr/errors.hpp"
#include "hmr/rng.hpp"

namespace hmr {

std::vector<double> simulate_intraday_returns(std::mt19937_64& eng, int K,
                                              const IntradayDgp& dgp) {
  if (K < 1) throw ConfigError("simulate_intraday_returns: K must be >= 1");
  if (dgp.daily_var < 0.0) throw ConfigError("negative diffusion variance");
  std::vector<double> r(K, 0.0);
  if (dgp.daily_var > 0.0) {
    std::normal_distribution<double> diff(0.0, std::sqrt(dgp.daily_var / K));
    for (int k = 0; k < K; ++k) r[k] = diff(eng);
  }
  if (dgp.jumps.intensity > 0.0 && dgp.jumps.scale > 0.0) {
    std::poisson_distribution<int> count(dgp.jumps.intensity);
    std::uniform_int_distribution<int> slot(0, K - 1);
    std::normal_distribution<double> mag(0.0, dgp.jumps.scale);
    const int n_jumps = count(eng);
    for (int j = 0; j < n_jumps; ++j) {
      double m = mag(eng);
      if (dgp.jumps.sign > 0) m = std::fabs(m);
      if (dgp.jumps.sign < 0) m = -std::fabs(m);
      r[slot(eng)] += m;
    }
  }
  return r;
}

namespace {

SerialDay next_trading_day(SerialDay d) {
  do {
    ++d;
  } while (weekday(d) >= 5);  // skip Saturday/Sunday
  return d;
}

std::string asset_name(int i) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "A%03d", i);
  return buf;
}

}  // namespace

SimulatedMarket simulate_market(const MarketSimConfig& cfg) {
  if (cfg.n_assets < 1 || cfg.n_days < 1)
    throw ConfigError("simulate_market: need >= 1 asset and day");
  SimulatedMarket out;
  out.days.resize(cfg.n_days);
  SerialDay d = weekday(cfg.start_day) >= 5 ? next_trading_day(cfg.start_day)
                                            : cfg.start_day;
  for (int t = 0; t < cfg.n_days; ++t) {
    out.days[t] = d;
    d = next_trading_day(d);
  }
  for (int i = 0; i < cfg.n_assets; ++i) out.symbols.push_back(asset_name(i));
  out.symbols.push_back(cfg.index_symbol);

  const int K = cfg.session.bars_per_day;
  const size_t bars_per_symbol = static_cast<size_t>(cfg.n_days) * (K + 1);
  out.bars.resize(out.symbols.size() * bars_per_symbol);

  const long long NS = static_cast<long long>(out.symbols.size());
#pragma omp parallel for schedule(static)
  for (long long si = 0; si < NS; ++si) {
    const bool is_index = si == NS - 1;
    IntradayDgp dgp = cfg.dgp;
    if (is_index) {
      dgp.daily_var *= cfg.index_var_scale;
      dgp.jumps.intensity = 0.0;  // index stays diffusion-only
    }
    double logp = std::log(100.0);
    size_t slot = static_cast<size_t>(si) * bars_per_symbol;
    for (int t = 0; t < cfg.n_days; ++t) {
      // one substream per (symbol, day): draws independent of scheduling
      std::mt19937_64 eng = substream(
          cfg.seed, static_cast<uint64_t>(si) * 1000003ULL + t);
      const std::vector<double> r = simulate_intraday_returns(eng, K, dgp);
      for (int k = 0; k <= K; ++k) {
        if (k > 0) logp += r[k - 1];
        BarRecord& bar = out.bars[slot++];
        bar.ts = {out.days[t],
                  cfg.session.open_minute + k * cfg.session.bar_minutes};
        bar.symbol = out.symbols[si];
        bar.price = std::exp(logp);
      }
    }
  }

  out.rf_dates.push_back(out.days.front());
  out.rf_rates.push_back(cfg.rf_annual);
  return out;
}

SimulatedPanel simulate_return_panel(uint64_t seed, const PanelDgp& dgp) {
  const int N = dgp.n_assets;
  const int T = dgp.n_periods;
  const int K = static_cast<int>(dgp.premia.size());
  if (N < 2 || T < K + 3 || K < 1)
    throw ConfigError("simulate_return_panel: degenerate dimensions");

  SimulatedPanel out;
  out.factors.freq = Frequency::daily;
  out.panel.freq = Frequency::daily;

  SerialDay d = weekday(dgp.start_day) >= 5 ? next_trading_day(dgp.start_day)
                                            : dgp.start_day;
  out.panel.dates.resize(T);
  for (int t = 0; t < T; ++t) {
    out.panel.dates[t] = d;
    d = next_trading_day(d);
  }
  out.factors.dates = out.panel.dates;
  for (int j = 0; j < K; ++j)
    out.factors.names.push_back("F" + std::to_string(j + 1));
  for (int i = 0; i < N; ++i) out.panel.assets.push_back(asset_name(i));

  // factor realizations, centered column by column
  std::mt19937_64 feng = substream(seed, 0xFAC70ULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd Xf(T, K);
  for (int j = 0; j < K; ++j) {
    for (int t = 0; t < T; ++t) Xf(t, j) = dgp.factor_vol * normal(feng);
    Xf.col(j).array() -= Xf.col(j).mean();
  }
  out.factors.values = Matrix(T, K);
  for (int t = 0; t < T; ++t)
    for (int j = 0; j < K; ++j) out.factors.values.at(t, j) = Xf(t, j);

  std::mt19937_64 beng = substream(seed, 0xBE7A5ULL);
  out.beta.resize(N, K);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < K; ++j) out.beta(i, j) = dgp.beta_sd * normal(beng);

  // lambda_{t,j}; lambda holds the time averages actually injected
  Eigen::MatrixXd lam(T, K);
  for (int j = 0; j < K; ++j) {
    const double amp = j < static_cast<int>(dgp.premium_amplitude.size())
                           ? dgp.premium_amplitude[j]
                           : 0.0;
    for (int t = 0; t < T; ++t)
      lam(t, j) = dgp.premia[j] +
                  amp * std::sin(2.0 * M_PI * t / static_cast<double>(T));
  }
  out.lambda = lam.colwise().mean();

  out.panel.returns = Matrix(T, N);
  const long long NN = N;
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < NN; ++i) {
    std::mt19937_64 eng = substream(seed, 0xE575ULL + i);
    std::normal_distribution<double> eps(0.0, 1.0);
    // r_0 is noise only: it has no predecessor factor row
    out.panel.returns.at(0, i) = dgp.noise_vol * eps(eng);
    for (int t = 0; t + 1 < T; ++t) {
      double r = dgp.noise_vol * eps(eng);
      for (int j = 0; j < K; ++j)
        r += out.beta(i, j) * (Xf(t, j) + lam(t, j));
      out.panel.returns.at(t + 1, i) = r;
    }
  }
  return out;
}

}  // namespace hmr
