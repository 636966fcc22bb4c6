#include "hmr/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

#include <json.hpp>

#include "hmr/bars.hpp"
#include "hmr/cross_section.hpp"
#include "hmr/csv.hpp"
#include "hmr/decompose.hpp"
#include "hmr/errors.hpp"
#include "hmr/factors.hpp"
#include "hmr/moments.hpp"
#include "hmr/parallel.hpp"
#include "hmr/qbll.hpp"
#include "hmr/report.hpp"
#include "hmr/returns.hpp"
#include "hmr/simulate.hpp"
#include "hmr/sorts.hpp"

namespace hmr {

namespace {

std::string join(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  return dir.back() == '/' ? dir + name : dir + "/" + name;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create directory " + dir);
}

void require_artifact(const std::string& path, const std::string& stage) {
  if (!file_exists(path))
    throw DependencyError("missing " + path + "; run `" + stage + "` first");
}

void echo_config(const Config& cfg, const std::string& dir,
                 const std::string& stage) {
  write_text_file(join(dir, stage + ".config.resolved"), cfg.resolved_echo());
}

IngestConfig ingest_config(const Config& cfg) {
  IngestConfig ic;
  ic.min_coverage = cfg.get_double("min_coverage", 0.8);
  ic.include_short_sessions = cfg.get_bool("include_short_sessions", false);
  ic.index_symbol = cfg.get_string("index_symbol", "INDEX");
  return ic;
}

Annualization annualization_mode(const Config& cfg) {
  const std::string m = cfg.get_string("annualization", "outside_sqrt");
  if (m == "outside_sqrt") return Annualization::outside_sqrt;
  if (m == "inside_sqrt") return Annualization::inside_sqrt;
  if (m == "none") return Annualization::none;
  throw ConfigError("annualization must be outside_sqrt|inside_sqrt|none");
}

Frequency frequency_of(const Config& cfg) {
  const std::string f = cfg.get_string("frequency", "weekly");
  if (f == "daily") return Frequency::daily;
  if (f == "weekly") return Frequency::weekly;
  throw ConfigError("frequency must be daily|weekly");
}

// the 18 sortable variables in report order: per family, aggregate then
// the horizon splits
std::vector<std::string> family_variables(const std::string& suffix) {
  std::vector<std::string> v;
  for (const char* base : {"RVOL", "RS", "RK"})
    v.push_back(std::string(base) + suffix);
  for (const char* base : {"RVOL", "RS", "RK"}) {
    v.push_back(std::string(base) + "_s" + suffix);
    v.push_back(std::string(base) + "_l" + suffix);
  }
  return v;
}

}  // namespace

void write_moment_panel(const std::string& path, const MomentPanel& panel,
                        const std::string& index_symbol) {
  std::ostringstream out;
  out << (panel.freq == Frequency::daily ? "date,asset,rdvol,rds,rdk"
                                         : "week,asset,rvol,rs,rk")
      << '\n';
  for (size_t t = 0; t < panel.dates.size(); ++t) {
    const std::string date = format_date(panel.dates[t]);
    for (size_t c = 0; c < panel.assets.size(); ++c) {
      const double v = panel.vol.at(t, c);
      const double s = panel.skew.at(t, c);
      const double k = panel.kurt.at(t, c);
      if (!std::isfinite(v) && !std::isfinite(s) && !std::isfinite(k))
        continue;  // absent: no row at all
      out << date << ',' << panel.assets[c] << ',' << format_double(v) << ','
          << format_double(s) << ',' << format_double(k) << '\n';
    }
    const double v = panel.market_vol[t];
    const double s = panel.market_skew[t];
    const double k = panel.market_kurt[t];
    if (std::isfinite(v) || std::isfinite(s) || std::isfinite(k))
      out << date << ',' << index_symbol << ',' << format_double(v) << ','
          << format_double(s) << ',' << format_double(k) << '\n';
  }
  write_text_file(path, out.str());
}

MomentPanel load_moment_panel(const std::string& path, Frequency freq,
                              const std::string& index_symbol) {
  CsvFile csv = read_csv(path);
  const std::vector<std::string> daily_hdr = {"date", "asset", "rdvol", "rds",
                                              "rdk"};
  const std::vector<std::string> weekly_hdr = {"week", "asset", "rvol", "rs",
                                               "rk"};
  if (csv.header != (freq == Frequency::daily ? daily_hdr : weekly_hdr))
    throw BadRecordError("unexpected moment panel header in " + path);

  struct Rec {
    SerialDay day;
    std::string asset;
    double v, s, k;
  };
  std::vector<Rec> recs;
  std::map<SerialDay, size_t> date_index;
  std::map<std::string, size_t> asset_index;
  for (const auto& row : csv.rows) {
    if (row.size() != 5) throw BadRecordError("bad moment row in " + path);
    Rec r{parse_date(row[0]), row[1], parse_double_field(row[2], path),
          parse_double_field(row[3], path), parse_double_field(row[4], path)};
    date_index.emplace(r.day, 0);
    if (r.asset != index_symbol) asset_index.emplace(r.asset, 0);
    recs.push_back(std::move(r));
  }
  if (recs.empty()) throw NoDataError("no moment rows in " + path);

  MomentPanel panel;
  panel.freq = freq;
  for (auto& [day, idx] : date_index) {
    idx = panel.dates.size();
    panel.dates.push_back(day);
  }
  for (auto& [asset, idx] : asset_index) {
    idx = panel.assets.size();
    panel.assets.push_back(asset);
  }
  const size_t T = panel.dates.size();
  const size_t N = panel.assets.size();
  panel.vol = Matrix(T, N);
  panel.skew = Matrix(T, N);
  panel.kurt = Matrix(T, N);
  panel.market_vol.assign(T, kNaN);
  panel.market_skew.assign(T, kNaN);
  panel.market_kurt.assign(T, kNaN);
  for (const auto& r : recs) {
    const size_t t = date_index[r.day];
    if (r.asset == index_symbol) {
      panel.market_vol[t] = r.v;
      panel.market_skew[t] = r.s;
      panel.market_kurt[t] = r.k;
    } else {
      const size_t c = asset_index[r.asset];
      panel.vol.at(t, c) = r.v;
      panel.skew.at(t, c) = r.s;
      panel.kurt.at(t, c) = r.k;
    }
  }
  return panel;
}

void run_simulate_stage(const Config& cfg, const std::string& dir) {
  ensure_dir(dir);
  set_thread_count(cfg.get_int("threads", 0));
  MarketSimConfig mc;
  mc.n_assets = cfg.get_int("sim_assets", 10);
  mc.n_days = cfg.get_int("sim_days", 260);
  mc.seed = cfg.get_u64("sim_seed", 42);
  mc.dgp.daily_var = cfg.get_double("sim_daily_var", 1e-4);
  mc.dgp.jumps.intensity = cfg.get_double("sim_jump_intensity", 0.5);
  mc.dgp.jumps.scale = cfg.get_double("sim_jump_scale", 0.004);
  mc.dgp.jumps.sign = cfg.get_int("sim_jump_sign", 0);
  mc.rf_annual = cfg.get_double("sim_rf", 0.02);
  mc.index_var_scale = cfg.get_double("sim_index_var_scale", 0.5);
  mc.start_day = parse_date(cfg.get_string("sim_start", "2018-01-02"));
  mc.index_symbol = cfg.get_string("index_symbol", "INDEX");

  const SimulatedMarket sim = simulate_market(mc);

  std::ostringstream bars;
  bars << "timestamp,symbol,price\n";
  for (const auto& b : sim.bars)
    bars << format_timestamp(b.ts) << ',' << b.symbol << ','
         << format_double(b.price) << '\n';
  write_text_file(join(dir, "bars.csv"), bars.str());

  std::ostringstream rf;
  rf << "date,annualized_rate\n";
  for (size_t i = 0; i < sim.rf_dates.size(); ++i)
    rf << format_date(sim.rf_dates[i]) << ',' << format_double(sim.rf_rates[i])
       << '\n';
  write_text_file(join(dir, "riskfree.csv"), rf.str());

  nlohmann::json truth;
  truth["seed"] = mc.seed;
  truth["n_assets"] = mc.n_assets;
  truth["n_days"] = mc.n_days;
  truth["daily_var"] = mc.dgp.daily_var;
  truth["jump_intensity"] = mc.dgp.jumps.intensity;
  truth["jump_scale"] = mc.dgp.jumps.scale;
  truth["jump_sign"] = mc.dgp.jumps.sign;
  truth["rf_annual"] = mc.rf_annual;
  truth["index_symbol"] = mc.index_symbol;
  truth["index_var_scale"] = mc.index_var_scale;
  truth["start"] = format_date(sim.days.front());
  truth["symbols"] = sim.symbols;
  write_text_file(join(dir, "truth.json"), truth.dump(2) + "\n");

  echo_config(cfg, dir, "simulate");
}

void run_ingest_stage(const Config& cfg, const std::string& dir,
                      const std::string& bars_path,
                      const std::string& riskfree_path) {
  ensure_dir(dir);
  set_thread_count(cfg.get_int("threads", 0));
  const std::string bars_file =
      bars_path.empty() ? join(dir, "bars.csv") : bars_path;
  const std::string rf_file =
      riskfree_path.empty() ? join(dir, "riskfree.csv") : riskfree_path;
  require_artifact(bars_file, "simulate");
  require_artifact(rf_file, "simulate");

  const IngestConfig ic = ingest_config(cfg);
  const BarGroups groups = group_bars(load_bars(bars_file));
  const RiskFreeCurve rf = RiskFreeCurve::load(rf_file);

  const ReturnPanel daily = build_return_panel(groups, ic, rf);
  const ReturnPanel weekly =
      aggregate_weekly_returns(daily, cfg.get_int("anchor_weekday", 0));
  write_return_panel(join(dir, "panel_daily.csv"), daily);
  write_return_panel(join(dir, "panel_weekly.csv"), weekly);
  echo_config(cfg, dir, "ingest");
}

void run_moments_stage(const Config& cfg, const std::string& dir,
                       const std::string& bars_path) {
  ensure_dir(dir);
  set_thread_count(cfg.get_int("threads", 0));
  const std::string bars_file =
      bars_path.empty() ? join(dir, "bars.csv") : bars_path;
  require_artifact(bars_file, "simulate");

  const IngestConfig ic = ingest_config(cfg);
  const BarGroups groups = group_bars(load_bars(bars_file));
  const MomentPanel daily = compute_moment_panel(groups, ic);
  const MomentPanel weekly = aggregate_weekly_moments(
      daily, cfg.get_int("anchor_weekday", 0), annualization_mode(cfg));
  write_moment_panel(join(dir, "moments_daily.csv"), daily, ic.index_symbol);
  write_moment_panel(join(dir, "moments_weekly.csv"), weekly, ic.index_symbol);
  echo_config(cfg, dir, "moments");
}

void run_decompose_stage(const Config& cfg, const std::string& dir) {
  ensure_dir(dir);
  set_thread_count(cfg.get_int("threads", 0));
  const std::string index = cfg.get_string("index_symbol", "INDEX");
  const std::string daily_file = join(dir, "moments_daily.csv");
  const std::string weekly_file = join(dir, "moments_weekly.csv");
  require_artifact(daily_file, "moments");
  require_artifact(weekly_file, "moments");

  const int j_daily = cfg.get_int("j_daily", 7);
  const int j_weekly = cfg.get_int("j_weekly", 5);

  const MomentPanel daily = load_moment_panel(daily_file, Frequency::daily, index);
  const MomentPanel weekly =
      load_moment_panel(weekly_file, Frequency::weekly, index);
  write_factor_matrix(join(dir, "decomposed_daily.csv"),
                      build_horizon_factors(daily, j_daily),
                      {"# J=" + std::to_string(j_daily)});
  write_factor_matrix(join(dir, "decomposed_weekly.csv"),
                      build_horizon_factors(weekly, j_weekly),
                      {"# J=" + std::to_string(j_weekly)});
  echo_config(cfg, dir, "decompose");
}

void run_factors_stage(const Config& cfg, const std::string& dir,
                       const std::string& controls_path) {
  ensure_dir(dir);
  set_thread_count(cfg.get_int("threads", 0));
  const std::string index = cfg.get_string("index_symbol", "INDEX");
  require_artifact(join(dir, "moments_daily.csv"), "moments");
  require_artifact(join(dir, "moments_weekly.csv"), "moments");
  require_artifact(join(dir, "decomposed_daily.csv"), "decompose");
  require_artifact(join(dir, "decomposed_weekly.csv"), "decompose");

  for (const Frequency freq : {Frequency::daily, Frequency::weekly}) {
    const std::string tag = frequency_name(freq);
    const MomentPanel panel = load_moment_panel(
        join(dir, "moments_" + tag + ".csv"), freq, index);
    const FactorMatrix sfmm = build_aggregate_factors(panel);
    write_factor_matrix(join(dir, "factors_sfmm_" + tag + ".csv"), sfmm);
    const FactorMatrix shsm =
        load_factor_matrix(join(dir, "decomposed_" + tag + ".csv"), freq);
    write_factor_matrix(join(dir, "factors_shsm_" + tag + ".csv"), shsm);

    // correlation panels over the combined 18 columns
    const FactorMatrix both = merge_factors(sfmm, shsm);
    const Matrix corr = correlation_matrix(both);
    std::ostringstream txt;
    {
      // panel A: aggregate block (columns 0..5)
      txt << render_correlation_block("Panel A: aggregate series", both.names,
                                      corr, 0, 6);
      txt << '\n';
      txt << render_correlation_block(
          "Panel B: market horizon components", both.names, corr, 6, 12);
      txt << '\n';
      txt << render_correlation_block(
          "Panel C: idiosyncratic horizon components", both.names, corr, 12,
          18);
    }
    write_text_file(join(dir, "factor_correlations_" + tag + ".txt"),
                    txt.str());
    std::ostringstream corr_csv;
    corr_csv << "factor_a,factor_b,corr\n";
    for (size_t a = 0; a < both.names.size(); ++a)
      for (size_t b = 0; b < a; ++b)
        corr_csv << both.names[a] << ',' << both.names[b] << ','
                 << format_double(corr.at(a, b)) << '\n';
    write_text_file(join(dir, "factor_correlations_" + tag + ".csv"),
                    corr_csv.str());
  }

  const std::string controls =
      controls_path.empty() ? cfg.get_string("controls", "") : controls_path;
  if (!controls.empty()) {
    // validate and normalize into the artifact directory
    const FactorMatrix ctl = load_factor_matrix(controls, Frequency::daily);
    write_factor_matrix(join(dir, "controls.csv"), ctl);
  }
  echo_config(cfg, dir, "factors");
}

void run_sort_stage(const Config& cfg, const std::string& dir) {
  ensure_dir(dir);
  set_thread_count(cfg.get_int("threads", 0));
  const std::string panel_file = join(dir, "panel_daily.csv");
  require_artifact(panel_file, "ingest");

  ReturnPanel panel = load_return_panel(panel_file);
  panel.freq = Frequency::daily;

  SortConfig sc;
  sc.window = cfg.get_int("sort_window", 63);
  sc.holding = cfg.get_int("sort_holding", 5);
  sc.step = cfg.get_int("sort_step", 5);
  sc.n_quantiles = cfg.get_int("sort_quantiles", 5);
  sc.contemporaneous = cfg.get_bool("sort_contemporaneous", false);
  sc.hac_lags = cfg.get_int("sort_hac_lags", 0);
  sc.min_obs_frac = cfg.get_double("sort_min_obs_frac", 0.8);

  const std::string which = cfg.get_string("sort_variable", "all");
  std::vector<std::string> variables;
  if (which == "all") {
    for (const auto& v : family_variables("_m")) variables.push_back(v);
    for (const auto& v : family_variables("_I")) variables.push_back(v);
  } else {
    variables.push_back(which);
  }

  FactorMatrix sfmm, shsm;
  bool have_sfmm = false, have_shsm = false;
  std::vector<SortReport> market_reports, idio_reports;
  for (const auto& var : variables) {
    const std::vector<std::string> group = exposure_group(var);
    const bool horizon = group.size() == 6;
    if (horizon && !have_shsm) {
      require_artifact(join(dir, "factors_shsm_daily.csv"), "factors");
      shsm = load_factor_matrix(join(dir, "factors_shsm_daily.csv"),
                                Frequency::daily);
      have_shsm = true;
    }
    if (!horizon && !have_sfmm) {
      require_artifact(join(dir, "factors_sfmm_daily.csv"), "factors");
      sfmm = load_factor_matrix(join(dir, "factors_sfmm_daily.csv"),
                                Frequency::daily);
      have_sfmm = true;
    }
    sc.exposure_factors = group;
    sc.sort_variable = var;
    const SortReport rep = run_sort(panel, horizon ? shsm : sfmm, sc);
    write_sort_report_csv(join(dir, "sort_" + var + ".csv"), rep);
    const bool idio = var.size() > 2 && var.substr(var.size() - 2) == "_I";
    (idio ? idio_reports : market_reports).push_back(rep);
  }

  std::vector<std::pair<std::string, std::vector<SortReport>>> panels;
  if (!market_reports.empty())
    panels.emplace_back("Panel A: market moment risk", market_reports);
  if (!idio_reports.empty())
    panels.emplace_back("Panel B: idiosyncratic moment risk", idio_reports);
  write_text_file(join(dir, "sort_table.txt"), render_sort_table(panels));
  echo_config(cfg, dir, "sort");
}

namespace {

// shared by crosssection and tvp: aligned panel + factor matrix selection
struct CsInputs {
  ReturnPanel panel;
  FactorMatrix factors;
  std::string spec;
  std::string tag;
};

CsInputs cross_section_inputs(const Config& cfg, const std::string& dir) {
  CsInputs in;
  const Frequency freq = frequency_of(cfg);
  in.tag = frequency_name(freq);
  in.spec = cfg.get_string("spec", "sfmm");
  if (in.spec != "sfmm" && in.spec != "shsm")
    throw ConfigError("spec must be sfmm|shsm");
  const std::string panel_file = join(dir, "panel_" + in.tag + ".csv");
  const std::string factor_file =
      join(dir, "factors_" + in.spec + "_" + in.tag + ".csv");
  require_artifact(panel_file, "ingest");
  require_artifact(factor_file, "factors");
  in.panel = load_return_panel(panel_file);
  in.panel.freq = freq;
  in.factors = load_factor_matrix(factor_file, freq);
  if (cfg.get_bool("with_controls", false)) {
    const std::string controls_file = join(dir, "controls.csv");
    require_artifact(controls_file, "factors (with a controls file)");
    in.factors = merge_factors(
        in.factors, load_factor_matrix(controls_file, freq));
    in.spec += "_controls";
  }
  return in;
}

}  // namespace

void run_crosssection_stage(const Config& cfg, const std::string& dir) {
  ensure_dir(dir);
  set_thread_count(cfg.get_int("threads", 0));
  CsInputs in = cross_section_inputs(cfg, dir);
  FmbConfig fc;
  fc.shanken = cfg.get_bool("shanken", false);
  const RiskPremiaEstimate est = fama_macbeth(in.panel, in.factors, fc);
  const std::string stem = "premia_static_" + in.spec + "_" + in.tag;
  write_premia_csv(join(dir, stem + ".csv"), est,
                   {"# spec=" + in.spec + ",frequency=" + in.tag});
  write_text_file(join(dir, stem + ".txt"),
                  render_premia_table("Static risk premia (" + in.spec + ", " +
                                          in.tag + ")",
                                      est));
  echo_config(cfg, dir, "crosssection");
}

void run_tvp_stage(const Config& cfg, const std::string& dir) {
  ensure_dir(dir);
  set_thread_count(cfg.get_int("threads", 0));
  CsInputs in = cross_section_inputs(cfg, dir);
  TvpOptions opt;
  opt.H = cfg.get_double("bandwidth", 0.0);
  opt.iterations = cfg.get_int("iterations", 1000);
  opt.burn_frac = cfg.get_double("burn_frac", 0.1);
  opt.seed = cfg.get_u64("seed", 1);
  opt.normalized_weights = cfg.get_bool("normalized_weights", true);
  const DynamicPremia dyn = dynamic_fama_macbeth(in.panel, in.factors, opt);
  const std::string stem = "premia_tvp_" + in.spec + "_" + in.tag;
  write_dynamic_premia_csv(
      join(dir, stem + ".csv"), dyn,
      {"# spec=" + in.spec + ",frequency=" + in.tag +
       ",seed=" + std::to_string(opt.seed) +
       ",iterations=" + std::to_string(opt.iterations)});
  write_text_file(
      join(dir, stem + ".txt"),
      render_premia_table(
          "Dynamic risk premia (" + in.spec + ", " + in.tag + ")", dyn));
  if (cfg.get_bool("write_lambda_path", true))
    write_lambda_path_csv(join(dir, "lambda_path_" + in.spec + "_" + in.tag +
                                        ".csv"),
                          dyn);
  echo_config(cfg, dir, "tvp");
}

void run_report_stage(const Config& cfg, const std::string& dir) {
  ensure_dir(dir);
  std::ostringstream out;
  bool have_anything = false;

  // sorts: fixed enumeration order, only variables whose artifact exists
  std::vector<SortReport> market_reports, idio_reports;
  for (const std::string& suffix : {std::string("_m"), std::string("_I")})
    for (const auto& var : family_variables(suffix)) {
      const std::string f = join(dir, "sort_" + var + ".csv");
      if (!file_exists(f)) continue;
      (suffix == "_m" ? market_reports : idio_reports)
          .push_back(load_sort_report_csv(f));
    }
  if (!market_reports.empty() || !idio_reports.empty()) {
    std::vector<std::pair<std::string, std::vector<SortReport>>> panels;
    if (!market_reports.empty())
      panels.emplace_back("Panel A: market moment risk", market_reports);
    if (!idio_reports.empty())
      panels.emplace_back("Panel B: idiosyncratic moment risk", idio_reports);
    out << "== Portfolio sorts ==\n\n" << render_sort_table(panels) << '\n';
    have_anything = true;
  }

  for (const std::string& spec :
       {std::string("sfmm"), std::string("shsm"), std::string("sfmm_controls"),
        std::string("shsm_controls")}) {
    for (const std::string& tag : {std::string("daily"), std::string("weekly")}) {
      const std::string sfile =
          join(dir, "premia_static_" + spec + "_" + tag + ".csv");
      if (file_exists(sfile)) {
        out << render_premia_table(
                   "Static risk premia (" + spec + ", " + tag + ")",
                   load_premia_csv(sfile))
            << '\n';
        have_anything = true;
      }
      const std::string dfile =
          join(dir, "premia_tvp_" + spec + "_" + tag + ".csv");
      if (file_exists(dfile)) {
        out << render_premia_table(
                   "Dynamic risk premia (" + spec + ", " + tag + ")",
                   load_dynamic_premia_csv(dfile))
            << '\n';
        have_anything = true;
      }
    }
  }

  if (!have_anything)
    throw DependencyError(
        "no sort or premia artifacts in " + dir +
        "; run `sort`, `crosssection`, or `tvp` first");
  write_text_file(join(dir, "report.txt"), out.str());
  echo_config(cfg, dir, "report");
}

}  // namespace hmr
