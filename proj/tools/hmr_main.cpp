// Command-line front end: one subcommand per pipeline stage, all operating
// on a shared artifact directory.
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hmr/config.hpp"
#include "hmr/errors.hpp"
#include "hmr/pipeline.hpp"

namespace {

struct CommonArgs {
  std::string dir;
  std::string config_file;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--dir", args.dir, "artifact directory")->required();
  cmd->add_option("--config", args.config_file, "key=value config file");
  cmd->add_option("--set", args.overrides,
                  "override a config key (key=value, repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "realized moment risks: intraday moments, horizon decomposition, and "
      "their prices of risk"};
  app.require_subcommand(1);

  CommonArgs sim, ingest, moments, decompose, factors, sort_cmd, cross, tvp,
      report;
  std::string bars_path, moments_bars_path, controls_path, rf_path;

  add_common(app.add_subcommand("simulate",
                                "generate a synthetic bar-level market"),
             sim);
  auto* ingest_cmd =
      app.add_subcommand("ingest", "bars -> daily/weekly return panels");
  add_common(ingest_cmd, ingest);
  ingest_cmd->add_option("--bars", bars_path, "bar file (default DIR/bars.csv)");
  ingest_cmd->add_option("--riskfree", rf_path,
                         "risk-free file (default DIR/riskfree.csv)");
  auto* moments_cmd =
      app.add_subcommand("moments", "bars -> realized moment panels");
  add_common(moments_cmd, moments);
  moments_cmd->add_option("--bars", moments_bars_path,
                          "bar file (default DIR/bars.csv)");
  add_common(app.add_subcommand(
                 "decompose", "moment panels -> short/long horizon series"),
             decompose);
  auto* factors_cmd = app.add_subcommand(
      "factors", "moment + decomposed panels -> factor matrices");
  add_common(factors_cmd, factors);
  factors_cmd->add_option("--controls", controls_path,
                          "optional controls csv (date,<cols>)");
  add_common(app.add_subcommand("sort",
                                "exposure-sorted quantile portfolios"),
             sort_cmd);
  add_common(app.add_subcommand("crosssection",
                                "static two-stage risk premia"),
             cross);
  add_common(app.add_subcommand("tvp", "dynamic (time-varying) risk premia"),
             tvp);
  add_common(app.add_subcommand("report", "render collected artifacts"),
             report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("simulate")) {
      hmr::run_simulate_stage(
          hmr::Config::load(sim.config_file, sim.overrides), sim.dir);
    } else if (app.got_subcommand("ingest")) {
      hmr::run_ingest_stage(
          hmr::Config::load(ingest.config_file, ingest.overrides), ingest.dir,
          bars_path, rf_path);
    } else if (app.got_subcommand("moments")) {
      hmr::run_moments_stage(
          hmr::Config::load(moments.config_file, moments.overrides),
          moments.dir, moments_bars_path);
    } else if (app.got_subcommand("decompose")) {
      hmr::run_decompose_stage(
          hmr::Config::load(decompose.config_file, decompose.overrides),
          decompose.dir);
    } else if (app.got_subcommand("factors")) {
      hmr::run_factors_stage(
          hmr::Config::load(factors.config_file, factors.overrides),
          factors.dir, controls_path);
    } else if (app.got_subcommand("sort")) {
      hmr::run_sort_stage(
          hmr::Config::load(sort_cmd.config_file, sort_cmd.overrides),
          sort_cmd.dir);
    } else if (app.got_subcommand("crosssection")) {
      hmr::run_crosssection_stage(
          hmr::Config::load(cross.config_file, cross.overrides), cross.dir);
    } else if (app.got_subcommand("tvp")) {
      hmr::run_tvp_stage(hmr::Config::load(tvp.config_file, tvp.overrides),
                         tvp.dir);
    } else if (app.got_subcommand("report")) {
      hmr::run_report_stage(
          hmr::Config::load(report.config_file, report.overrides), report.dir);
    }
  } catch (const hmr::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const hmr::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 4;
  } catch (const hmr::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
