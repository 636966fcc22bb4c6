#pragma once

#include <string>

#include "hmr/config.hpp"
#include "hmr/types.hpp"

namespace hmr {

// Stage drivers behind the CLI subcommands.  Every stage works inside one
// artifact directory: it reads the well-known files of its upstream stages
// (DependencyError names the stage to run first), writes its own outputs,
// and echoes the configuration it resolved to <stage>.config.resolved.
// Outputs carry no timestamps, so reruns are byte-identical.

void run_simulate_stage(const Config& cfg, const std::string& dir);

// bars/riskfree paths may be empty; then DIR/bars.csv + DIR/riskfree.csv
void run_ingest_stage(const Config& cfg, const std::string& dir,
                      const std::string& bars_path,
                      const std::string& riskfree_path);

void run_moments_stage(const Config& cfg, const std::string& dir,
                       const std::string& bars_path);

void run_decompose_stage(const Config& cfg, const std::string& dir);

// controls_path: optional date,<cols> csv copied into the artifact dir
void run_factors_stage(const Config& cfg, const std::string& dir,
                       const std::string& controls_path);

void run_sort_stage(const Config& cfg, const std::string& dir);

void run_crosssection_stage(const Config& cfg, const std::string& dir);

void run_tvp_stage(const Config& cfg, const std::string& dir);

void run_report_stage(const Config& cfg, const std::string& dir);

// moment panel file round-trip (daily: date,asset,rdvol,rds,rdk; weekly:
// week,asset,rvol,rs,rk; the index symbol appears as an ordinary row)
void write_moment_panel(const std::string& path, const MomentPanel& panel,
                        const std::string& index_symbol);
MomentPanel load_moment_panel(const std::string& path, Frequency freq,
                              const std::string& index_symbol);

}  // namespace hmr
