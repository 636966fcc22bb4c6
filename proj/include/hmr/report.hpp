#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hmr/cross_section.hpp"
#include "hmr/qbll.hpp"
#include "hmr/sorts.hpp"
#include "hmr/types.hpp"

namespace hmr {

// RVOL_m -> RVOL(m), RVOL_s_m -> RVOL(s,m), RS_I -> RS(I); anything
// without a recognised suffix (MKT, SMB, ...) passes through unchanged.
std::string pretty_factor_label(const std::string& name);

// Quantile table: one block per sort variable, a mean-bps row with the
// t-stat row in parentheses below, columns 1..Q plus High-Low.  `panels`
// pairs a heading with the reports under it.
std::string render_sort_table(
    const std::vector<std::pair<std::string, std::vector<SortReport>>>& panels);

// Premia table: const row first, then one row per factor, t-stats in
// parentheses beneath each estimate; static variant closes with R2 and N.
std::string render_premia_table(const std::string& title,
                                const RiskPremiaEstimate& est);
std::string render_premia_table(const std::string& title,
                                const DynamicPremia& dyn);

// Lower-triangle correlation block for rows [row_begin, row_end) of the
// factor set behind `corr`; columns run from 0 through each row's index.
std::string render_correlation_block(const std::string& title,
                                     const std::vector<std::string>& names,
                                     const Matrix& corr, std::size_t row_begin,
                                     std::size_t row_end);

// ---- artifact round-trip for the report stage ----

void write_sort_report_csv(const std::string& path, const SortReport& rep,
                           const std::vector<std::string>& comments = {});
SortReport load_sort_report_csv(const std::string& path);

void write_premia_csv(const std::string& path, const RiskPremiaEstimate& est,
                      const std::vector<std::string>& comments = {});
RiskPremiaEstimate load_premia_csv(const std::string& path);

void write_dynamic_premia_csv(const std::string& path, const DynamicPremia& dyn,
                              const std::vector<std::string>& comments = {});
DynamicPremia load_dynamic_premia_csv(const std::string& path);

void write_lambda_path_csv(const std::string& path, const DynamicPremia& dyn);

}  // namespace hmr
