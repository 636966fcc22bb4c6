#include "hmr/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "hmr/csv.hpp"
#include "hmr/errors.hpp"

namespace hmr {

std::string pretty_factor_label(const std::string& name) {
  // tail tokens: optional horizon (s/l) then family (m/I)
  const auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (true) {
      const size_t pos = s.find('_', start);
      if (pos == std::string::npos) {
        parts.push_back(s.substr(start));
        break;
      }
      parts.push_back(s.substr(start, pos - start));
      start = pos + 1;
    }
    return parts;
  };
  const std::vector<std::string> parts = split(name);
  if (parts.size() == 2 && (parts[1] == "m" || parts[1] == "I"))
    return parts[0] + "(" + parts[1] + ")";
  if (parts.size() == 3 && (parts[1] == "s" || parts[1] == "l") &&
      (parts[2] == "m" || parts[2] == "I"))
    return parts[0] + "(" + parts[1] + "," + parts[2] + ")";
  return name;
}

namespace {

std::string fixed(double v, int decimals, int width) {
  char buf[48];
  if (std::isnan(v)) {
    std::snprintf(buf, sizeof(buf), "%*s", width, "");
  } else {
    std::snprintf(buf, sizeof(buf), "%*.*f", width, decimals, v);
  }
  return buf;
}

std::string parenthesized(double v, int decimals, int width) {
  char num[40];
  std::snprintf(num, sizeof(num), "(%.*f)", decimals, v);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%*s", width, num);
  return buf;
}

constexpr int kLabelWidth = 12;
constexpr int kCellWidth = 9;

}  // namespace

std::string render_sort_table(
    const std::vector<std::pair<std::string, std::vector<SortReport>>>& panels) {
  std::ostringstream out;
  bool first_panel = true;
  for (const auto& [title, reports] : panels) {
    if (reports.empty()) continue;
    if (!first_panel) out << '\n';
    first_panel = false;
    const int Q = reports.front().n_quantiles;
    out << title << '\n';
    char head[48];
    std::snprintf(head, sizeof(head), "%-*s", kLabelWidth, "Variable");
    out << head;
    for (int p = 1; p <= Q; ++p) {
      std::snprintf(head, sizeof(head), "%*d", kCellWidth, p);
      out << head;
    }
    std::snprintf(head, sizeof(head), "%*s", kCellWidth + 1, "High-Low");
    out << head << '\n';
    out << std::string(kLabelWidth + Q * kCellWidth + kCellWidth + 1, '-')
        << '\n';
    for (const auto& rep : reports) {
      char label[48];
      std::snprintf(label, sizeof(label), "%-*s", kLabelWidth,
                    pretty_factor_label(rep.sort_variable).c_str());
      out << label;
      for (int p = 0; p < Q; ++p) out << fixed(rep.mean_bps[p], 2, kCellWidth);
      out << fixed(rep.high_low_bps, 2, kCellWidth + 1) << '\n';
      out << std::string(kLabelWidth, ' ');
      for (int p = 0; p < Q; ++p)
        out << parenthesized(rep.tstat[p], 2, kCellWidth);
      out << parenthesized(rep.high_low_tstat, 2, kCellWidth + 1) << '\n';
    }
  }
  return out.str();
}

namespace {

std::string premia_rows(const std::vector<std::string>& names,
                        const Eigen::VectorXd& coef,
                        const Eigen::VectorXd& tstat) {
  std::ostringstream out;
  for (Eigen::Index j = 0; j < coef.size(); ++j) {
    const std::string label =
        j == 0 ? "const" : pretty_factor_label(names[j - 1]);
    char lab[48];
    std::snprintf(lab, sizeof(lab), "%-*s", kLabelWidth, label.c_str());
    out << lab << fixed(coef(j), 4, 12) << '\n';
    out << std::string(kLabelWidth, ' ') << parenthesized(tstat(j), 4, 12)
        << '\n';
  }
  return out.str();
}

}  // namespace

std::string render_premia_table(const std::string& title,
                                const RiskPremiaEstimate& est) {
  std::ostringstream out;
  out << title << '\n';
  char head[64];
  std::snprintf(head, sizeof(head), "%-*s%12s", kLabelWidth, "Factor",
                "Estimate");
  out << head << '\n'
      << std::string(kLabelWidth + 12, '-') << '\n'
      << premia_rows(est.names, est.lambda, est.tstat)
      << std::string(kLabelWidth + 12, '-') << '\n';
  char foot[64];
  std::snprintf(foot, sizeof(foot), "%-*s%12.4f", kLabelWidth, "R2", est.r2);
  out << foot << '\n';
  std::snprintf(foot, sizeof(foot), "%-*s%12d", kLabelWidth, "N",
                est.n_assets);
  out << foot << '\n';
  return out.str();
}

std::string render_premia_table(const std::string& title,
                                const DynamicPremia& dyn) {
  std::ostringstream out;
  out << title << '\n';
  char head[64];
  std::snprintf(head, sizeof(head), "%-*s%12s", kLabelWidth, "Factor",
                "Estimate");
  out << head << '\n'
      << std::string(kLabelWidth + 12, '-') << '\n'
      << premia_rows(dyn.names, dyn.lambda_bar, dyn.tstat)
      << std::string(kLabelWidth + 12, '-') << '\n';
  char foot[64];
  std::snprintf(foot, sizeof(foot), "%-*s%12d", kLabelWidth, "N",
                dyn.n_assets);
  out << foot << '\n';
  return out.str();
}

std::string render_correlation_block(const std::string& title,
                                     const std::vector<std::string>& names,
                                     const Matrix& corr, std::size_t row_begin,
                                     std::size_t row_end) {
  std::ostringstream out;
  out << title << '\n';
  char cell[48];
  std::snprintf(cell, sizeof(cell), "%-*s", kLabelWidth, "");
  out << cell;
  // columns cover everything a row in [row_begin, row_end) can reach
  const std::size_t n_cols = row_end == 0 ? 0 : row_end;
  for (std::size_t c = 0; c + 1 <= n_cols; ++c) {
    std::snprintf(cell, sizeof(cell), "%*s", kCellWidth,
                  pretty_factor_label(names[c]).c_str());
    out << cell;
  }
  out << '\n';
  for (std::size_t r = row_begin; r < row_end; ++r) {
    std::snprintf(cell, sizeof(cell), "%-*s", kLabelWidth,
                  pretty_factor_label(names[r]).c_str());
    out << cell;
    for (std::size_t c = 0; c <= r; ++c)
      out << fixed(corr.at(r, c), 2, kCellWidth);
    out << '\n';
  }
  return out.str();
}

// ---- artifacts ----

void write_sort_report_csv(const std::string& path, const SortReport& rep,
                           const std::vector<std::string>& comments) {
  std::ostringstream out;
  for (const auto& c : comments) out << c << '\n';
  out << "# n_quantiles=" << rep.n_quantiles << ",n_windows=" << rep.n_windows
      << '\n';
  out << "sort_variable,quantile,mean_bps,tstat\n";
  for (int p = 0; p < rep.n_quantiles; ++p)
    out << rep.sort_variable << ',' << (p + 1) << ','
        << format_double(rep.mean_bps[p]) << ',' << format_double(rep.tstat[p])
        << '\n';
  out << rep.sort_variable << ",high_low," << format_double(rep.high_low_bps)
      << ',' << format_double(rep.high_low_tstat) << '\n';
  write_text_file(path, out.str());
}

SortReport load_sort_report_csv(const std::string& path) {
  CsvFile csv = read_csv(path);
  if (csv.header != std::vector<std::string>{"sort_variable", "quantile",
                                             "mean_bps", "tstat"})
    throw BadRecordError("unexpected sort report header in " + path);
  SortReport rep;
  for (const auto& c : csv.comments) {
    const size_t pos = c.find("n_windows=");
    if (pos != std::string::npos)
      rep.n_windows = std::atoi(c.c_str() + pos + 10);
  }
  for (const auto& row : csv.rows) {
    if (row.size() != 4) throw BadRecordError("bad sort row in " + path);
    rep.sort_variable = row[0];
    if (row[1] == "high_low") {
      rep.high_low_bps = parse_double_field(row[2], path);
      rep.high_low_tstat = parse_double_field(row[3], path);
    } else {
      rep.mean_bps.push_back(parse_double_field(row[2], path));
      rep.tstat.push_back(parse_double_field(row[3], path));
    }
  }
  rep.n_quantiles = static_cast<int>(rep.mean_bps.size());
  if (rep.n_quantiles < 2) throw NoDataError("no quantile rows in " + path);
  return rep;
}

void write_premia_csv(const std::string& path, const RiskPremiaEstimate& est,
                      const std::vector<std::string>& comments) {
  std::ostringstream out;
  for (const auto& c : comments) out << c << '\n';
  out << "# r2=" << format_double(est.r2) << ",n_assets=" << est.n_assets
      << ",n_periods=" << est.n_periods << '\n';
  out << "factor,lambda,tstat\n";
  for (Eigen::Index j = 0; j < est.lambda.size(); ++j) {
    const std::string name = j == 0 ? "const" : est.names[j - 1];
    out << name << ',' << format_double(est.lambda(j)) << ','
        << format_double(est.tstat(j)) << '\n';
  }
  write_text_file(path, out.str());
}

RiskPremiaEstimate load_premia_csv(const std::string& path) {
  CsvFile csv = read_csv(path);
  if (csv.header != std::vector<std::string>{"factor", "lambda", "tstat"})
    throw BadRecordError("unexpected premia header in " + path);
  RiskPremiaEstimate est;
  for (const auto& c : csv.comments) {
    size_t pos = c.find("r2=");
    if (pos != std::string::npos) est.r2 = std::atof(c.c_str() + pos + 3);
    pos = c.find("n_assets=");
    if (pos != std::string::npos)
      est.n_assets = std::atoi(c.c_str() + pos + 9);
    pos = c.find("n_periods=");
    if (pos != std::string::npos)
      est.n_periods = std::atoi(c.c_str() + pos + 10);
  }
  std::vector<double> lam, ts;
  for (const auto& row : csv.rows) {
    if (row.size() != 3) throw BadRecordError("bad premia row in " + path);
    if (row[0] != "const") est.names.push_back(row[0]);
    lam.push_back(parse_double_field(row[1], path));
    ts.push_back(parse_double_field(row[2], path));
  }
  if (lam.empty()) throw NoDataError("no premia rows in " + path);
  est.lambda = Eigen::Map<Eigen::VectorXd>(lam.data(), lam.size());
  est.tstat = Eigen::Map<Eigen::VectorXd>(ts.data(), ts.size());
  return est;
}

void write_dynamic_premia_csv(const std::string& path, const DynamicPremia& dyn,
                              const std::vector<std::string>& comments) {
  std::ostringstream out;
  for (const auto& c : comments) out << c << '\n';
  out << "# H=" << format_double(dyn.H) << ",n_assets=" << dyn.n_assets
      << '\n';
  out << "factor,lambda_bar,tstat\n";
  for (Eigen::Index j = 0; j < dyn.lambda_bar.size(); ++j) {
    const std::string name = j == 0 ? "const" : dyn.names[j - 1];
    out << name << ',' << format_double(dyn.lambda_bar(j)) << ','
        << format_double(dyn.tstat(j)) << '\n';
  }
  write_text_file(path, out.str());
}

DynamicPremia load_dynamic_premia_csv(const std::string& path) {
  CsvFile csv = read_csv(path);
  if (csv.header != std::vector<std::string>{"factor", "lambda_bar", "tstat"})
    throw BadRecordError("unexpected dynamic premia header in " + path);
  DynamicPremia dyn;
  for (const auto& c : csv.comments) {
    size_t pos = c.find("H=");
    if (pos != std::string::npos) dyn.H = std::atof(c.c_str() + pos + 2);
    pos = c.find("n_assets=");
    if (pos != std::string::npos)
      dyn.n_assets = std::atoi(c.c_str() + pos + 9);
  }
  std::vector<double> lam, ts;
  for (const auto& row : csv.rows) {
    if (row.size() != 3)
      throw BadRecordError("bad dynamic premia row in " + path);
    if (row[0] != "const") dyn.names.push_back(row[0]);
    lam.push_back(parse_double_field(row[1], path));
    ts.push_back(parse_double_field(row[2], path));
  }
  if (lam.empty()) throw NoDataError("no dynamic premia rows in " + path);
  dyn.lambda_bar = Eigen::Map<Eigen::VectorXd>(lam.data(), lam.size());
  dyn.tstat = Eigen::Map<Eigen::VectorXd>(ts.data(), ts.size());
  return dyn;
}

void write_lambda_path_csv(const std::string& path, const DynamicPremia& dyn) {
  std::ostringstream out;
  out << "date,factor,lambda_t\n";
  for (Eigen::Index s = 0; s < dyn.lambda_path.rows(); ++s) {
    for (Eigen::Index j = 0; j < dyn.lambda_path.cols(); ++j) {
      const double v = dyn.lambda_path(s, j);
      if (!std::isfinite(v)) continue;
      const std::string name = j == 0 ? "const" : dyn.names[j - 1];
      out << format_date(dyn.path_dates[s]) << ',' << name << ','
          << format_double(v) << '\n';
    }
  }
  write_text_file(path, out.str());
}

}  // namespace hmr
