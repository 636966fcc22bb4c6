#pragma once

#include <string>
#include <vector>

namespace hmr {

// Plain comma-separated files, no quoting (none of our fields contain
// commas).  Lines starting with '#' are treated as comments and surfaced
// separately so stages can stash provenance headers in their outputs.
struct CsvFile {
  std::vector<std::string> comments;           // leading '#' lines, verbatim
  std::vector<std::string> header;             // first non-comment row
  std::vector<std::vector<std::string>> rows;  // remaining rows
};

CsvFile read_csv(const std::string& path);

// Shortest round-trip decimal representation (std::to_chars).  NaN renders
// as an empty string so undefined values show up as blank fields.
std::string format_double(double v);

// Parses a field; empty string -> NaN.  Throws BadRecordError otherwise
// when the field is not a number.
double parse_double_field(const std::string& field, const std::string& context);

void write_text_file(const std::string& path, const std::string& contents);

std::string read_text_file(const std::string& path);

bool file_exists(const std::string& path);

}  // namespace hmr
