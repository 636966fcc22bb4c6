#pragma once

#include <stdexcept>
#include <string>

namespace hmr {

// Exit codes used by the CLI: 0 ok, 2 config, 3 data, 4 numerical.

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NoDataError : DataError {
  explicit NoDataError(const std::string& msg) : DataError(msg) {}
};

struct BadRecordError : DataError {
  explicit BadRecordError(const std::string& msg) : DataError(msg) {}
};

struct MissingRateError : DataError {
  explicit MissingRateError(const std::string& msg) : DataError(msg) {}
};

struct InsufficientDataError : DataError {
  explicit InsufficientDataError(const std::string& msg) : DataError(msg) {}
};

struct SortError : DataError {
  explicit SortError(const std::string& msg) : DataError(msg) {}
};

struct RankError : NumericalError {
  explicit RankError(const std::string& msg) : NumericalError(msg) {}
};

struct CollinearityError : NumericalError {
  explicit CollinearityError(const std::string& msg) : NumericalError(msg) {}
};

struct DependencyError : DataError {
  explicit DependencyError(const std::string& msg) : DataError(msg) {}
};

}  // namespace hmr
