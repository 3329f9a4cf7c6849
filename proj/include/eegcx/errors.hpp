#pragma once

#include <stdexcept>
#include <string>

namespace eegcx {

// Error taxonomy shared by the library and the CLI exit codes:
//   ConfigError   -> exit 2 (bad parameters / configuration)
//   DataError     -> exit 3 (file / format problems)
//   NumericError  -> exit 4 (degenerate inputs, undefined results)
//   TrainingError -> exit 4 (solver failures, unusable training sets)
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

struct TrainingError : std::runtime_error {
  explicit TrainingError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace eegcx
