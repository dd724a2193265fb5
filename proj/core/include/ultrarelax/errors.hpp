#pragma once

#include <stdexcept>
#include <string>

namespace ultrarelax {

// Invalid arguments, malformed configuration, inconsistent model data.
// The command line tool maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// A solver left its validity envelope (negative density beyond tolerance,
// step size too large, rejection bound violated, tolerance breach in a
// comparison run). Exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failures while reading configs or writing result bundles.
// Exit code 4.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ultrarelax
