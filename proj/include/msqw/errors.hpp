#pragma once

#include <stdexcept>
#include <string>

namespace msqw {

/// A size or parameter is outside what the simulator supports (e.g. n > 14).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The caller combined arguments that cannot work together (dimension mismatch etc.).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace msqw
