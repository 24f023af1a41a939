#pragma once

#include <stdexcept>
#include <string>

namespace qsearch {

/// Invalid mathematical input (preconditions of an operation violated).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Parameters that are syntactically fine but outside the supported
/// configuration space (wrong parity, k not a power of two, N too small...).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Request exceeds a resource budget (simulation wire cap, precision cap).
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem / parse failures on the import and export paths.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qsearch
