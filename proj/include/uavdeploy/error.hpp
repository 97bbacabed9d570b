#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace uavdeploy {

/// Precondition violation on a library call (bad parameter, dimension mismatch, ...).
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation exists but is not defined for the requested dimension.
class unsupported_dimension : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Scenario file problem. `path()` is the dotted field path, e.g. "density.family".
class config_error : public std::runtime_error {
 public:
  config_error(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

inline void require(bool ok, const char* what) {
  if (!ok) throw invalid_input(what);
}

}  // namespace uavdeploy
