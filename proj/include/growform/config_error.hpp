#pragma once

#include <stdexcept>
#include <string>

namespace growform {

/// Invalid configuration; `path()` names the offending field, e.g.
/// "params.r_r" or "genome.rho".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string &message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string &path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace growform
