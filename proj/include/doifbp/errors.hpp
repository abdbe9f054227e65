#pragma once

#include <stdexcept>
#include <string>

namespace doifbp {

/// A numerical failure during a simulation: CFL violation, loss of
/// positivity, non-convergent linear solve.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the coupled integrator; carries the failing substep and time.
class StepError : public NumericalError {
 public:
  StepError(std::string substep, double time, const std::string& what)
      : NumericalError("substep '" + substep + "' failed at t=" + std::to_string(time) + ": " + what),
        substep_(std::move(substep)),
        time_(time) {}

  const std::string& substep() const noexcept { return substep_; }
  double time() const noexcept { return time_; }

 private:
  std::string substep_;
  double time_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& what) : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace doifbp
