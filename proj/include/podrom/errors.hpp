#pragma once

#include <stdexcept>
#include <string>

namespace podrom {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridError : Error { using Error::Error; };
struct TimestepError : Error { using Error::Error; };
struct ShapeError : Error { using Error::Error; };
struct ContractError : Error { using Error::Error; };
struct FactorizationError : Error { using Error::Error; };
struct SpectrumError : Error { using Error::Error; };
struct TruncationError : Error { using Error::Error; };
struct NormalizationError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

/// A non-finite value appeared during time stepping. Carries the first bad
/// step index and the simulated time at which it was produced.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, long step, double time)
      : Error(what + " (step " + std::to_string(step) + ", t=" +
              std::to_string(time) + ")"),
        step_(step),
        time_(time) {}

  long step() const noexcept { return step_; }
  double time() const noexcept { return time_; }

 private:
  long step_;
  double time_;
};

}  // namespace podrom
