#pragma once

#include <stdexcept>
#include <string>

namespace reso {

struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Controllability matrix lost rank.
struct SingularError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Some observer gain came out non-positive.
struct TuningInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IdentityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WindowTooShort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DivergenceError : std::runtime_error {
  double time;
  std::string last_state;
  DivergenceError(double t, std::string state)
      : std::runtime_error("state diverged at t=" + std::to_string(t) + ": " + state),
        time(t), last_state(std::move(state)) {}
};

}  // namespace reso
