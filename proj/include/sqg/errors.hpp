#pragma once

#include <stdexcept>
#include <string>

namespace sqg {

/// Invalid user-supplied parameters (grid size, alpha, config keys, IC names).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A field violates a structural invariant, e.g. broken conjugate symmetry.
class DataIntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Too few completed alpha levels to fit an extrapolation.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values appeared during an evaluation. This is how a discrete
/// run reports that it blew up.
class NumericalOverflowError : public std::runtime_error {
 public:
  NumericalOverflowError(const std::string& what, double t = 0.0,
                         int stage = -1, double last_good_t = 0.0)
      : std::runtime_error(what), t_(t), stage_(stage),
        last_good_t_(last_good_t) {}

  double t() const noexcept { return t_; }
  /// RK stage index (1-4), or -1 when raised outside a stepper.
  int stage() const noexcept { return stage_; }
  double last_good_t() const noexcept { return last_good_t_; }

 private:
  double t_;
  int stage_;
  double last_good_t_;
};

}  // namespace sqg
