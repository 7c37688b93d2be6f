#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace impwf::numerics {

/// Closed interval known to contain a sign change of the target function.
struct Bracket {
  double lo;
  double hi;
};

class RootFindingError : public std::runtime_error {
 public:
  RootFindingError(const std::string& what, std::size_t iterations)
      : std::runtime_error(what), iterations_(iterations) {}
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t iterations_;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate, double error)
      : std::runtime_error(what), estimate_(estimate), error_(error) {}
  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_; }

 private:
  double estimate_;
  double error_;
};

using ScalarFn = std::function<double(double)>;

inline constexpr double kDefaultRootTol = 1e-12;
inline constexpr std::size_t kMaxRootIterations = 500;

/// Exponential integral E1(x) = int_x^inf e^-t / t dt, x > 0.
///
/// Power series below 1, modified-Lentz continued fraction above. Relative
/// error is below 1e-10 on the whole positive axis (tighter in practice).
/// Throws std::domain_error for x <= 0 or NaN.
double exp_integral_e1(double x);

/// Root of a continuous monotone function on a bracket.
///
/// Safeguarded secant: a secant step through the current bracket ends is
/// taken when it lands strictly inside and the previous step at least halved
/// the bracket; otherwise the midpoint is used. Returns a point within `tol`
/// of the root. Throws RootFindingError when f does not change sign or the
/// iteration cap is reached.
double solve_monotone_root(const ScalarFn& f, Bracket bracket,
                           double tol = kDefaultRootTol);

/// Grows a bracket for a function that is positive near 0+ and negative for
/// large x: starts at [1e-8, 1], doubles hi up to 1e6 and, if needed, shrinks lo.
Bracket expand_decreasing_bracket(const ScalarFn& f);

/// Adaptive Gauss-Kronrod (7/15) integral of f over [lower, inf).
///
/// The half line is mapped onto (0, 1] with t = lower + (1 - s) / s. Intended
/// as an independent oracle; the closed forms never call it.
double integrate_semi_infinite(const ScalarFn& f, double lower,
                               double rel_tol = 1e-10);

}  // namespace impwf::numerics
