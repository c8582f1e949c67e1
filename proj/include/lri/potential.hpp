#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace lri {

/// Thrown when a nonlinearity is evaluated outside its validity interval
/// (for Flory-Huggins this signals a maximum-bound violation or bad input;
/// evaluations are never silently clamped).
class PotentialDomainError : public std::domain_error {
 public:
  PotentialDomainError(const std::string& what, double value)
      : std::domain_error(what), value_(value) {}
  double value() const { return value_; }

 private:
  double value_ = 0.0;
};

/// Reaction term f with derivatives and antiderivative F (F' = -f), the
/// bound beta with f(beta) <= 0 <= f(-beta), and the open interval on which
/// f is defined.
struct Potential {
  std::string name;
  double beta = 0.0;
  double valid_lo = 0.0;  // open interval (valid_lo, valid_hi)
  double valid_hi = 0.0;
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> d2f;
  std::function<double(double)> F;
};

/// f(u) = u - u^3, F(u) = (u^2-1)^2/4, beta = 1, valid on all reals.
Potential double_well();

/// f(u) = (theta/2) ln((1-u)/(1+u)) + theta_c u on (-1,1), 0 < theta < theta_c.
/// beta is the positive root of f, located by bisection to 1e-12.
Potential flory_huggins(double theta, double theta_c);

/// Stabilization and error constants.
struct StabilityBounds {
  double beta = 0.0;
  double omega0 = 0.0;          // -1 / min f' on [-beta, beta]
  double omega1 = 0.0;          // -min f''*f on [-beta, beta]
  double delta = 0.0;           // (-1+sqrt(1+7 w0^2 w1))/(2 w0^2 w1), NaN if w1 <= 0
  double delta0 = 0.0;          // min(1, delta) if w1 > 0 else 1
  bool endpoint_roots = false;  // f(-beta) = f(beta) = 0: enlarged LRI2 ceiling
  double dt_max_first = 0.0;            // omega0
  double dt_max_second = 0.0;           // active ceiling (enlarged when available)
  double dt_max_second_generic = 0.0;   // delta0 * omega0
  double dt_max_second_enlarged = 0.0;  // delta * omega0, NaN when inactive
  double F0 = 0.0;  // max |f|    on [-beta, beta]
  double F1 = 0.0;  // max |f'|
  double F2 = 0.0;  // max |f''|
  double F3 = 0.0;  // max |(f'f)'|
  double F1_tilde = 0.0;  // max |f'|  on the enlarged interval
  double F2_tilde = 0.0;  // max |f''| on the enlarged interval
  double F4 = 0.0;        // F1 + delta0*omega0*F3/2
  double enlarged_radius = 0.0;  // beta + delta0*omega0*F0, clipped to validity
};

/// Extrema over [-beta, beta] by dense sampling (1e5 points) plus ternary
/// refinement around the best sample. The enlarged-interval constants clip
/// the radius to the validity interval (minus a guard band) when the
/// potential is not defined that far out.
StabilityBounds compute_bounds(const Potential& pot);

/// x + omega f(x); bounded by beta for |x| <= beta and 0 < omega <= omega0.
/// Out-of-range omega or x are rejected.
double stabilized_map(const Potential& pot, const StabilityBounds& bounds,
                      double omega, double x);

}  // namespace lri
