#pragma once

#include <functional>
#include <optional>
#include <string_view>

#include "lri/expops.hpp"
#include "lri/grid.hpp"
#include "lri/potential.hpp"

namespace lri {

enum class SchemeKind { Lri1a, Lri1b, Lri2, Etd1, Etdrk2 };

int scheme_order(SchemeKind kind);
std::string_view scheme_name(SchemeKind kind);
std::optional<SchemeKind> parse_scheme(std::string_view name);
bool scheme_uses_phi(SchemeKind kind);

/// Maximum-bound-preserving time-step ceiling for a scheme. LRI1a/LRI1b use
/// the first-order bound, LRI2 the second-order one; the ETD baselines carry
/// the first-order ceiling for reporting only.
double certified_dt_ceiling(SchemeKind kind, const StabilityBounds& bounds);

/// One-step map for a fixed (scheme, dt): holds the potential and one
/// Propagator built for dt (rebuilding per step is forbidden by contract).
/// Immutable and shareable; step() is a pure map old field -> new field.
class Stepper {
 public:
  Stepper(const GridSpec& grid,
          std::vector<std::shared_ptr<const LaplacianAxis>> axes, double eps,
          double dt, SchemeKind kind, Potential potential,
          TransformPath path = TransformPath::Auto);

  Field step(const Field& u) const;

  SchemeKind kind() const { return kind_; }
  double dt() const { return dt_; }
  const Potential& potential() const { return potential_; }
  const Propagator& propagator() const { return prop_; }
  const GridSpec& grid() const { return prop_.grid(); }

 private:
  Propagator prop_;
  Potential potential_;
  SchemeKind kind_;
  double dt_;
};

// The five one-step maps. All evaluate f pointwise; exponential actions go
// through the stepper's cached propagator.
Field step_lri1a(const Stepper& s, const Field& u);   // e^{dtA}(u + dt f(u))
Field step_lri1b(const Stepper& s, const Field& u);   // e^{dtA}u + dt f(e^{dtA}u)
Field step_lri2(const Stepper& s, const Field& u);    // trapezoid + Jacobian term
Field step_etd1(const Stepper& s, const Field& u);    // e^{dtA}u + dt phi1(dtA) f(u)
Field step_etdrk2(const Stepper& s, const Field& u);  // predictor/phi2-corrector

struct IntegrationResult {
  Field final;                          // last finite iterate
  long steps_completed = 0;
  std::optional<long> divergence_step;  // step that produced a non-finite field
                                        // or breached the potential domain
};

using StepMonitor = std::function<void(long step, const Field& u)>;

/// Drives `steps` applications of the one-step map. The monitor is invoked
/// after each completed step; attaching one does not change the arithmetic.
/// A non-finite iterate or a potential domain breach stops the integration
/// and records the failing step instead of raising.
IntegrationResult integrate(const Stepper& stepper, const Field& u0, long steps,
                            const StepMonitor& monitor = {});

}  // namespace lri
