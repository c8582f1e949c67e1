#pragma once

#include <memory>

#include <Eigen/Dense>

#include "lri/grid.hpp"

namespace lri {

/// Stable phi-function evaluation: phi1(z) = (e^z-1)/z, phi2(z) = (e^z-1-z)/z^2,
/// with the z -> 0 limits (1 and 1/2). phi1 uses expm1 everywhere; phi2 switches
/// to a degree-8 Taylor polynomial below |z| = 1e-2.
double phi_scalar(int k, double z);

/// Scaling-and-squaring Pade matrix exponential, exp(t*m). Sizes above 1024
/// are rejected; intended for oracles and the operator self-check.
Eigen::MatrixXd dense_expm(const Eigen::MatrixXd& m, double t = 1.0);

/// phi_k(t*m) for k in {1,2} via the augmented-block exponential.
Eigen::MatrixXd dense_phi(const Eigen::MatrixXd& m, double t, int k);

enum class TransformPath { Auto, Matrix, Fft };

/// Cached action of exp(tA) and phi_k(tA), A = eps^2 * D_h, for one fixed
/// time increment. Applications run as per-axis eigen-transforms: forward
/// V^-1 along each axis, pointwise multiply on the joint eigenvalue grid,
/// inverse V along each axis. The Fft path evaluates the same transforms
/// with DCT-I (Neumann) or DFT (periodic) plans and must agree with the
/// Matrix path to 1e-12; Auto picks Fft from 64 points per axis.
///
/// Immutable and cheap to copy; applications are pure and thread-safe.
class Propagator {
 public:
  Propagator(const GridSpec& grid,
             std::vector<std::shared_ptr<const LaplacianAxis>> axes, double eps,
             double t, TransformPath path = TransformPath::Auto,
             bool with_phi = false);

  const GridSpec& grid() const;
  double eps() const;
  double time() const;
  TransformPath resolved_path() const;

  /// e^{tA} u. Result sup-norm does not exceed the input sup-norm beyond
  /// rounding (discrete contraction).
  Field apply_exp(const Field& u) const;

  /// phi_k(tA) u, k in {1,2}. Requires construction with with_phi = true.
  Field apply_phi(int k, const Field& u) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

}  // namespace lri
