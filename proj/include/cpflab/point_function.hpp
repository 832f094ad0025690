#pragma once

#include <functional>

#include "cpflab/complex_plane.hpp"

namespace cpflab {

/// Source location, stored as the plane point (x1, x2). The paired complex
/// constant is xi() = x1 + i*beta*x2; a source at the origin is rejected
/// because scaled coordinates divide by it.
struct PointSource {
  PointSource(double x1, double x2, Chirality beta);

  double x1;
  double x2;
  Chirality beta;

  Complex xi() const { return to_complex(x1, x2, beta); }
  double magnitude() const { return std::abs(xi()); }
};

bool operator==(const PointSource& a, const PointSource& b);
/// Lexicographic on (x1, x2, beta); used to canonicalize source lists.
bool operator<(const PointSource& a, const PointSource& b);

/// psi(s) = exp(-kappa^2 (s^2 - 1) / 2), pinned so psi(1) == 1.0 exactly.
struct GaussianProfile {
  explicit GaussianProfile(double kappa = 1.0);

  double kappa;

  double value(double s) const;
  double derivative(double s) const;         // -kappa^2 s psi
  double second_derivative(double s) const;  // (kappa^4 s^2 - kappa^2) psi

  /// psi^n collapses to another member of the family with width sqrt(n)*kappa.
  GaussianProfile powered(int n) const;
};

/// Radial profile presented through its first two derivatives, for checks
/// that need to swap in non-Gaussian (e.g. non-differentiable) shapes.
struct RadialProfile {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::function<double(double)> second_derivative;
};

RadialProfile as_radial(const GaussianProfile& g);

class ComplexPointFunction {
 public:
  ComplexPointFunction(PointSource source, GaussianProfile profile);
  /// Rejects construction when `beta` disagrees with the source's chirality.
  ComplexPointFunction(PointSource source, GaussianProfile profile,
                       Chirality beta);

  const PointSource& source() const { return source_; }
  const GaussianProfile& profile() const { return profile_; }
  Chirality beta() const { return source_.beta; }

  /// Scaled coordinate z / xi and its modulus s = |z / xi|.
  Complex zeta(double x1, double x2) const;
  double radial(double x1, double x2) const;
  /// Profile factor psi(s) at a plane point; exactly 1 on the pinned circle
  /// point z = xi for every kappa.
  double profile_value(double x1, double x2) const;

 private:
  PointSource source_;
  GaussianProfile profile_;
};

/// Nascent delta width, contour direction and quadrature grid for all
/// constraint-line integrals.
struct DeltaRegularization {
  explicit DeltaRegularization(double epsilon, double alpha1 = 1.0,
                               double alpha2 = 0.0, int n_quad = 201,
                               double tau0 = 0.0);  // tau0 == 0 -> 8*epsilon

  double epsilon;
  double alpha1;
  double alpha2;
  int n_quad;
  double tau0;

  DeltaRegularization with_epsilon(double eps) const;
};

/// Membership predicate for the constraint line z_conj == xi_conj.
struct ConstraintDomainSpec {
  Chirality beta;
  PointSource source;

  bool contains(Complex z_conj, double tol = 1e-9) const;
};

double nascent_delta(double tau, double epsilon);
double nascent_delta_d1(double tau, double epsilon);
double nascent_delta_d2(double tau, double epsilon);

/// Integral of g(tau) * delta_eps^(order)(tau) over [-tau0, tau0], order in
/// {0, 1, 2}. Nodes are summed as mirrored pairs, so an integrand that is odd
/// in floating point cancels to exactly 0.0.
Complex delta_moment(const std::function<Complex(double)>& g,
                     const DeltaRegularization& reg, int order = 0);

/// Line integral of f against the nascent delta along the contour
/// (x1, x2)(tau) = (source.x1 + alpha1 tau, source.x2 + beta alpha2 tau),
/// which traces z(tau) = xi + (alpha1 + i alpha2) tau. Converges to the value
/// of f at the source as epsilon -> 0.
Complex sift(const ScalarField2D& f, const PointSource& source,
             const DeltaRegularization& reg);

/// The two line integrals that realize the conjugate-derivative of a pinned
/// profile: term_derivative carries the profile derivative against the delta,
/// term_delta carries the profile against the delta derivative. In the limit
/// they sit at +limit and -limit and their sum cancels.
struct CrCheck {
  Complex term_derivative;
  Complex term_delta;
  Complex limit;

  double cancellation() const;        // |term_derivative + term_delta|
  double deviation() const;           // max distance from the +-limit pair
  double magnitude_mismatch() const;  // relative | |t1| - |t2| |
};

CrCheck profile_cr_check(const RadialProfile& p, double s0,
                         const DeltaRegularization& reg);
CrCheck cpf_cr_check(const ComplexPointFunction& phi,
                     const DeltaRegularization& reg);

/// Finite-width defect of the cancellation, measured against the closed-form
/// limit; decays like epsilon^2 for smooth profiles and stays O(1) for a
/// kinked one. The raw signed sum is available as cpf_cr_check().cancellation()
/// and is quadrature-noise small at any epsilon.
double cpf_cr_residual(const ComplexPointFunction& phi,
                       const DeltaRegularization& reg);

/// Squared-profile constraint integral evaluated as iterated single siftings,
/// once per delta factor. `scaled` uses the source-scaled measure (contract:
/// -> 1); `raw` is the unscaled diagnostic (-> |xi|^2).
struct NormalizationResult {
  double scaled;
  double raw;
};

NormalizationResult normalization_check(const ComplexPointFunction& phi,
                                        const DeltaRegularization& reg);

/// Second-order analogue of CrCheck: the three line integrals carrying
/// psi'', psi' and psi against delta, delta' and delta''. Limits are
/// (L, -L, L) with L = psi''(s0) and the weighted sum t1 + 2 t2 + t3 cancels.
struct HarmonicityCheck {
  Complex term_second;
  Complex term_cross;
  Complex term_delta2;
  Complex limit;

  double cancellation() const;  // |t1 + 2 t2 + t3|
  double deviation() const;     // max distance from the three limits
};

HarmonicityCheck profile_harmonicity_check(const RadialProfile& p, double s0,
                                           const DeltaRegularization& reg);

/// 2-D Laplacian of a bare radial profile, psi'' + psi'/s. Nonzero for the
/// Gaussian family; the no-constraint negative control.
double radial_laplacian(const RadialProfile& p, double s);

/// Constraint smeared into the plane with a real bump:
/// psi(|zeta|) * exp(-|zeta - 1|^2 / eps^2) / (eps sqrt(pi)).
Complex regularized_realization(const ComplexPointFunction& phi, double x1,
                                double x2, double epsilon);

/// |5-point finite-difference Laplacian| of the bump-regularized realization.
/// Exponentially small away from the constraint circle point.
double regularized_laplacian_residual(const ComplexPointFunction& phi,
                                      double x1, double x2, double epsilon,
                                      double step);

}  // namespace cpflab
