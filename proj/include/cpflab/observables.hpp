#pragma once

#include <vector>

#include "cpflab/field.hpp"

namespace cpflab {

enum class ObservableKind { MomentumX3, Energy, AngularMomentumX3 };

/// Observable selector. Momentum and energy act through the occupancy-
/// weighted operator (number operator times the phase derivative); angular
/// momentum acts directly on the transverse factor and is never occupancy
/// weighted. The constructor rejects the other pairings.
struct ObservableSpec {
  ObservableSpec(ObservableKind kind, bool occupancy_modified);

  static ObservableSpec momentum_x3() { return {ObservableKind::MomentumX3, true}; }
  static ObservableSpec energy() { return {ObservableKind::Energy, true}; }
  static ObservableSpec angular_momentum_x3() {
    return {ObservableKind::AngularMomentumX3, false};
  }

  ObservableKind kind;
  bool occupancy_modified;
};

struct ExpectationResult {
  double value;
  double quadrature_error_estimate;
  double epsilon_used;
  int n;
  Chirality beta;
  double kappa;
};

const char* observable_name(ObservableKind kind);

/// Algebraic evaluation: exact Fock contraction of the occupancy weight times
/// the analytic per-photon eigenvalue (k, omega, or the helicity weight of
/// the operator's matching polarization, which is exactly +-1 for a vector
/// that passes the circularity test). Values are in units of hbar.
double expectation_exact(const ObservableSpec& spec,
                         const SymmetricState& state, const ModeSpec& mode,
                         const FieldOperator& op);

/// Quadrature evaluation: Fock contraction of the occupancy weight, central-
/// difference realization of the phase derivative, and the sandwich integral
/// of the regularized transverse factor under the scaled measure (iterated
/// constraint-line quadrature). The error estimate combines an epsilon ->
/// epsilon/2 difference with the finite-difference phase bias and bounds the
/// true error with margin. Throws logic_error when the raw complex result
/// has an imaginary part above 1e-10 of its magnitude.
ExpectationResult expectation(const ObservableSpec& spec,
                              const SymmetricState& state,
                              const ModeSpec& mode, const FieldOperator& op,
                              const DeltaRegularization& reg, double step);

/// Quadrature expectation across widths; the state template's sources are
/// kept and only kappa is swapped. The curve passes through the exact value
/// at kappa = 1 for the angular momentum observable.
std::vector<ExpectationResult> kappa_sweep(const ObservableSpec& spec,
                                           const SymmetricState& state,
                                           const ModeSpec& mode,
                                           const FieldOperator& op,
                                           const DeltaRegularization& reg,
                                           double step,
                                           const std::vector<double>& kappas);

/// Pointwise state value with the constraint factor regularized as a
/// complex-argument Gaussian in the conjugate scaled coordinate (one factor
/// per source). Well behaved near the constraint line; grows off it, so use
/// only within finite-difference range of the line.
Complex complex_regularized_state_value(const SymmetricState& state, double x1,
                                        double x2, double epsilon);

/// Pointwise integrand conj(Phi) L3 Phi about the state's source point, with
/// both Wirtinger derivatives realized by central differences of the
/// complex-regularized state. Mirrored states (beta flip plus x2 flip of both
/// the point and the sources) give the exact sign flip, stencil included.
Complex angular_momentum_density(const SymmetricState& state,
                                 const ChiralCoordinate& at,
                                 const DeltaRegularization& reg, double step);

/// Iterated two-contour quadrature of the density's continuation off the
/// constraint diagonal, with the conjugate-delta derivative realized by a
/// central difference of the delta factor itself. Converges to the same
/// value as expectation(angular momentum) up to O(eps^2) + O(step^2 / eps^2)
/// quadrature differences.
Complex integrate_angular_momentum_density(const SymmetricState& state,
                                           const DeltaRegularization& reg,
                                           double step);

/// Origin-pivot density for a bare radial profile with no constraint factor.
/// Antisymmetric under (x1, x2) swap at the stencil level.
Complex bare_profile_angular_density(const GaussianProfile& profile, double x1,
                                     double x2, double step);

/// Gauss-Legendre grid sum of the bare-profile density over the symmetric
/// square [-extent, extent]^2. Swap-paired traversal makes the rotational
/// cancellation exact in floating point.
Complex integrate_bare_profile_density(const GaussianProfile& profile,
                                       double extent, int grid, double step);

}  // namespace cpflab
