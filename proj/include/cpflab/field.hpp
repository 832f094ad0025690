#pragma once

#include <array>
#include <optional>
#include <vector>

#include "cpflab/fock.hpp"

namespace cpflab {

/// Single plane-wave mode along x3. Internal units have c = 1, so
/// construction demands omega == |k| to within 1e-12; off-shell behaviour is
/// probed through dalembert_phase_residual, which takes raw numbers.
struct ModeSpec {
  ModeSpec(double k, double omega, Complex amplitude, Chirality beta);

  double k;
  double omega;
  Complex amplitude;
  Chirality beta;
};

/// e^{i(k x3 - omega t)}, optionally carrying the 1/sqrt(2 omega) measure.
Complex plane_wave(const ModeSpec& mode, double x3, double t,
                   bool include_measure = false);

/// |FD (d2/dx3^2 - d2/dt^2)| of amplitude * e^{i(k x3 - omega t)}; approaches
/// |k^2 - omega^2| * |amplitude| for off-shell (k, omega) pairs.
double dalembert_phase_residual(double k, double omega, Complex amplitude,
                                double x3, double t, double step);

/// Unit 4-vector of components indexed mu = 0..3 as (t, x1, x2, x3).
class PolarizationVector {
 public:
  PolarizationVector(Complex t, Complex x1, Complex x2, Complex x3);

  Complex t() const { return c_[0]; }
  Complex x1() const { return c_[1]; }
  Complex x2() const { return c_[2]; }
  Complex x3() const { return c_[3]; }
  const std::array<Complex, 4>& components() const { return c_; }

  /// True when t = x3 = 0 and x2 = i * beta * x1 within tol.
  bool is_circular(Chirality beta, double tol = 1e-12) const;

 private:
  std::array<Complex, 4> c_;
};

/// Unique unit transverse vector (up to phase) annihilating the divergence
/// symbol of the constrained product ansatz; computed as the SVD nullspace of
/// that 1x2 symbol with the phase fixed so the x1 component is real positive.
PolarizationVector solve_gauge_polarization(Chirality beta);

enum class FreqSign : int { Positive = +1, Negative = -1 };

/// One constrained summand: modes x state x polarization at a fixed
/// (chirality, frequency-sign) slot. Scalar prefactors (occupancy amplitudes)
/// ride on the mode amplitudes.
struct FieldComponent {
  std::vector<ModeSpec> modes;
  SymmetricState state;
  PolarizationVector polarization;
  FreqSign freq = FreqSign::Positive;

  Chirality beta() const { return state.beta(); }
  /// Component mu at a spacetime point with transverse regularization eps.
  Complex evaluate(int mu, double x1, double x2, double x3, double t,
                   double epsilon) const;
};

FieldComponent make_component(const std::vector<ModeSpec>& modes,
                              const SymmetricState& state,
                              const PolarizationVector& polarization,
                              FreqSign freq);

/// FD d'Alembertian in (x3, t) of the component at fixed transverse point.
double wave_equation_residual(const FieldComponent& comp, int mu, double x1,
                              double x2, double x3, double t, double step,
                              double epsilon);

/// Magnitude of the chirality-beta_op conjugate-derivative applied to the
/// component's transverse factor, realized on the constraint line. Matched
/// chirality leaves only the epsilon^2 cancellation defect; mismatched
/// chirality leaves the O(1) profile-derivative channel; a constant
/// transverse profile gives exactly 0.
double cr_constraint_residual(const FieldComponent& comp, Chirality op_beta,
                              double x3, double t,
                              const DeltaRegularization& reg);

/// Constraint-line channels of the divergence of the component:
///   z_channel      carries the profile-derivative integral that survives for
///                  any non-circular transverse polarization,
///   cr_deviation   the epsilon^2 cancellation defect of the conjugate pair,
///   state_sift     the plain profile sift multiplying the longitudinal and
///                  time components.
struct GaugeChannels {
  Complex z_channel;
  double cr_deviation;
  Complex state_sift;
};

GaugeChannels gauge_channels(const SymmetricState& state,
                             const DeltaRegularization& reg);

/// Weighted channel sum: |c_z| |Z| + |c_zbar| D + |k eps3 + omega eps0| |S|,
/// with c_z = eps1 + i beta eps2 and c_zbar = eps1 - i beta eps2. Vanishes
/// (to the epsilon^2 defect) exactly for the gauge-solved circular vectors.
/// `step` drives the finite-difference phase derivatives in the longitudinal
/// and time terms.
double gauge_residual(const FieldComponent& comp, double x3, double t,
                      const DeltaRegularization& reg, double step);

struct Window4D {
  Window transverse{};
  double x3_min = -10.0, x3_max = 10.0;
  double t_min = -10.0, t_max = 10.0;

  bool contains(double x1, double x2, double x3, double t) const {
    return transverse.contains(x1, x2) && x3 >= x3_min && x3 <= x3_max &&
           t >= t_min && t <= t_max;
  }
};

/// The four-slot decomposition: both chiralities times both frequency signs.
/// The total field is their pointwise sum.
class ConstrainedField {
 public:
  ConstrainedField(FieldComponent plus_pos, FieldComponent plus_neg,
                   FieldComponent minus_pos, FieldComponent minus_neg,
                   Window4D window = {});

  const FieldComponent& component(Chirality beta, FreqSign freq) const;
  const Window4D& window() const { return window_; }

  Complex evaluate_total(int mu, double x1, double x2, double x3, double t,
                         double epsilon) const;

 private:
  std::array<FieldComponent, 4> slots_;
  Window4D window_;
};

/// Mode sum of c(x) eps_mu a+ + conj(c(x) eps_mu) a over the truncated Fock
/// basis, with c = amplitude e^{i(k x3 - omega t)} / sqrt(2 omega).
class FieldOperator {
 public:
  FieldOperator(std::vector<ModeSpec> modes, LadderAlgebra algebra);

  const std::vector<ModeSpec>& modes() const { return modes_; }
  const LadderAlgebra& algebra() const { return algebra_; }
  const PolarizationVector& polarization(std::size_t mode_index) const;

  Eigen::MatrixXcd component_matrix(int mu, double x3, double t) const;
  double hermiticity_defect(double x3, double t) const;

  /// Nonzero coefficients of (operator column) applied to occupancy n:
  /// raise_coeff on n+1, lower_coeff on n-1 (0 when n == 0). Throws
  /// "truncation exceeded" when n+1 would leave the basis.
  struct Action {
    Complex raise_coeff;
    Complex lower_coeff;
    int n;
  };
  Action apply(int mu, double x3, double t, int n) const;

 private:
  std::vector<ModeSpec> modes_;
  LadderAlgebra algebra_;
  std::vector<PolarizationVector> polarizations_;
};

FieldOperator assemble_field_operator(const std::vector<ModeSpec>& modes,
                                      LadderAlgebra algebra);

/// Matrix-element route for a single mode acting on occupancy n: the operator
/// column spatialized with the regularized profiles of the n+1 and n-1
/// states.
Complex operator_route_value(const FieldOperator& op, int mu,
                             const SymmetricState& state, double x1, double x2,
                             double x3, double t, double epsilon);

/// Direct assembly of the same quantity from closed-form occupancy
/// amplitudes sqrt(n+1), sqrt(n) and the mode's phase and measure factors.
Complex classical_route_value(const ModeSpec& mode,
                              const PolarizationVector& pol,
                              const SymmetricState& state, int mu, double x1,
                              double x2, double x3, double t, double epsilon);

}  // namespace cpflab
