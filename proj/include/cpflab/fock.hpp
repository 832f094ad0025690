#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cpflab/point_function.hpp"

namespace cpflab {

/// Permutation-symmetrized n-fold product of identical point functions,
/// stored combinatorially: occupancy, shared chirality/width, source list and
/// the collapsed prefactor sqrt(n!). Sources are kept sorted so states built
/// from reordered component lists are bit-identical.
class SymmetricState {
 public:
  static SymmetricState vacuum(Chirality beta, double mode_k = 1.0,
                               double kappa = 1.0);
  static SymmetricState identical(int n, const PointSource& source,
                                  double kappa, double mode_k = 1.0);
  static SymmetricState from_sources(std::vector<PointSource> sources,
                                     double kappa, double mode_k = 1.0);

  int n() const { return n_; }
  Chirality beta() const { return beta_; }
  double mode_k() const { return mode_k_; }
  double kappa() const { return kappa_; }
  double norm_coeff() const { return norm_coeff_; }
  const std::vector<PointSource>& sources() const { return sources_; }
  bool identical_sources() const;

  /// The n-fold profile power collapses to width sqrt(n) * kappa. Requires
  /// n >= 1; the vacuum has no profile.
  GaussianProfile combined_profile() const;

  SymmetricState with_occupancy(int m) const;
  SymmetricState with_kappa(double kappa) const;

 private:
  SymmetricState(int n, Chirality beta, double mode_k, double kappa,
                 std::vector<PointSource> sources);

  int n_;
  Chirality beta_;
  double mode_k_;
  double kappa_;
  double norm_coeff_;
  std::vector<PointSource> sources_;
};

struct ScaledState {
  double scale;
  SymmetricState state;
};

/// Builds the symmetrized state from explicit components. All components must
/// share chirality and width. Distinct-source lists are accepted but flagged
/// through identical_sources() == false; the standard construction downstream
/// uses one source per (mode, chirality).
SymmetricState symmetrize(const std::vector<ComplexPointFunction>& components,
                          double mode_k = 1.0);

/// Lowers occupancy with factor sqrt(n); the vacuum maps to scale exactly 0.
ScaledState annihilate(const SymmetricState& state);
/// Raises occupancy with factor sqrt(n + 1).
ScaledState create(const SymmetricState& state);
int number_of(const SymmetricState& state);

/// Truncated ladder matrices on occupancies 0 .. dim-1. The number operator
/// is stored as the exact integer diagonal; the floating product
/// create * annihilate is exposed separately for consistency checks.
class LadderAlgebra {
 public:
  explicit LadderAlgebra(int dim = 16);

  int dim() const { return dim_; }
  const Eigen::MatrixXcd& annihilate_matrix() const { return annihilate_; }
  const Eigen::MatrixXcd& create_matrix() const { return create_; }
  const Eigen::MatrixXcd& number_matrix() const { return number_; }
  Eigen::MatrixXcd number_product() const;  // create * annihilate

  Eigen::VectorXcd basis_state(int n) const;

  /// max |([a, a+] - I)_mn| over m, n < dim-1; the top level is excluded as
  /// the standard truncation artifact.
  double commutator_defect() const;
  /// ([a, a+])(dim-1, dim-1); equals -(dim-1) in exact arithmetic. Reported,
  /// never scored.
  double top_level_artifact() const;
  std::vector<double> number_eigenvalues() const;  // ascending

 private:
  int dim_;
  Eigen::MatrixXcd annihilate_, create_, number_;
};

double commutator_defect(const LadderAlgebra& algebra);

/// Bump-regularized pointwise value of the state: norm_coeff times the
/// profile powers times one smeared constraint factor per source. The vacuum
/// is the constant 1.
Complex regularized_state_value(const SymmetricState& state, double x1,
                                double x2, double epsilon);

/// |5-point finite-difference Laplacian| of the regularized state at a point.
double harmonicity_residual(const SymmetricState& state,
                            const ChiralCoordinate& at,
                            const DeltaRegularization& reg,
                            double step = 1e-4);

/// Constraint-line realization of the Laplacian cancellation for the state's
/// collapsed profile, term by term against the closed-form limits. Decays
/// like epsilon^2; this is the convergence-sweep quantity.
HarmonicityCheck state_harmonicity_check(const SymmetricState& state,
                                         const DeltaRegularization& reg);
double harmonicity_contour_residual(const SymmetricState& state,
                                    const DeltaRegularization& reg);

/// Negative control: finite-difference Laplacian of the bare profile power
/// with the constraint factor replaced by 1. O(1) on the profile circle.
double unconstrained_laplacian_residual(const SymmetricState& state,
                                        double x1, double x2,
                                        double step = 1e-4);

}  // namespace cpflab
