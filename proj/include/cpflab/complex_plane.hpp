#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace cpflab {

using Complex = std::complex<double>;

/// Orientation of the complex pairing z = x1 + i*beta*x2.
enum class Chirality : int { Plus = +1, Minus = -1 };

Chirality chirality_from_int(int beta);
inline int to_int(Chirality c) { return static_cast<int>(c); }

/// A point of the real plane together with a chirality, exposing the paired
/// complex coordinate z = x1 + i*beta*x2 and its conjugate.
struct ChiralCoordinate {
  double x1 = 0.0;
  double x2 = 0.0;
  Chirality beta = Chirality::Plus;

  Complex z() const { return {x1, to_int(beta) * x2}; }
  Complex z_conj() const { return std::conj(z()); }
};

Complex to_complex(double x1, double x2, Chirality beta);

/// Recovers (x1, x2) from the pair (z, z_conj). The two inputs are redundant;
/// they must agree as conjugates to within `tol` or this throws.
ChiralCoordinate from_complex(Complex z, Complex z_conj, Chirality beta,
                              double tol = 1e-9);

/// Axis-aligned rectangular domain of validity in the (x1, x2) plane.
struct Window {
  double x1_min = -10.0, x1_max = 10.0;
  double x2_min = -10.0, x2_max = 10.0;

  bool contains(double x1, double x2) const {
    return x1 >= x1_min && x1 <= x1_max && x2 >= x2_min && x2 <= x2_max;
  }
  /// True when the ball of radius `margin` around (x1, x2) fits inside.
  bool contains_with_margin(double x1, double x2, double margin) const {
    return x1 - margin >= x1_min && x1 + margin <= x1_max &&
           x2 - margin >= x2_min && x2 + margin <= x2_max;
  }
};

/// Complex-valued function of two real variables, restricted to a window.
/// Evaluation outside the window throws std::domain_error.
class ScalarField2D {
 public:
  using Evaluator = std::function<Complex(double, double)>;

  ScalarField2D(Evaluator f, Window w, bool analytic_expected = false);

  Complex operator()(double x1, double x2) const;
  const Window& window() const { return window_; }
  /// Declared smoothness hint; carried for reporting, never enforced.
  bool analytic_expected() const { return analytic_expected_; }

 private:
  Evaluator f_;
  Window window_;
  bool analytic_expected_ = false;
};

/// Which of the paired variables a derivative acts on.
enum class WirtingerVar { Z, ZConj };

/// Central-difference Wirtinger derivative of f at (x1, x2):
///   d/dz      = (d/dx1 - i*beta * d/dx2) / 2
///   d/dz_conj = (d/dx1 + i*beta * d/dx2) / 2
/// The 4-point stencil must fit inside f's window.
Complex wirtinger_derivative(const ScalarField2D& f, double x1, double x2,
                             Chirality beta, WirtingerVar var,
                             double step = 1e-4);

/// |df/dz_conj| at a point; vanishes iff the Cauchy-Riemann equations hold
/// there in the chosen chirality.
double cr_residual(const ScalarField2D& f, double x1, double x2,
                   Chirality beta, double step = 1e-4);

/// Difference quotients of f along the given unit directions,
///   q_d = (f(x + h*d) - f(x)) / (h * (d1 + i*beta*d2)),
/// returned with the maximum pairwise deviation. For a function holomorphic
/// in z the quotients agree in the h -> 0 limit; for f = z_conj two
/// orthogonal directions already differ by 2.
struct DirectionProbe {
  std::vector<Complex> quotients;
  double max_pairwise_deviation = 0.0;
};

DirectionProbe direction_independence(
    const ScalarField2D& f, double x1, double x2, Chirality beta,
    const std::vector<std::pair<double, double>>& directions,
    double step = 1e-6);

}  // namespace cpflab
