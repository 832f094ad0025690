#include "cpflab/complex_plane.hpp"

#include <cmath>
#include <utility>

namespace cpflab {

Chirality chirality_from_int(int beta) {
  if (beta == 1) return Chirality::Plus;
  if (beta == -1) return Chirality::Minus;
  throw std::invalid_argument("chirality must be +1 or -1");
}

Complex to_complex(double x1, double x2, Chirality beta) {
  return ChiralCoordinate{x1, x2, beta}.z();
}

ChiralCoordinate from_complex(Complex z, Complex z_conj, Chirality beta,
                              double tol) {
  if (std::abs(z_conj - std::conj(z)) > tol)
    throw std::invalid_argument(
        "from_complex: inputs are not conjugate to within tolerance");
  const Complex zc = 0.5 * (z + std::conj(z_conj));
  return {zc.real(), to_int(beta) * zc.imag(), beta};
}

ScalarField2D::ScalarField2D(Evaluator f, Window w, bool analytic_expected)
    : f_(std::move(f)), window_(w), analytic_expected_(analytic_expected) {
  if (!f_) throw std::invalid_argument("ScalarField2D: empty evaluator");
  if (!(window_.x1_min < window_.x1_max) || !(window_.x2_min < window_.x2_max))
    throw std::invalid_argument("ScalarField2D: degenerate window");
}

Complex ScalarField2D::operator()(double x1, double x2) const {
  if (!window_.contains(x1, x2))
    throw std::domain_error("ScalarField2D: evaluation outside window");
  return f_(x1, x2);
}

Complex wirtinger_derivative(const ScalarField2D& f, double x1, double x2,
                             Chirality beta, WirtingerVar var, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("wirtinger: step must be > 0");
  if (!f.window().contains_with_margin(x1, x2, step))
    throw std::domain_error("wirtinger: stencil does not fit in window");
  const Complex d1 = (f(x1 + step, x2) - f(x1 - step, x2)) / (2.0 * step);
  const Complex d2 = (f(x1, x2 + step) - f(x1, x2 - step)) / (2.0 * step);
  const Complex ib{0.0, static_cast<double>(to_int(beta))};
  return var == WirtingerVar::Z ? 0.5 * (d1 - ib * d2) : 0.5 * (d1 + ib * d2);
}

double cr_residual(const ScalarField2D& f, double x1, double x2,
                   Chirality beta, double step) {
  return std::abs(
      wirtinger_derivative(f, x1, x2, beta, WirtingerVar::ZConj, step));
}

DirectionProbe direction_independence(
    const ScalarField2D& f, double x1, double x2, Chirality beta,
    const std::vector<std::pair<double, double>>& directions, double step) {
  if (directions.size() < 2)
    throw std::invalid_argument("direction_independence: need >= 2 directions");
  if (!(step > 0.0))
    throw std::invalid_argument("direction_independence: step must be > 0");
  DirectionProbe probe;
  probe.quotients.reserve(directions.size());
  const Complex f0 = f(x1, x2);
  for (const auto& [d1, d2] : directions) {
    if (std::abs(std::hypot(d1, d2) - 1.0) > 1e-12)
      throw std::invalid_argument(
          "direction_independence: directions must be unit vectors");
    const Complex dz{d1, to_int(beta) * d2};
    probe.quotients.push_back(
        (f(x1 + step * d1, x2 + step * d2) - f0) / (step * dz));
  }
  for (std::size_t i = 0; i < probe.quotients.size(); ++i)
    for (std::size_t j = i + 1; j < probe.quotients.size(); ++j)
      probe.max_pairwise_deviation =
          std::max(probe.max_pairwise_deviation,
                   std::abs(probe.quotients[i] - probe.quotients[j]));
  return probe;
}

}  // namespace cpflab
