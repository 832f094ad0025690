#include "cpflab/quadrature.hpp"

#include <numbers>

namespace cpflab {

namespace {

// Legendre P_n(t) and P_n'(t) via the three-term recurrence.
void legendre_and_derivative(int n, double t, double& p, double& dp) {
  double p0 = 1.0, p1 = t;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (t * p1 - p0) / (t * t - 1.0);
}

}  // namespace

GaussLegendre::GaussLegendre(int n) {
  if (n < 1) throw std::invalid_argument("quadrature: order must be >= 1");
  x_.assign(n, 0.0);
  w_.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi's estimate as the Newton seed; converges in a handful of steps.
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre_and_derivative(n, t, p, dp);
      const double step = p / dp;
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    legendre_and_derivative(n, t, p, dp);
    const double w = 2.0 / ((1.0 - t * t) * dp * dp);
    // Mirror the converged root so the rule is symmetric by construction.
    x_[i] = -t;
    w_[i] = w;
    x_[n - 1 - i] = t;
    w_[n - 1 - i] = w;
  }
  if (n % 2 == 1) x_[n / 2] = 0.0;
}

}  // namespace cpflab
