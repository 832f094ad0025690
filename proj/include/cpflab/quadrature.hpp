#pragma once

#include <cmath>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace cpflab {

/// Gauss-Legendre rule on [-1, 1].
///
/// Nodes are found by Newton iteration on the Legendre recurrence and are
/// mirrored about the origin, so the rule is exactly symmetric: odd integrands
/// evaluated through it cancel to 0.0 in floating point.
class GaussLegendre {
 public:
  explicit GaussLegendre(int n);

  int size() const { return static_cast<int>(x_.size()); }
  const std::vector<double>& nodes() const { return x_; }
  const std::vector<double>& weights() const { return w_; }

  /// Integrates f over [a, b]. Works for real- or complex-valued f. Mirror
  /// nodes are summed as pairs, so an integrand odd about the midpoint
  /// cancels to exactly 0.
  template <typename F>
  auto integrate(F&& f, double a, double b) const {
    using R = std::invoke_result_t<F, double>;
    if (!(a < b)) throw std::invalid_argument("quadrature: need a < b");
    const double mid = 0.5 * (a + b);
    const double scale = 0.5 * (b - a);
    const std::size_t n = x_.size();
    R acc{};
    for (std::size_t i = 0; i < n / 2; ++i) {
      const std::size_t j = n - 1 - i;
      acc += w_[i] * f(mid + scale * x_[i]) + w_[j] * f(mid + scale * x_[j]);
    }
    if (n % 2 == 1) acc += w_[n / 2] * f(mid + scale * x_[n / 2]);
    return scale * acc;
  }

 private:
  std::vector<double> x_, w_;
};

}  // namespace cpflab
