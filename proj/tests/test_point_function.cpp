#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cpflab/point_function.hpp"

using namespace cpflab;

namespace {

ScalarField2D field_of(std::function<Complex(double, double)> f) {
  return ScalarField2D(std::move(f), Window{});
}

RadialProfile kink_profile() {
  return RadialProfile{
      [](double s) { return std::abs(s - 1.0); },
      [](double s) { return s >= 1.0 ? 1.0 : -1.0; },
      [](double) { return 0.0; },
  };
}

}  // namespace

TEST_CASE("point sources reject the origin and order lexicographically") {
  CHECK_THROWS_AS(PointSource(0.0, 0.0, Chirality::Plus),
                  std::invalid_argument);
  const PointSource a(1.0, 2.0, Chirality::Plus);
  const PointSource b(1.0, 3.0, Chirality::Plus);
  const PointSource c(2.0, 0.0, Chirality::Plus);
  CHECK(a < b);
  CHECK(b < c);
  CHECK(!(c < a));
  CHECK(a == PointSource(1.0, 2.0, Chirality::Plus));
  CHECK(a.xi() == Complex(1.0, 2.0));
  CHECK(a.magnitude() == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
}

TEST_CASE("profile family is pinned to 1 on the unit circle for every width") {
  for (double kappa : {0.5, 1.0, 2.0, 3.5}) {
    const GaussianProfile psi(kappa);
    CHECK(psi.value(1.0) == 1.0);
    const double s = 1.4;
    const double k2 = kappa * kappa;
    CHECK(psi.value(s) ==
          doctest::Approx(std::exp(-k2 * (s * s - 1.0) / 2.0)).epsilon(1e-15));
    CHECK(psi.derivative(s) ==
          doctest::Approx(-k2 * s * psi.value(s)).epsilon(1e-14));
    CHECK(psi.second_derivative(s) ==
          doctest::Approx((k2 * k2 * s * s - k2) * psi.value(s))
              .epsilon(1e-14));
  }
  CHECK_THROWS_AS(GaussianProfile(0.0), std::invalid_argument);
  CHECK_THROWS_AS(GaussianProfile(-1.0), std::invalid_argument);
}

TEST_CASE("powering a profile rescales its width by sqrt(n)") {
  const GaussianProfile psi(1.5);
  const GaussianProfile squared = psi.powered(2);
  CHECK(squared.kappa == doctest::Approx(1.5 * std::sqrt(2.0)).epsilon(1e-15));
  const double s = 0.8;
  CHECK(squared.value(s) ==
        doctest::Approx(psi.value(s) * psi.value(s)).epsilon(1e-14));
}

TEST_CASE("scaled coordinate is exactly 1 at the source point") {
  for (const Chirality beta : {Chirality::Plus, Chirality::Minus}) {
    for (auto [x1, x2] : {std::pair{1.0, 0.0}, std::pair{3.0, 4.0},
                          std::pair{-0.3, 0.7}}) {
      const ComplexPointFunction phi(PointSource(x1, x2, beta),
                                     GaussianProfile(1.7));
      CHECK(phi.zeta(x1, x2) == Complex(1.0, 0.0));
      CHECK(phi.radial(x1, x2) == 1.0);
      CHECK(phi.profile_value(x1, x2) == 1.0);
    }
  }
}

TEST_CASE("explicit chirality tag must match the source") {
  const PointSource source(1.0, 0.0, Chirality::Plus);
  CHECK_NOTHROW(ComplexPointFunction(source, GaussianProfile(1.0),
                                     Chirality::Plus));
  CHECK_THROWS_AS(ComplexPointFunction(source, GaussianProfile(1.0),
                                       Chirality::Minus),
                  std::invalid_argument);
}

TEST_CASE("constraint domain membership follows the conjugate source") {
  const PointSource source(1.0, 2.0, Chirality::Plus);
  const ConstraintDomainSpec domain{Chirality::Plus, source};
  CHECK(domain.contains(std::conj(source.xi())));
  CHECK(!domain.contains(std::conj(source.xi()) + Complex(0.1, 0.0)));
}

TEST_CASE("nascent delta peak, tails and normalization") {
  CHECK(nascent_delta(0.0, 0.1) ==
        doctest::Approx(10.0 * std::numbers::inv_sqrtpi).epsilon(1e-14));
  for (double eps : {1e-1, 1e-3}) {
    CHECK(nascent_delta(5.0 * eps, eps) < 1e-10 / eps);
    CHECK(nascent_delta(-5.0 * eps, eps) < 1e-10 / eps);
  }
  CHECK_THROWS_AS(nascent_delta(0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(nascent_delta(0.0, -1.0), std::invalid_argument);

  // First derivative vanishes at the peak; second is -2/eps^2 times the peak.
  CHECK(nascent_delta_d1(0.0, 0.1) == 0.0);
  CHECK(nascent_delta_d2(0.0, 0.1) ==
        doctest::Approx(-200.0 * nascent_delta(0.0, 0.1)).epsilon(1e-13));
}

TEST_CASE("regularization parameters are validated") {
  const DeltaRegularization reg(1e-3);
  CHECK(reg.alpha1 == 1.0);
  CHECK(reg.alpha2 == 0.0);
  CHECK(reg.n_quad == 201);
  CHECK(reg.tau0 == doctest::Approx(8e-3).epsilon(1e-15));

  const DeltaRegularization half = reg.with_epsilon(5e-4);
  CHECK(half.epsilon == 5e-4);
  CHECK(half.tau0 == doctest::Approx(4e-3).epsilon(1e-15));

  CHECK_NOTHROW(DeltaRegularization(1e-3, 0.6, 0.8));
  CHECK_THROWS_AS(DeltaRegularization(0.0), std::invalid_argument);
  CHECK_THROWS_AS(DeltaRegularization(1e-3, 0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(DeltaRegularization(1e-3, 1.0, 0.0, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(DeltaRegularization(1e-3, 1.0, 0.0, 201, 1e-3),
                  std::invalid_argument);
}

TEST_CASE("delta moments reproduce the distributional pairings") {
  const DeltaRegularization reg(1e-2);
  const auto one = [](double) { return Complex(1.0, 0.0); };
  const auto tau = [](double t) { return Complex(t, 0.0); };
  const auto tau2 = [](double t) { return Complex(t * t, 0.0); };

  CHECK(std::abs(delta_moment(one, reg, 0) - Complex(1.0, 0.0)) < 1e-12);
  // Odd integrand against the even delta: mirrored pairs cancel exactly.
  CHECK(std::abs(delta_moment(tau, reg, 0)) == 0.0);
  CHECK(delta_moment(tau, reg, 1).real() ==
        doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(delta_moment(tau2, reg, 2).real() ==
        doctest::Approx(2.0).epsilon(1e-10));
  CHECK_THROWS_AS(delta_moment(one, reg, 3), std::invalid_argument);
  CHECK_THROWS_AS(delta_moment(one, reg, -1), std::invalid_argument);
}

TEST_CASE("sifting an analytic function recovers its source value") {
  const auto z2 = field_of([](double a, double b) {
    const Complex z = to_complex(a, b, Chirality::Plus);
    return z * z;
  });
  const PointSource source(2.0, 1.0, Chirality::Plus);
  const Complex got = sift(z2, source, DeltaRegularization(1e-3));
  CHECK(std::abs(got - Complex(3.0, 4.0)) <= 1e-5);

  const auto one = field_of([](double, double) { return Complex(1.0, 0.0); });
  CHECK(std::abs(sift(one, source, DeltaRegularization(1e-3)) -
                 Complex(1.0, 0.0)) < 1e-12);
}

TEST_CASE("sift is direction invariant") {
  const PointSource source(2.0, 1.0, Chirality::Plus);

  // Constant f: the two axis-aligned contours agree to quadrature noise.
  const auto one = field_of([](double, double) { return Complex(1.0, 0.0); });
  const Complex c1 = sift(one, source, DeltaRegularization(1e-3, 1.0, 0.0));
  const Complex c2 = sift(one, source, DeltaRegularization(1e-3, 0.0, 1.0));
  CHECK(std::abs(c1 - c2) < 1e-8);

  // Linear f keeps the agreement at the same width: the quadratic error
  // term carries f'' = 0.
  const auto linear = field_of([](double a, double b) {
    return 2.0 * to_complex(a, b, Chirality::Plus) + Complex(1.0, 0.0);
  });
  std::vector<Complex> linear_vals;
  for (int k = 0; k < 8; ++k) {
    const double ang = k * std::acos(-1.0) / 4.0;
    const DeltaRegularization reg(1e-3, std::cos(ang), std::sin(ang));
    linear_vals.push_back(sift(linear, source, reg));
  }
  for (const Complex& v : linear_vals)
    for (const Complex& w : linear_vals) CHECK(std::abs(v - w) <= 1e-8);

  // Curved f needs a narrower delta: the direction-dependent error scales
  // as eps^2 |f''|.
  const auto z2 = field_of([](double a, double b) {
    const Complex z = to_complex(a, b, Chirality::Plus);
    return z * z;
  });
  std::vector<Complex> curved_vals;
  for (int k = 0; k < 8; ++k) {
    const double ang = k * std::acos(-1.0) / 4.0;
    const DeltaRegularization reg(1e-6, std::cos(ang), std::sin(ang));
    curved_vals.push_back(sift(z2, source, reg));
  }
  for (const Complex& v : curved_vals)
    for (const Complex& w : curved_vals) CHECK(std::abs(v - w) <= 1e-8);
}

TEST_CASE("sift rejects a contour that leaves the window") {
  const auto one = field_of([](double, double) { return Complex(1.0, 0.0); });
  const PointSource near_edge(9.99, 0.0, Chirality::Plus);
  CHECK_THROWS_AS(sift(one, near_edge, DeltaRegularization(1e-2)),
                  std::domain_error);
}

TEST_CASE("conjugate-derivative integrals cancel for the smooth profile") {
  const ComplexPointFunction phi(PointSource(1.0, 0.0, Chirality::Plus),
                                 GaussianProfile(1.0));
  const CrCheck check = cpf_cr_check(phi, DeltaRegularization(1e-2));
  CHECK(check.cancellation() <= 1e-6);
  CHECK(check.magnitude_mismatch() <= 1e-8);
  CHECK(std::abs(check.limit - Complex(-1.0, 0.0)) < 1e-12);
  CHECK(std::abs(check.term_derivative - check.limit) < 1e-3);
  CHECK(std::abs(check.term_delta + check.limit) < 1e-3);
}

TEST_CASE("a kinked profile breaks the cancellation at order one") {
  const CrCheck check =
      profile_cr_check(kink_profile(), 1.0, DeltaRegularization(1e-2));
  // The delta-derivative integral of |tau| vanishes by symmetry, up to the
  // roundoff of the shifted radial argument (1 + tau) - 1 amplified by the
  // 1/eps^2 scale of the delta derivative. The deviation from the (-1, +1)
  // limit pair therefore sits at the full limit magnitude.
  CHECK(std::abs(check.term_delta) <= 1e-11);
  CHECK(check.deviation() >= 0.5);
  CHECK(check.cancellation() >= 0.01);
}

TEST_CASE("conjugate-derivative residual decays quadratically in width") {
  const ComplexPointFunction phi(PointSource(1.0, 0.0, Chirality::Plus),
                                 GaussianProfile(1.0));
  double eps = 1e-1;
  double prev = cpf_cr_residual(phi, DeltaRegularization(eps));
  for (int halving = 0; halving < 3; ++halving) {
    eps /= 2.0;
    const double next = cpf_cr_residual(phi, DeltaRegularization(eps));
    CHECK(next / prev <= 0.6);
    prev = next;
  }
  CHECK(cpf_cr_residual(phi, DeltaRegularization(1e-3)) < 1e-6);
}

TEST_CASE("normalization integral is 1 under the scaled measure") {
  const DeltaRegularization reg(1e-5);

  const ComplexPointFunction unit(PointSource(1.0, 0.0, Chirality::Plus),
                                  GaussianProfile(1.0));
  const NormalizationResult a = normalization_check(unit, reg);
  CHECK(a.scaled == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(a.raw == doctest::Approx(1.0).epsilon(1e-6));

  const ComplexPointFunction far(PointSource(3.0, 4.0, Chirality::Plus),
                                 GaussianProfile(1.0));
  const NormalizationResult b = normalization_check(far, reg);
  CHECK(b.scaled == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(b.raw - 25.0) <= 1e-6 * 25.0);

  const ComplexPointFunction wide(PointSource(1.0, 0.0, Chirality::Plus),
                                  GaussianProfile(2.0));
  CHECK(normalization_check(wide, reg).scaled ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("mirrored sources give the parity-mirrored point function") {
  const ComplexPointFunction plus(PointSource(0.8, 0.6, Chirality::Plus),
                                  GaussianProfile(1.3));
  const ComplexPointFunction minus(PointSource(0.8, -0.6, Chirality::Minus),
                                   GaussianProfile(1.3));
  for (double x1 : {0.5, 1.0, 1.7}) {
    for (double x2 : {-0.9, 0.2, 1.1}) {
      CHECK(minus.zeta(x1, -x2) == plus.zeta(x1, x2));
      CHECK(minus.profile_value(x1, -x2) == plus.profile_value(x1, x2));
    }
  }
}

TEST_CASE("regularized realization is a bump pinned to the constraint") {
  const ComplexPointFunction phi(PointSource(1.0, 0.0, Chirality::Plus),
                                 GaussianProfile(1.0));
  const double eps = 1e-2;
  const Complex at_pin = regularized_realization(phi, 1.0, 0.0, eps);
  CHECK(at_pin.real() ==
        doctest::Approx(std::numbers::inv_sqrtpi / eps).epsilon(1e-12));
  CHECK(at_pin.imag() == 0.0);

  // Far off the constraint circle the bump is exponentially negligible and
  // so is its finite-difference Laplacian.
  CHECK(regularized_laplacian_residual(phi, 1.5, 0.3, eps, 1e-3) <= 1e-10);
}

TEST_CASE("second-order contour integrals cancel and tighten with width") {
  const GaussianProfile psi(1.0);
  const RadialProfile radial = as_radial(psi);
  double prev = -1.0;
  for (double eps : {1e-1, 5e-2, 2.5e-2}) {
    const HarmonicityCheck check =
        profile_harmonicity_check(radial, 1.0, DeltaRegularization(eps));
    CHECK(check.cancellation() <= 1e-8);
    CHECK(std::abs(check.limit - Complex(psi.second_derivative(1.0), 0.0)) <
          1e-12);
    if (prev >= 0.0) CHECK(check.deviation() < prev);
    prev = check.deviation();
  }
}

TEST_CASE("bare radial laplacian is the order-one negative control") {
  const RadialProfile radial = as_radial(GaussianProfile(1.0));
  CHECK(radial_laplacian(radial, 1.0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(std::abs(radial_laplacian(radial, 1.0)) >= 0.5);
  CHECK_THROWS_AS(radial_laplacian(radial, 0.0), std::invalid_argument);
}
