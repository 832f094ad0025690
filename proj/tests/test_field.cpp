#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cpflab/field.hpp"

using namespace cpflab;

namespace {

SymmetricState one_photon(Chirality beta, double kappa = 1.0) {
  return SymmetricState::identical(1, PointSource(1.0, 0.0, beta), kappa);
}

FieldComponent circular_component(Chirality beta, Complex amplitude,
                                  FreqSign freq = FreqSign::Positive) {
  return make_component({ModeSpec(1.0, 1.0, amplitude, beta)},
                        one_photon(beta), solve_gauge_polarization(beta),
                        freq);
}

}  // namespace

TEST_CASE("modes must sit on the light cone with positive frequency") {
  CHECK_NOTHROW(ModeSpec(1.0, 1.0, Complex(1.0, 0.0), Chirality::Plus));
  CHECK_NOTHROW(ModeSpec(-2.0, 2.0, Complex(1.0, 0.0), Chirality::Minus));
  CHECK_THROWS_AS(ModeSpec(1.0, 2.0, Complex(1.0, 0.0), Chirality::Plus),
                  std::invalid_argument);
  CHECK_THROWS_AS(ModeSpec(0.0, 0.0, Complex(1.0, 0.0), Chirality::Plus),
                  std::invalid_argument);
  CHECK_THROWS_AS(ModeSpec(1.0, -1.0, Complex(1.0, 0.0), Chirality::Plus),
                  std::invalid_argument);
}

TEST_CASE("plane-wave phases at landmark points") {
  const double pi = std::numbers::pi;
  const ModeSpec unit(1.0, 1.0, Complex(1.0, 0.0), Chirality::Plus);
  CHECK(plane_wave(unit, 0.0, 0.0) == Complex(1.0, 0.0));
  CHECK(std::abs(plane_wave(unit, pi, 0.0) - Complex(-1.0, 0.0)) <= 1e-15);

  const ModeSpec two(2.0, 2.0, Complex(1.0, 0.0), Chirality::Plus);
  CHECK(plane_wave(two, pi / 4.0, pi / 4.0) == Complex(1.0, 0.0));

  CHECK(plane_wave(unit, 0.0, 0.0, true).real() ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("phase-factor d'Alembertian detects a broken dispersion relation") {
  // Off the light cone the residual is |omega^2 - k^2| times the amplitude.
  CHECK(dalembert_phase_residual(1.0, 2.0, Complex(1.0, 0.0), 0.3, 0.1,
                                 1e-3) == doctest::Approx(3.0).epsilon(1e-4));
  CHECK(dalembert_phase_residual(1.0, 2.0, Complex(0.0, 2.0), 0.3, 0.1,
                                 1e-3) == doctest::Approx(6.0).epsilon(1e-4));
  CHECK(dalembert_phase_residual(1.0, 1.0, Complex(1.0, 0.0), 0.3, 0.1,
                                 1e-3) <= 1e-6);
  CHECK(dalembert_phase_residual(-1.5, 1.5, Complex(1.0, 0.0), 0.3, 0.1,
                                 1e-3) <= 1e-6);
}

TEST_CASE("polarization vectors require unit norm") {
  CHECK_THROWS_AS(PolarizationVector(Complex(1.0, 0.0), Complex(1.0, 0.0),
                                     Complex(0.0, 0.0), Complex(0.0, 0.0)),
                  std::invalid_argument);
  CHECK_NOTHROW(PolarizationVector(Complex(0.0, 0.0), Complex(1.0, 0.0),
                                   Complex(0.0, 0.0), Complex(0.0, 0.0)));
}

TEST_CASE("circularity test keys on the chirality pairing") {
  const double r = 1.0 / std::sqrt(2.0);
  const PolarizationVector right(Complex(0.0, 0.0), Complex(r, 0.0),
                                 Complex(0.0, r), Complex(0.0, 0.0));
  CHECK(right.is_circular(Chirality::Plus));
  CHECK(!right.is_circular(Chirality::Minus));

  const PolarizationVector linear(Complex(0.0, 0.0), Complex(1.0, 0.0),
                                  Complex(0.0, 0.0), Complex(0.0, 0.0));
  CHECK(!linear.is_circular(Chirality::Plus));
  CHECK(!linear.is_circular(Chirality::Minus));
}

TEST_CASE("gauge solve returns the circular pair with fixed phase") {
  for (const Chirality beta : {Chirality::Plus, Chirality::Minus}) {
    const PolarizationVector pol = solve_gauge_polarization(beta);
    const double r = 1.0 / std::sqrt(2.0);
    const double b = static_cast<double>(to_int(beta));
    CHECK(std::abs(pol.t()) <= 1e-12);
    CHECK(std::abs(pol.x1() - Complex(r, 0.0)) <= 1e-12);
    CHECK(std::abs(pol.x2() - Complex(0.0, b * r)) <= 1e-12);
    CHECK(std::abs(pol.x3()) <= 1e-12);
    CHECK(pol.x1().real() > 0.0);
    CHECK(pol.is_circular(beta, 1e-12));
  }
}

TEST_CASE("component construction enforces a single chirality") {
  const auto mode_minus = ModeSpec(1.0, 1.0, Complex(1.0, 0.0),
                                   Chirality::Minus);
  CHECK_THROWS_AS(make_component({mode_minus}, one_photon(Chirality::Plus),
                                 solve_gauge_polarization(Chirality::Plus),
                                 FreqSign::Positive),
                  std::invalid_argument);
}

TEST_CASE("component evaluation factorizes over phase, polarization, state") {
  const Complex amp(0.3, 0.4);
  const ModeSpec mode(1.0, 1.0, amp, Chirality::Plus);
  const PolarizationVector pol = solve_gauge_polarization(Chirality::Plus);
  const FieldComponent vac = make_component(
      {mode}, SymmetricState::vacuum(Chirality::Plus), pol,
      FreqSign::Positive);

  const double x3 = 0.7, t = 0.2, eps = 0.05;
  const Complex phase = amp * plane_wave(mode, x3, t, true);
  for (int mu = 0; mu < 4; ++mu) {
    const Complex got = vac.evaluate(mu, 0.1, -0.2, x3, t, eps);
    const Complex want = phase * pol.components()[mu];
    CHECK(std::abs(got - want) <= 1e-15 * (1.0 + std::abs(want)));
  }

  const FieldComponent vac_neg = make_component(
      {mode}, SymmetricState::vacuum(Chirality::Plus), pol,
      FreqSign::Negative);
  for (int mu = 0; mu < 4; ++mu) {
    const Complex got = vac_neg.evaluate(mu, 0.1, -0.2, x3, t, eps);
    const Complex want = std::conj(phase * pol.components()[mu]);
    CHECK(std::abs(got - want) <= 1e-15 * (1.0 + std::abs(want)));
  }

  CHECK_THROWS_AS(vac.evaluate(4, 0.0, 0.0, 0.0, 0.0, eps),
                  std::invalid_argument);
  CHECK_THROWS_AS(vac.evaluate(-1, 0.0, 0.0, 0.0, 0.0, eps),
                  std::invalid_argument);
}

TEST_CASE("assembled components solve the wave equation") {
  const PolarizationVector pol = solve_gauge_polarization(Chirality::Plus);
  const FieldComponent single = make_component(
      {ModeSpec(1.0, 1.0, Complex(0.3, 0.4), Chirality::Plus)},
      SymmetricState::vacuum(Chirality::Plus), pol, FreqSign::Positive);
  CHECK(wave_equation_residual(single, 1, 0.2, -0.1, 0.5, 0.2, 1e-3, 0.05) <=
        1e-6);

  const FieldComponent triple = make_component(
      {ModeSpec(1.0, 1.0, Complex(0.3, 0.4), Chirality::Plus),
       ModeSpec(2.0, 2.0, Complex(-0.2, 0.1), Chirality::Plus),
       ModeSpec(0.5, 0.5, Complex(0.0, 0.6), Chirality::Plus)},
      SymmetricState::vacuum(Chirality::Plus), pol, FreqSign::Positive);
  CHECK(wave_equation_residual(triple, 1, 0.2, -0.1, 0.5, 0.2, 1e-3, 0.05) <=
        1e-6);

  // At the phase origin the two second differences see the same pair of
  // summands and cancel bitwise.
  CHECK(wave_equation_residual(triple, 1, 0.2, -0.1, 0.0, 0.0, 1e-3, 0.05) ==
        0.0);
}

TEST_CASE("constraint residual distinguishes matched and mismatched blocks") {
  for (const Chirality beta : {Chirality::Plus, Chirality::Minus}) {
    const FieldComponent comp = circular_component(beta, Complex(1.0, 0.0));
    const Chirality mirrored =
        beta == Chirality::Plus ? Chirality::Minus : Chirality::Plus;
    const DeltaRegularization reg(1e-3);

    const double matched = cr_constraint_residual(comp, beta, 0.0, 0.0, reg);
    CHECK(matched <= 1e-5);

    const double crossed =
        cr_constraint_residual(comp, mirrored, 0.0, 0.0, reg);
    CHECK(crossed >= 0.05);

    const FieldComponent vac = make_component(
        {ModeSpec(1.0, 1.0, Complex(1.0, 0.0), beta)},
        SymmetricState::vacuum(beta), solve_gauge_polarization(beta),
        FreqSign::Positive);
    CHECK(cr_constraint_residual(vac, beta, 0.0, 0.0, reg) == 0.0);
  }
}

TEST_CASE("divergence residual selects the circular polarization") {
  for (const Chirality beta : {Chirality::Plus, Chirality::Minus}) {
    const FieldComponent circ = circular_component(beta, Complex(1.0, 0.0));
    const double tight = gauge_residual(circ, 0.0, 0.0,
                                        DeltaRegularization(1e-4), 1e-4);
    CHECK(tight <= 1e-8);

    const double base =
        gauge_residual(circ, 0.0, 0.0, DeltaRegularization(1e-3), 1e-4);

    const PolarizationVector x1_linear(Complex(0.0, 0.0), Complex(1.0, 0.0),
                                       Complex(0.0, 0.0), Complex(0.0, 0.0));
    const FieldComponent linear = make_component(
        {ModeSpec(1.0, 1.0, Complex(1.0, 0.0), beta)}, one_photon(beta),
        x1_linear, FreqSign::Positive);
    const double loose =
        gauge_residual(linear, 0.0, 0.0, DeltaRegularization(1e-3), 1e-4);
    CHECK(loose >= 0.05);
    CHECK(loose >= 100.0 * base);

    const PolarizationVector time_linear(Complex(1.0, 0.0), Complex(0.0, 0.0),
                                         Complex(0.0, 0.0), Complex(0.0, 0.0));
    const FieldComponent temporal = make_component(
        {ModeSpec(1.0, 1.0, Complex(1.0, 0.0), beta)}, one_photon(beta),
        time_linear, FreqSign::Positive);
    const double loose_t =
        gauge_residual(temporal, 0.0, 0.0, DeltaRegularization(1e-3), 1e-4);
    CHECK(loose_t >= 0.05);
    CHECK(loose_t >= 100.0 * base);

    const FieldComponent dark = make_component(
        {ModeSpec(1.0, 1.0, Complex(0.0, 0.0), beta)}, one_photon(beta),
        solve_gauge_polarization(beta), FreqSign::Positive);
    CHECK(gauge_residual(dark, 0.0, 0.0, DeltaRegularization(1e-3), 1e-4) ==
          0.0);
  }
}

TEST_CASE("four-block field validates slots and sums them on evaluation") {
  const FieldComponent pp = circular_component(Chirality::Plus,
                                               Complex(0.4, 0.1));
  const FieldComponent pn = circular_component(Chirality::Plus,
                                               Complex(0.4, 0.1),
                                               FreqSign::Negative);
  const FieldComponent mp = circular_component(Chirality::Minus,
                                               Complex(-0.2, 0.3));
  const FieldComponent mn = circular_component(Chirality::Minus,
                                               Complex(-0.2, 0.3),
                                               FreqSign::Negative);

  CHECK_THROWS_AS(ConstrainedField(pp, pn, mn, mp), std::invalid_argument);
  CHECK_THROWS_AS(ConstrainedField(pn, pp, mp, mn), std::invalid_argument);

  const ConstrainedField field(pp, pn, mp, mn);
  CHECK(field.component(Chirality::Plus, FreqSign::Negative).freq ==
        FreqSign::Negative);
  CHECK(field.component(Chirality::Minus, FreqSign::Positive).beta() ==
        Chirality::Minus);

  const double x1 = 1.01, x2 = 0.02, x3 = 0.4, t = 0.1, eps = 0.05;
  for (int mu = 0; mu < 4; ++mu) {
    const Complex total = field.evaluate_total(mu, x1, x2, x3, t, eps);
    const Complex sum = pp.evaluate(mu, x1, x2, x3, t, eps) +
                        pn.evaluate(mu, x1, x2, x3, t, eps) +
                        mp.evaluate(mu, x1, x2, x3, t, eps) +
                        mn.evaluate(mu, x1, x2, x3, t, eps);
    CHECK(std::abs(total - sum) <= 1e-12 * (1.0 + std::abs(sum)));
  }

  CHECK_THROWS_AS(field.evaluate_total(0, 0.0, 0.0, 11.0, 0.0, eps),
                  std::domain_error);
  CHECK_THROWS_AS(field.evaluate_total(0, 10.5, 0.0, 0.0, 0.0, eps),
                  std::domain_error);
}

TEST_CASE("field operator is Hermitian in the truncated basis") {
  const FieldOperator op = assemble_field_operator(
      {ModeSpec(1.0, 1.0, Complex(0.7, 0.2), Chirality::Plus)},
      LadderAlgebra(8));
  CHECK(op.hermiticity_defect(0.4, 0.2) <= 1e-15);
  CHECK(op.hermiticity_defect(-2.0, 1.3) <= 1e-15);

  CHECK_THROWS_AS(assemble_field_operator({}, LadderAlgebra(4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(op.polarization(1), std::out_of_range);
  CHECK(op.polarization(0).is_circular(Chirality::Plus));
}

TEST_CASE("operator action raises and lowers with the mode coefficient") {
  const Complex amp(0.7, 0.2);
  const ModeSpec mode(1.0, 1.0, amp, Chirality::Plus);
  const FieldOperator op = assemble_field_operator({mode}, LadderAlgebra(4));

  const double x3 = 0.3, t = -0.4;
  const FieldOperator::Action on_vacuum = op.apply(1, x3, t, 0);
  CHECK(on_vacuum.lower_coeff == Complex(0.0, 0.0));
  const Complex expected =
      amp * plane_wave(mode, x3, t, true) * op.polarization(0).x1();
  CHECK(std::abs(on_vacuum.raise_coeff - expected) <=
        1e-15 * (1.0 + std::abs(expected)));

  CHECK_THROWS_AS(op.apply(1, x3, t, -1), std::out_of_range);
  CHECK_THROWS_AS(op.apply(1, x3, t, 4), std::out_of_range);
  CHECK_THROWS_AS(op.apply(1, x3, t, 3), std::runtime_error);
}

TEST_CASE("operator route matches the classical assembly") {
  const ModeSpec mode(1.0, 1.0, Complex(0.7, 0.2), Chirality::Plus);
  const FieldOperator op = assemble_field_operator({mode}, LadderAlgebra(8));
  const PointSource source(1.0, 0.0, Chirality::Plus);
  const double x1 = 1.02, x2 = 0.01, x3 = 0.4, t = 0.2, eps = 0.05;

  for (int n = 0; n <= 3; ++n) {
    const SymmetricState state =
        n == 0 ? SymmetricState::vacuum(Chirality::Plus)
               : SymmetricState::identical(n, source, 1.0);
    for (int mu = 0; mu < 4; ++mu) {
      const Complex quantum =
          operator_route_value(op, mu, state, x1, x2, x3, t, eps);
      const Complex classical = classical_route_value(
          mode, op.polarization(0), state, mu, x1, x2, x3, t, eps);
      CHECK(std::abs(quantum - classical) <=
            1e-8 * (1.0 + std::abs(classical)));
    }
  }
}
