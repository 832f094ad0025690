#include "cpflab/observables.hpp"

#include <cmath>
#include <numbers>

#include "cpflab/quadrature.hpp"

namespace cpflab {

namespace {

void require_shared_mode(const SymmetricState& state, const ModeSpec& mode) {
  if (mode.beta != state.beta())
    throw std::invalid_argument(
        "expectation: mode chirality disagrees with state");
  if (std::abs(mode.k - state.mode_k()) > 1e-12)
    throw std::invalid_argument(
        "expectation: mode wavenumber disagrees with state");
}

std::size_t matching_mode_index(const FieldOperator& op, const ModeSpec& mode) {
  const auto& modes = op.modes();
  for (std::size_t i = 0; i < modes.size(); ++i)
    if (modes[i].beta == mode.beta && std::abs(modes[i].k - mode.k) <= 1e-12 &&
        std::abs(modes[i].omega - mode.omega) <= 1e-12)
      return i;
  throw std::invalid_argument("expectation: operator carries no matching mode");
}

/// <n| N |n> contracted through the stored matrices; exact because the number
/// operator is the exact integer diagonal.
double number_weight(const FieldOperator& op, int n) {
  const LadderAlgebra& algebra = op.algebra();
  const Eigen::VectorXcd v = algebra.basis_state(n);
  const Complex w = (v.adjoint() * algebra.number_matrix() * v).value();
  return w.real();
}

/// Per-photon helicity weight of a polarization vector: exactly the chirality
/// sign when the vector passes the circularity test, otherwise the general
/// transverse-component expression.
double helicity_weight(const PolarizationVector& pol, Chirality beta) {
  if (pol.is_circular(beta)) return static_cast<double>(to_int(beta));
  return 2.0 * std::imag(std::conj(pol.x1()) * pol.x2());
}

/// Central-difference realization of the phase derivative eigenvalue:
/// -i d/dx3 for momentum, +i d/dt for energy, both ~ sin(w h) / h.
Complex phase_eigenvalue(ObservableKind kind, const ModeSpec& mode,
                         double step) {
  if (kind == ObservableKind::MomentumX3) {
    const Complex up = std::exp(Complex{0.0, mode.k * step});
    const Complex um = std::exp(Complex{0.0, -(mode.k * step)});
    return Complex{0.0, -1.0} * (up - um) / (2.0 * step);
  }
  const Complex up = std::exp(Complex{0.0, -(mode.omega * step)});
  const Complex um = std::exp(Complex{0.0, mode.omega * step});
  return Complex{0.0, 1.0} * (up - um) / (2.0 * step);
}

/// Iterated constraint-line quadrature of <Phi|Phi> for the n-photon state:
/// the collapsed kernel exp(-n kappa^2 ((1+s)(1+t) - 1)) sifted in both
/// scaled variables. Approaches 1 as epsilon -> 0.
Complex sandwich_norm(const SymmetricState& state,
                      const DeltaRegularization& reg) {
  const double k2 =
      static_cast<double>(state.n()) * state.kappa() * state.kappa();
  return delta_moment(
      [&](double sigma) {
        return delta_moment(
            [&](double tau) {
              return Complex{
                  std::exp(-k2 * ((1.0 + sigma) * (1.0 + tau) - 1.0)), 0.0};
            },
            reg, 0);
      },
      reg, 0);
}

/// Iterated quadrature of the source-pivot angular momentum kernel for one
/// photon of the n-photon state; the delta derivative is taken analytically.
/// Approaches 1 as epsilon -> 0 for every kappa.
Complex spin_kernel(const SymmetricState& state,
                    const DeltaRegularization& reg) {
  const double k2 =
      static_cast<double>(state.n()) * state.kappa() * state.kappa();
  const auto kernel = [k2](double sigma, double tau) {
    return std::exp(-k2 * ((1.0 + sigma) * (1.0 + tau) - 1.0));
  };
  return delta_moment(
      [&](double sigma) {
        const Complex derivative_term = delta_moment(
            [&](double tau) { return Complex{-tau * kernel(sigma, tau), 0.0}; },
            reg, 1);
        const Complex holomorphic_term =
            -sigma * k2 *
            delta_moment(
                [&](double tau) {
                  return Complex{(1.0 + tau) * kernel(sigma, tau), 0.0};
                },
                reg, 0);
        return derivative_term + holomorphic_term;
      },
      reg, 0);
}

Complex raw_expectation(const ObservableSpec& spec, const SymmetricState& state,
                        const ModeSpec& mode, const FieldOperator& op,
                        std::size_t mode_index, const DeltaRegularization& reg,
                        double step) {
  if (spec.kind == ObservableKind::AngularMomentumX3) {
    const double photons = static_cast<double>(state.n());
    const double b = static_cast<double>(to_int(state.beta()));
    (void)mode_index;
    return photons * b * spin_kernel(state, reg);
  }
  const double weight = number_weight(op, state.n());
  return weight * phase_eigenvalue(spec.kind, mode, step) *
         sandwich_norm(state, reg);
}

}  // namespace

ObservableSpec::ObservableSpec(ObservableKind kind_, bool occupancy_modified_)
    : kind(kind_), occupancy_modified(occupancy_modified_) {
  const bool needs_occupancy = kind != ObservableKind::AngularMomentumX3;
  if (occupancy_modified != needs_occupancy)
    throw std::invalid_argument(
        "ObservableSpec: momentum and energy require the occupancy-weighted "
        "operator; angular momentum forbids it");
}

const char* observable_name(ObservableKind kind) {
  switch (kind) {
    case ObservableKind::MomentumX3:
      return "momentum_x3";
    case ObservableKind::Energy:
      return "energy";
    case ObservableKind::AngularMomentumX3:
      return "angular_momentum_x3";
  }
  return "unknown";
}

double expectation_exact(const ObservableSpec& spec,
                         const SymmetricState& state, const ModeSpec& mode,
                         const FieldOperator& op) {
  require_shared_mode(state, mode);
  const std::size_t idx = matching_mode_index(op, mode);
  if (state.n() + 1 >= op.algebra().dim())
    throw std::runtime_error("truncation exceeded");
  const double weight = spec.occupancy_modified
                            ? number_weight(op, state.n())
                            : static_cast<double>(state.n());
  switch (spec.kind) {
    case ObservableKind::MomentumX3:
      return weight * mode.k;
    case ObservableKind::Energy:
      return weight * mode.omega;
    case ObservableKind::AngularMomentumX3:
      return weight * helicity_weight(op.polarization(idx), state.beta());
  }
  throw std::logic_error("expectation_exact: unhandled observable");
}

ExpectationResult expectation(const ObservableSpec& spec,
                              const SymmetricState& state,
                              const ModeSpec& mode, const FieldOperator& op,
                              const DeltaRegularization& reg, double step) {
  require_shared_mode(state, mode);
  if (!(step > 0.0))
    throw std::invalid_argument("expectation: step must be > 0");
  const std::size_t idx = matching_mode_index(op, mode);
  if (state.n() + 1 >= op.algebra().dim())
    throw std::runtime_error("truncation exceeded");

  const Complex raw = raw_expectation(spec, state, mode, op, idx, reg, step);
  if (std::abs(raw.imag()) > 1e-10 * std::abs(raw))
    throw std::logic_error(
        "expectation: raw quadrature output is not real to tolerance");
  const Complex raw_half = raw_expectation(spec, state, mode, op, idx,
                                           reg.with_epsilon(reg.epsilon / 2.0),
                                           step);

  const double value = raw.real();
  double estimate = 2.0 * std::abs(value - raw_half.real()) +
                    1e-14 * (1.0 + std::abs(value));
  if (spec.kind == ObservableKind::MomentumX3) {
    const double kh = mode.k * step;
    estimate += std::abs(value) * kh * kh / 3.0;
  } else if (spec.kind == ObservableKind::Energy) {
    const double wh = mode.omega * step;
    estimate += std::abs(value) * wh * wh / 3.0;
  }

  return ExpectationResult{value,      estimate,      reg.epsilon,
                           state.n(),  state.beta(),  state.kappa()};
}

std::vector<ExpectationResult> kappa_sweep(const ObservableSpec& spec,
                                           const SymmetricState& state,
                                           const ModeSpec& mode,
                                           const FieldOperator& op,
                                           const DeltaRegularization& reg,
                                           double step,
                                           const std::vector<double>& kappas) {
  std::vector<ExpectationResult> out;
  out.reserve(kappas.size());
  for (double kappa : kappas) {
    if (!(kappa > 0.0))
      throw std::invalid_argument("kappa_sweep: kappa must be > 0");
    out.push_back(expectation(spec, state.with_kappa(kappa), mode, op, reg,
                              step));
  }
  return out;
}

Complex complex_regularized_state_value(const SymmetricState& state, double x1,
                                        double x2, double epsilon) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument(
        "complex_regularized_state_value: epsilon must be > 0");
  const GaussianProfile profile{state.kappa()};
  Complex acc{state.norm_coeff(), 0.0};
  for (const auto& source : state.sources()) {
    const ComplexPointFunction phi(source, profile);
    const Complex zeta = phi.zeta(x1, x2);
    const Complex w = std::conj(zeta) - 1.0;
    acc *= profile.value(std::abs(zeta)) * std::exp(-(w * w) / (epsilon * epsilon)) *
           std::numbers::inv_sqrtpi / epsilon;
  }
  return acc;
}

Complex angular_momentum_density(const SymmetricState& state,
                                 const ChiralCoordinate& at,
                                 const DeltaRegularization& reg, double step) {
  if (at.beta != state.beta())
    throw std::invalid_argument(
        "angular_momentum_density: point chirality disagrees with state");
  if (!(step > 0.0))
    throw std::invalid_argument("angular_momentum_density: step must be > 0");
  const Window window{};
  if (!window.contains_with_margin(at.x1, at.x2, step))
    throw std::domain_error(
        "angular_momentum_density: stencil leaves the evaluation window");

  const double eps = reg.epsilon;
  const auto phi = [&](double p1, double p2) {
    return complex_regularized_state_value(state, p1, p2, eps);
  };
  const Complex center = phi(at.x1, at.x2);
  const Complex d1 =
      (phi(at.x1 + step, at.x2) - phi(at.x1 - step, at.x2)) / (2.0 * step);
  const Complex d2 =
      (phi(at.x1, at.x2 + step) - phi(at.x1, at.x2 - step)) / (2.0 * step);
  const double b = static_cast<double>(to_int(state.beta()));
  const Complex ib{0.0, b};
  const Complex dz = 0.5 * (d1 - ib * d2);
  const Complex dzbar = 0.5 * (d1 + ib * d2);

  const Complex z = to_complex(at.x1, at.x2, state.beta());
  const Complex pivot =
      state.n() > 0 ? state.sources().front().xi() : Complex{};
  const Complex bracket =
      (z - pivot) * dz - (std::conj(z) - std::conj(pivot)) * dzbar;
  return b * (std::conj(center) * bracket);
}

Complex integrate_angular_momentum_density(const SymmetricState& state,
                                           const DeltaRegularization& reg,
                                           double step) {
  if (!(step > 0.0))
    throw std::invalid_argument(
        "integrate_angular_momentum_density: step must be > 0");
  const int n = state.n();
  if (n == 0) return Complex{};
  const double k2 = static_cast<double>(n) * state.kappa() * state.kappa();
  const double eps = reg.epsilon;
  const auto kernel = [k2](double sigma, double tau) {
    return std::exp(-k2 * ((1.0 + sigma) * (1.0 + tau) - 1.0));
  };
  const auto smeared = [&](double sigma, double tau) {
    return kernel(sigma, tau) * nascent_delta(tau, eps);
  };
  const GaussLegendre rule(reg.n_quad);
  const auto inner = [&](double sigma) {
    return rule.integrate(
        [&](double tau) {
          const double deriv =
              (smeared(sigma, tau + step) - smeared(sigma, tau - step)) /
              (2.0 * step);
          const double holo = -sigma * k2 * (1.0 + tau) * smeared(sigma, tau);
          return Complex{holo - tau * deriv, 0.0};
        },
        -reg.tau0, reg.tau0);
  };
  const Complex iterated = delta_moment(inner, reg, 0);
  const double b = static_cast<double>(to_int(state.beta()));
  return static_cast<double>(n) * b * iterated;
}

Complex bare_profile_angular_density(const GaussianProfile& profile, double x1,
                                     double x2, double step) {
  if (!(step > 0.0))
    throw std::invalid_argument(
        "bare_profile_angular_density: step must be > 0");
  const auto f = [&](double p1, double p2) {
    return profile.value(std::sqrt(p1 * p1 + p2 * p2));
  };
  const double d1 = (f(x1 + step, x2) - f(x1 - step, x2)) / (2.0 * step);
  const double d2 = (f(x1, x2 + step) - f(x1, x2 - step)) / (2.0 * step);
  const double g = x1 * d2 - x2 * d1;
  return Complex{0.0, -1.0} * (f(x1, x2) * g);
}

Complex integrate_bare_profile_density(const GaussianProfile& profile,
                                       double extent, int grid, double step) {
  if (!(extent > 0.0))
    throw std::invalid_argument(
        "integrate_bare_profile_density: extent must be > 0");
  const GaussLegendre rule(grid);
  const auto& x = rule.nodes();
  const auto& w = rule.weights();
  Complex acc{};
  // Swap-paired traversal: the density is exactly antisymmetric under
  // (x1, x2) exchange, so each pair contributes a floating-point zero.
  for (int i = 0; i < grid; ++i) {
    const double ui = extent * x[i];
    const double wi = extent * w[i];
    acc += (wi * wi) * bare_profile_angular_density(profile, ui, ui, step);
    for (int j = i + 1; j < grid; ++j) {
      const double uj = extent * x[j];
      const double wj = extent * w[j];
      const double wij = wi * wj;
      acc += wij * (bare_profile_angular_density(profile, ui, uj, step) +
                    bare_profile_angular_density(profile, uj, ui, step));
    }
  }
  return acc;
}

}  // namespace cpflab
