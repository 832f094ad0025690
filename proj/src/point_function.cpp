#include "cpflab/point_function.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <utility>

#include "cpflab/quadrature.hpp"

namespace cpflab {

namespace {

const GaussLegendre& cached_rule(int n) {
  thread_local std::map<int, GaussLegendre> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, GaussLegendre(n)).first;
  return it->second;
}

double delta_derivative(double tau, double eps, int order) {
  switch (order) {
    case 0:
      return nascent_delta(tau, eps);
    case 1:
      return nascent_delta_d1(tau, eps);
    case 2:
      return nascent_delta_d2(tau, eps);
    default:
      throw std::invalid_argument("delta_moment: order must be 0, 1 or 2");
  }
}

}  // namespace

PointSource::PointSource(double x1_, double x2_, Chirality beta_)
    : x1(x1_), x2(x2_), beta(beta_) {
  if (!(magnitude() > 0.0))
    throw std::invalid_argument("PointSource: source at the origin");
}

bool operator==(const PointSource& a, const PointSource& b) {
  return a.x1 == b.x1 && a.x2 == b.x2 && a.beta == b.beta;
}

bool operator<(const PointSource& a, const PointSource& b) {
  if (a.x1 != b.x1) return a.x1 < b.x1;
  if (a.x2 != b.x2) return a.x2 < b.x2;
  return to_int(a.beta) < to_int(b.beta);
}

GaussianProfile::GaussianProfile(double kappa_) : kappa(kappa_) {
  if (!(kappa > 0.0))
    throw std::invalid_argument("GaussianProfile: kappa must be > 0");
}

double GaussianProfile::value(double s) const {
  return std::exp(-0.5 * kappa * kappa * (s * s - 1.0));
}

double GaussianProfile::derivative(double s) const {
  return -kappa * kappa * s * value(s);
}

double GaussianProfile::second_derivative(double s) const {
  const double k2 = kappa * kappa;
  return (k2 * k2 * s * s - k2) * value(s);
}

GaussianProfile GaussianProfile::powered(int n) const {
  return GaussianProfile(kappa * std::sqrt(static_cast<double>(n)));
}

RadialProfile as_radial(const GaussianProfile& g) {
  return RadialProfile{
      [g](double s) { return g.value(s); },
      [g](double s) { return g.derivative(s); },
      [g](double s) { return g.second_derivative(s); },
  };
}

ComplexPointFunction::ComplexPointFunction(PointSource source,
                                           GaussianProfile profile)
    : source_(source), profile_(profile) {}

ComplexPointFunction::ComplexPointFunction(PointSource source,
                                           GaussianProfile profile,
                                           Chirality beta)
    : ComplexPointFunction(source, profile) {
  if (beta != source.beta)
    throw std::invalid_argument(
        "ComplexPointFunction: chirality disagrees with source");
}

Complex ComplexPointFunction::zeta(double x1, double x2) const {
  // z * conj(xi) / |xi|^2, spelled out so that z == xi gives exactly 1 + 0i.
  const Complex z = to_complex(x1, x2, source_.beta);
  const Complex xi = source_.xi();
  const double d = xi.real() * xi.real() + xi.imag() * xi.imag();
  return {(z.real() * xi.real() + z.imag() * xi.imag()) / d,
          (z.imag() * xi.real() - z.real() * xi.imag()) / d};
}

double ComplexPointFunction::radial(double x1, double x2) const {
  return std::abs(zeta(x1, x2));
}

double ComplexPointFunction::profile_value(double x1, double x2) const {
  return profile_.value(radial(x1, x2));
}

DeltaRegularization::DeltaRegularization(double epsilon_, double alpha1_,
                                         double alpha2_, int n_quad_,
                                         double tau0_)
    : epsilon(epsilon_),
      alpha1(alpha1_),
      alpha2(alpha2_),
      n_quad(n_quad_),
      tau0(tau0_ == 0.0 ? 8.0 * epsilon_ : tau0_) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("DeltaRegularization: epsilon must be > 0");
  if (std::abs(alpha1 * alpha1 + alpha2 * alpha2 - 1.0) > 1e-12)
    throw std::invalid_argument(
        "DeltaRegularization: contour direction must be a unit vector");
  if (n_quad < 3)
    throw std::invalid_argument("DeltaRegularization: n_quad must be >= 3");
  if (tau0 < 8.0 * epsilon)
    throw std::invalid_argument(
        "DeltaRegularization: interval too short for the delta mass");
}

DeltaRegularization DeltaRegularization::with_epsilon(double eps) const {
  return DeltaRegularization(eps, alpha1, alpha2, n_quad);
}

bool ConstraintDomainSpec::contains(Complex z_conj, double tol) const {
  return std::abs(z_conj - std::conj(source.xi())) <= tol;
}

double nascent_delta(double tau, double epsilon) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("nascent_delta: epsilon must be > 0");
  const double u = tau / epsilon;
  return std::exp(-u * u) * std::numbers::inv_sqrtpi / epsilon;
}

double nascent_delta_d1(double tau, double epsilon) {
  return -(2.0 * tau / (epsilon * epsilon)) * nascent_delta(tau, epsilon);
}

double nascent_delta_d2(double tau, double epsilon) {
  const double e2 = epsilon * epsilon;
  return (4.0 * tau * tau / (e2 * e2) - 2.0 / e2) *
         nascent_delta(tau, epsilon);
}

Complex delta_moment(const std::function<Complex(double)>& g,
                     const DeltaRegularization& reg, int order) {
  const GaussLegendre& rule = cached_rule(reg.n_quad);
  const auto& x = rule.nodes();
  const auto& w = rule.weights();
  const int n = rule.size();
  // Mirrored pairs are summed together: integrands odd in floating point
  // cancel exactly instead of leaving accumulation noise.
  Complex acc{};
  for (int i = 0; i < n / 2; ++i) {
    const double tl = reg.tau0 * x[i];
    const double tr = reg.tau0 * x[n - 1 - i];
    const Complex vl = g(tl) * delta_derivative(tl, reg.epsilon, order);
    const Complex vr = g(tr) * delta_derivative(tr, reg.epsilon, order);
    acc += w[i] * (vl + vr);
  }
  if (n % 2 == 1) {
    const double tm = reg.tau0 * x[n / 2];
    acc += w[n / 2] * g(tm) * delta_derivative(tm, reg.epsilon, order);
  }
  return reg.tau0 * acc;
}

Complex sift(const ScalarField2D& f, const PointSource& source,
             const DeltaRegularization& reg) {
  const double b = static_cast<double>(to_int(source.beta));
  const auto at = [&](double tau) {
    return std::pair{source.x1 + reg.alpha1 * tau,
                     source.x2 + b * reg.alpha2 * tau};
  };
  // The contour is a straight segment and the window is convex, so checking
  // the endpoints covers every quadrature node.
  for (double end : {-reg.tau0, reg.tau0}) {
    const auto [e1, e2] = at(end);
    if (!f.window().contains(e1, e2))
      throw std::domain_error("sift: contour leaves the evaluation window");
  }
  return delta_moment(
      [&](double tau) {
        const auto [p1, p2] = at(tau);
        return f(p1, p2);
      },
      reg, 0);
}

double CrCheck::cancellation() const {
  return std::abs(term_derivative + term_delta);
}

double CrCheck::deviation() const {
  return std::max(std::abs(term_derivative - limit),
                  std::abs(term_delta + limit));
}

double CrCheck::magnitude_mismatch() const {
  const double m1 = std::abs(term_derivative);
  const double m2 = std::abs(term_delta);
  const double scale = std::max(m1, m2);
  return scale == 0.0 ? 0.0 : std::abs(m1 - m2) / scale;
}

CrCheck profile_cr_check(const RadialProfile& p, double s0,
                         const DeltaRegularization& reg) {
  CrCheck out;
  out.term_derivative = delta_moment(
      [&](double tau) { return Complex{p.derivative(s0 + tau), 0.0}; }, reg, 0);
  out.term_delta = delta_moment(
      [&](double tau) { return Complex{p.value(s0 + tau), 0.0}; }, reg, 1);
  out.limit = Complex{p.derivative(s0), 0.0};
  return out;
}

CrCheck cpf_cr_check(const ComplexPointFunction& phi,
                     const DeltaRegularization& reg) {
  return profile_cr_check(as_radial(phi.profile()), 1.0, reg);
}

double cpf_cr_residual(const ComplexPointFunction& phi,
                       const DeltaRegularization& reg) {
  return cpf_cr_check(phi, reg).deviation();
}

NormalizationResult normalization_check(const ComplexPointFunction& phi,
                                        const DeltaRegularization& reg) {
  const double k2 = phi.profile().kappa * phi.profile().kappa;
  // Squared profile with the scaled coordinate and its conjugate treated as
  // independent line parameters; each delta factor sifts one of them.
  const auto kernel = [k2](double zeta, double zeta_conj) {
    return std::exp(-k2 * (zeta * zeta_conj - 1.0));
  };
  const Complex scaled = delta_moment(
      [&](double tau_outer) {
        return delta_moment(
            [&](double tau_inner) {
              return Complex{kernel(1.0 + tau_outer, 1.0 + tau_inner), 0.0};
            },
            reg, 0);
      },
      reg, 0);
  NormalizationResult out;
  out.scaled = scaled.real();
  const double m = phi.source().magnitude();
  out.raw = m * m * out.scaled;
  return out;
}

double HarmonicityCheck::cancellation() const {
  return std::abs(term_second + 2.0 * term_cross + term_delta2);
}

double HarmonicityCheck::deviation() const {
  return std::max({std::abs(term_second - limit), std::abs(term_cross + limit),
                   std::abs(term_delta2 - limit)});
}

HarmonicityCheck profile_harmonicity_check(const RadialProfile& p, double s0,
                                           const DeltaRegularization& reg) {
  HarmonicityCheck out;
  out.term_second = delta_moment(
      [&](double tau) { return Complex{p.second_derivative(s0 + tau), 0.0}; },
      reg, 0);
  out.term_cross = delta_moment(
      [&](double tau) { return Complex{p.derivative(s0 + tau), 0.0}; }, reg, 1);
  out.term_delta2 = delta_moment(
      [&](double tau) { return Complex{p.value(s0 + tau), 0.0}; }, reg, 2);
  out.limit = Complex{p.second_derivative(s0), 0.0};
  return out;
}

double radial_laplacian(const RadialProfile& p, double s) {
  if (s == 0.0) throw std::invalid_argument("radial_laplacian: s must be != 0");
  return p.second_derivative(s) + p.derivative(s) / s;
}

Complex regularized_realization(const ComplexPointFunction& phi, double x1,
                                double x2, double epsilon) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument(
        "regularized_realization: epsilon must be > 0");
  const Complex offset = phi.zeta(x1, x2) - 1.0;
  const double r2 = offset.real() * offset.real() +
                    offset.imag() * offset.imag();
  const double bump = std::exp(-r2 / (epsilon * epsilon)) *
                      std::numbers::inv_sqrtpi / epsilon;
  return Complex{phi.profile_value(x1, x2) * bump, 0.0};
}

double regularized_laplacian_residual(const ComplexPointFunction& phi,
                                      double x1, double x2, double epsilon,
                                      double step) {
  if (!(step > 0.0))
    throw std::invalid_argument(
        "regularized_laplacian_residual: step must be > 0");
  const auto f = [&](double a, double b) {
    return regularized_realization(phi, a, b, epsilon);
  };
  const Complex lap = (f(x1 + step, x2) + f(x1 - step, x2) +
                       f(x1, x2 + step) + f(x1, x2 - step) -
                       4.0 * f(x1, x2)) /
                      (step * step);
  return std::abs(lap);
}

}  // namespace cpflab
