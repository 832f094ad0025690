#include "cpflab/fock.hpp"

#include <algorithm>
#include <cmath>

namespace cpflab {

namespace {

double sqrt_factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return std::sqrt(f);
}

RadialProfile constant_profile() {
  return RadialProfile{[](double) { return 1.0; }, [](double) { return 0.0; },
                       [](double) { return 0.0; }};
}

}  // namespace

SymmetricState::SymmetricState(int n, Chirality beta, double mode_k,
                               double kappa, std::vector<PointSource> sources)
    : n_(n), beta_(beta), mode_k_(mode_k), kappa_(kappa),
      norm_coeff_(sqrt_factorial(n)), sources_(std::move(sources)) {
  if (n_ < 0) throw std::invalid_argument("SymmetricState: negative occupancy");
  if (static_cast<int>(sources_.size()) != n_)
    throw std::invalid_argument(
        "SymmetricState: occupancy does not match the source list");
  if (!(kappa_ > 0.0))
    throw std::invalid_argument("SymmetricState: kappa must be > 0");
  for (const auto& s : sources_)
    if (s.beta != beta_)
      throw std::invalid_argument("SymmetricState: mixed chirality sources");
  std::sort(sources_.begin(), sources_.end());
}

SymmetricState SymmetricState::vacuum(Chirality beta, double mode_k,
                                      double kappa) {
  return SymmetricState(0, beta, mode_k, kappa, {});
}

SymmetricState SymmetricState::identical(int n, const PointSource& source,
                                         double kappa, double mode_k) {
  return SymmetricState(n, source.beta, mode_k, kappa,
                        std::vector<PointSource>(n, source));
}

SymmetricState SymmetricState::from_sources(std::vector<PointSource> sources,
                                            double kappa, double mode_k) {
  if (sources.empty())
    throw std::invalid_argument("SymmetricState: empty source list");
  // Take the count before std::move: argument evaluation order is
  // unspecified, so size() must not race the move-construction.
  const int n = static_cast<int>(sources.size());
  const Chirality beta = sources.front().beta;
  return SymmetricState(n, beta, mode_k, kappa, std::move(sources));
}

bool SymmetricState::identical_sources() const {
  return std::adjacent_find(sources_.begin(), sources_.end(),
                            [](const PointSource& a, const PointSource& b) {
                              return !(a == b);
                            }) == sources_.end();
}

GaussianProfile SymmetricState::combined_profile() const {
  if (n_ < 1)
    throw std::logic_error("SymmetricState: the vacuum has no profile");
  return GaussianProfile(kappa_).powered(n_);
}

SymmetricState SymmetricState::with_occupancy(int m) const {
  if (!identical_sources())
    throw std::invalid_argument(
        "SymmetricState: occupancy change needs identical sources");
  // Raising from the vacuum attaches the canonical unit source.
  const PointSource proto =
      sources_.empty() ? PointSource(1.0, 0.0, beta_) : sources_.front();
  return SymmetricState(m, beta_, mode_k_, kappa_,
                        std::vector<PointSource>(m, proto));
}

SymmetricState SymmetricState::with_kappa(double kappa) const {
  return SymmetricState(n_, beta_, mode_k_, kappa, sources_);
}

SymmetricState symmetrize(const std::vector<ComplexPointFunction>& components,
                          double mode_k) {
  if (components.empty())
    throw std::invalid_argument("symmetrize: empty component list");
  const Chirality beta = components.front().beta();
  const double kappa = components.front().profile().kappa;
  std::vector<PointSource> sources;
  sources.reserve(components.size());
  for (const auto& c : components) {
    if (c.beta() != beta)
      throw std::invalid_argument("symmetrize: mixed chirality components");
    if (c.profile().kappa != kappa)
      throw std::invalid_argument("symmetrize: mixed width components");
    sources.push_back(c.source());
  }
  return SymmetricState::from_sources(std::move(sources), kappa, mode_k);
}

ScaledState annihilate(const SymmetricState& state) {
  if (state.n() == 0) return {0.0, state};
  return {std::sqrt(static_cast<double>(state.n())),
          state.with_occupancy(state.n() - 1)};
}

ScaledState create(const SymmetricState& state) {
  return {std::sqrt(static_cast<double>(state.n() + 1)),
          state.with_occupancy(state.n() + 1)};
}

int number_of(const SymmetricState& state) { return state.n(); }

LadderAlgebra::LadderAlgebra(int dim) : dim_(dim) {
  if (dim_ < 2) throw std::invalid_argument("LadderAlgebra: dim must be >= 2");
  annihilate_ = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (int n = 1; n < dim_; ++n)
    annihilate_(n - 1, n) = std::sqrt(static_cast<double>(n));
  create_ = annihilate_.adjoint();
  number_ = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (int n = 0; n < dim_; ++n) number_(n, n) = static_cast<double>(n);
}

Eigen::MatrixXcd LadderAlgebra::number_product() const {
  return create_ * annihilate_;
}

Eigen::VectorXcd LadderAlgebra::basis_state(int n) const {
  if (n < 0 || n >= dim_)
    throw std::out_of_range("LadderAlgebra: occupancy outside truncation");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim_);
  v(n) = 1.0;
  return v;
}

double LadderAlgebra::commutator_defect() const {
  const Eigen::MatrixXcd c =
      annihilate_ * create_ - create_ * annihilate_;
  double defect = 0.0;
  for (int m = 0; m + 1 < dim_; ++m)
    for (int n = 0; n + 1 < dim_; ++n) {
      const Complex expected = m == n ? 1.0 : 0.0;
      defect = std::max(defect, std::abs(c(m, n) - expected));
    }
  return defect;
}

double LadderAlgebra::top_level_artifact() const {
  const Eigen::MatrixXcd c =
      annihilate_ * create_ - create_ * annihilate_;
  return c(dim_ - 1, dim_ - 1).real();
}

std::vector<double> LadderAlgebra::number_eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(number_);
  const auto& ev = solver.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

double commutator_defect(const LadderAlgebra& algebra) {
  return algebra.commutator_defect();
}

Complex regularized_state_value(const SymmetricState& state, double x1,
                                double x2, double epsilon) {
  if (state.n() == 0) return {1.0, 0.0};
  const GaussianProfile single(state.kappa());
  Complex acc{state.norm_coeff(), 0.0};
  for (const auto& src : state.sources())
    acc *= regularized_realization(ComplexPointFunction(src, single), x1, x2,
                                   epsilon);
  return acc;
}

double harmonicity_residual(const SymmetricState& state,
                            const ChiralCoordinate& at,
                            const DeltaRegularization& reg, double step) {
  if (at.beta != state.beta())
    throw std::invalid_argument(
        "harmonicity_residual: coordinate chirality disagrees with state");
  if (!(step > 0.0))
    throw std::invalid_argument("harmonicity_residual: step must be > 0");
  const Window window{};
  if (!window.contains_with_margin(at.x1, at.x2, step))
    throw std::domain_error(
        "harmonicity_residual: stencil outside evaluation window");
  const auto f = [&](double a, double b) {
    return regularized_state_value(state, a, b, reg.epsilon);
  };
  const Complex lap = (f(at.x1 + step, at.x2) + f(at.x1 - step, at.x2) +
                       f(at.x1, at.x2 + step) + f(at.x1, at.x2 - step) -
                       4.0 * f(at.x1, at.x2)) /
                      (step * step);
  return std::abs(lap);
}

HarmonicityCheck state_harmonicity_check(const SymmetricState& state,
                                         const DeltaRegularization& reg) {
  const RadialProfile p = state.n() >= 1 ? as_radial(state.combined_profile())
                                         : constant_profile();
  return profile_harmonicity_check(p, 1.0, reg);
}

double harmonicity_contour_residual(const SymmetricState& state,
                                    const DeltaRegularization& reg) {
  return state_harmonicity_check(state, reg).deviation();
}

double unconstrained_laplacian_residual(const SymmetricState& state,
                                        double x1, double x2, double step) {
  if (!(step > 0.0))
    throw std::invalid_argument(
        "unconstrained_laplacian_residual: step must be > 0");
  if (state.n() == 0) return 0.0;
  const ComplexPointFunction bare(state.sources().front(),
                                  state.combined_profile());
  const auto f = [&](double a, double b) {
    return state.norm_coeff() * bare.profile_value(a, b);
  };
  const double lap = (f(x1 + step, x2) + f(x1 - step, x2) +
                      f(x1, x2 + step) + f(x1, x2 - step) -
                      4.0 * f(x1, x2)) /
                     (step * step);
  return std::abs(lap);
}

}  // namespace cpflab
