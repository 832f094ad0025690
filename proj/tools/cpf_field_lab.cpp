#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpflab/report.hpp"

namespace {

// Exit codes: 0 all checks pass, 1 failed check or evaluation error,
// 2 usage/config error, 3 report I/O error.
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

std::optional<cpflab::Chirality> parse_beta(const std::string& text) {
  if (text == "both") return std::nullopt;
  if (text == "+1" || text == "1") return cpflab::Chirality::Plus;
  if (text == "-1") return cpflab::Chirality::Minus;
  throw std::invalid_argument("beta must be +1, -1 or both, got: " + text);
}

int run_verify(const cpflab::RunConfig& config, const std::string& sweep_out) {
  cpflab::Report report;
  try {
    report = cpflab::run_suite(config);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFail;
  }

  try {
    cpflab::write_report(report, config);
    if (!sweep_out.empty())
      cpflab::export_sweep_csv(sweep_out, cpflab::collect_sweep_points(report));
  } catch (const std::exception& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kExitIo;
  }

  std::size_t passed = 0;
  for (const auto& check : report.checks) passed += check.pass ? 1u : 0u;
  std::printf("suite %s: %zu checks, %zu passed\n", report.suite.c_str(),
              report.checks.size(), passed);
  for (const auto& check : report.checks) {
    if (check.pass) continue;
    std::printf(
        "  FAIL %s (n=%d, beta=%+d, kappa=%g, epsilon=%g): value=%.9g "
        "expected=%.9g rel_error=%.3g\n",
        check.observable.c_str(), check.n, check.beta, check.kappa,
        check.epsilon, check.value, check.expected, check.rel_error);
  }
  if (!config.output_path.empty())
    std::printf("report: %s\n", config.output_path.c_str());
  if (!sweep_out.empty()) std::printf("sweep: %s\n", sweep_out.c_str());
  return report.all_pass ? 0 : kExitFail;
}

int run_snapshot(const cpflab::SnapshotConfig& config) {
  try {
    cpflab::export_snapshot(config);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kExitIo;
  }
  std::printf("snapshot: %dx%d grid -> %s\n", config.grid, config.grid,
              config.output_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cpf-field-lab: verification suites for constrained"
               " point-function fields"};
  app.set_config("--config", "", "INI file with [verify]/[snapshot] defaults")
      ->envname("CPF_LAB_DEFAULTS");
  app.require_subcommand(1);

  std::string suite_text = "all";
  std::vector<double> epsilon_list{1e-2, 5e-3, 2.5e-3, 1.25e-3};
  double step = 1e-4;
  int n_max = 3;
  double kappa = 1.0;
  std::string beta_text = "both";
  std::string out_path = "cpf_report.json";
  std::string format_text = "json";
  std::string sweep_out;
  int fock_dim = 16;
  double epsilon_base = 1e-3;
  double hbar = 1.0;

  auto* verify =
      app.add_subcommand("verify", "run verification suites, write a report");
  verify->add_option("suite", suite_text,
                     "cr | cpf | fock | gauge | observables | all")
      ->capture_default_str();
  verify
      ->add_option("--epsilon", epsilon_list,
                   "convergence sweep resolutions, strictly decreasing")
      ->delimiter(',')
      ->capture_default_str();
  verify->add_option("--step", step, "finite-difference step")
      ->capture_default_str();
  verify->add_option("--n-max", n_max, "largest occupancy to check")
      ->capture_default_str();
  verify->add_option("--kappa", kappa, "profile width")
      ->capture_default_str();
  verify->add_option("--beta", beta_text, "chirality: +1, -1 or both")
      ->capture_default_str();
  verify->add_option("--out", out_path, "report path (empty: stdout only)")
      ->capture_default_str();
  verify->add_option("--format", format_text, "json | csv")
      ->capture_default_str();
  verify->add_option("--sweep-out", sweep_out,
                     "also export convergence sweep points as CSV");
  verify->add_option("--fock-dim", fock_dim, "ladder truncation dimension")
      ->capture_default_str();
  verify
      ->add_option("--epsilon-base", epsilon_base,
                   "resolution anchor for fixed-threshold checks")
      ->capture_default_str();
  verify->add_option("--hbar", hbar, "unit scale applied to reported values")
      ->capture_default_str();

  cpflab::SnapshotConfig snap;
  std::string snap_beta_text = "+1";
  std::string snap_format_text = "csv";
  snap.output_path = "cpf_snapshot.csv";
  auto* snapshot =
      app.add_subcommand("snapshot", "export a transverse field grid");
  snapshot->add_option("--grid", snap.grid, "nodes per axis")
      ->capture_default_str();
  snapshot->add_option("--extent", snap.extent, "half-width of the grid")
      ->capture_default_str();
  snapshot->add_option("--mode-k", snap.mode_k, "mode wavenumber")
      ->capture_default_str();
  snapshot->add_option("--t", snap.t, "time slice")->capture_default_str();
  snapshot->add_option("--x3", snap.x3, "longitudinal slice")
      ->capture_default_str();
  snapshot->add_option("--n", snap.n, "occupancy")->capture_default_str();
  snapshot->add_option("--kappa", snap.kappa, "profile width")
      ->capture_default_str();
  snapshot->add_option("--beta", snap_beta_text, "chirality: +1 or -1")
      ->capture_default_str();
  snapshot->add_option("--epsilon", snap.epsilon,
                       "transverse regularization width")
      ->capture_default_str();
  snapshot->add_option("--out", snap.output_path, "output path")
      ->capture_default_str();
  snapshot->add_option("--format", snap_format_text, "csv | json")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (verify->parsed()) {
      cpflab::RunConfig config;
      config.suite = cpflab::suite_from_string(suite_text);
      config.epsilon_list = epsilon_list;
      config.step = step;
      config.n_max = n_max;
      config.kappa = kappa;
      config.beta = parse_beta(beta_text);
      config.output_path = out_path;
      config.format = cpflab::format_from_string(format_text);
      config.fock_dim = fock_dim;
      config.epsilon_base = epsilon_base;
      config.hbar = hbar;
      config.validate();
      return run_verify(config, sweep_out);
    }
    const auto snap_beta = parse_beta(snap_beta_text);
    if (!snap_beta)
      throw std::invalid_argument("snapshot runs one chirality at a time");
    snap.beta = *snap_beta;
    snap.format = cpflab::format_from_string(snap_format_text);
    snap.validate();
    return run_snapshot(snap);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  }
}
