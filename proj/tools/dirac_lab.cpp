// Dirac laboratory - command-line front end
//
// dirac_lab {horizons|symbol|spectrum|evolve|validate} <config> [options]
// Exit codes: 0 success, 2 configuration, 3 numerical contract, 4 window violation.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "dirac/config.hpp"
#include "dirac/evolution.hpp"
#include "dirac/geometry.hpp"
#include "dirac/hamiltonian.hpp"
#include "dirac/io.hpp"
#include "dirac/spectral.hpp"
#include "dirac/spinor_algebra.hpp"

namespace fs = std::filesystem;
using namespace dirac;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitWindow = 4;

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string(what) + ": cannot parse '" + item + "'");
    }
  }
  return out;
}

fs::path output_dir(const RunConfig& cfg) {
  fs::path dir(cfg.output.directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "'");
  return dir;
}

// Default initial data: a bump inside the collar, straddling the cutoff blend.
CVec default_bump(const RunConfig& cfg, const DiscreteHamiltonian& H, double r_center,
                  double r_radius) {
  const double r0 = cfg.metric.r0;
  const double width = 0.5 * config_r_max(cfg);
  BumpSpec b;
  b.r_center = r_center > 0.0 ? r_center : r0 + 0.6 * width;
  b.r_radius = r_radius > 0.0 ? r_radius : 0.35 * width;
  b.p_max = cfg.spectral.p_max;
  b.spinor = CVec::Zero(H.f());
  for (int c = 0; c < H.f(); ++c) b.spinor(c) = Cplx(1.0 / (1 + c), 0.5 * c);
  b.spinor.normalize();
  return make_bump_data(H, b);
}

int cmd_horizons(const RunConfig& cfg) {
  const auto closure = config_metric(cfg);
  const double lo = std::max(1e-3, closure->radial_range().first + 1e-6);
  const double hi = std::max(cfg.grid.r_outer, 4.0 * cfg.metric.M);
  std::cout << "source,r\n" << std::setprecision(12);
  for (double r : closure->known_horizons()) std::cout << "closed_form," << r << '\n';
  for (double r : locate_horizons(*closure, lo, hi)) std::cout << "grid_scan," << r << '\n';
  return 0;
}

int cmd_symbol(const RunConfig& cfg, const std::string& at, const std::string& xi_text) {
  const auto closure = config_metric(cfg);
  const int d = closure->dimension();
  const auto x = parse_list(at, "--at");
  const auto xi_in = parse_list(xi_text, "--xi");
  if (x.size() != 2) throw ConfigError("--at expects r,theta");
  if (xi_in.size() < 2 || static_cast<int>(xi_in.size()) > d - 1)
    throw ConfigError("--xi expects " + std::to_string(d - 1) + " spatial components (or 2)");
  RVec spatial = RVec::Zero(d - 1);
  spatial(0) = x[0];
  if (d == 4) spatial(1) = x[1];
  RVec xi = RVec::Zero(d - 1);
  for (size_t i = 0; i < xi_in.size(); ++i) xi(i) = xi_in[i];
  const auto rep = flat_clifford_rep(d);
  const SymbolSample s = principal_symbol(*closure, rep, closure->point(spatial), xi);
  std::cout << std::setprecision(12) << "row,col,re,im\n";
  for (int i = 0; i < s.P.rows(); ++i)
    for (int j = 0; j < s.P.cols(); ++j)
      std::cout << i << ',' << j << ',' << s.P(i, j).real() << ',' << s.P(i, j).imag() << '\n';
  const double rel = std::abs(s.detP - s.det_formula) / std::max(1e-300, std::abs(s.detP));
  std::cout << "# det direct  = " << s.detP << "\n# det formula = " << s.det_formula
            << "\n# relative difference = " << rel << '\n';
  return 0;
}

int cmd_spectrum(const RunConfig& cfg) {
  const auto closure = config_metric(cfg);
  const Grid grid = config_grid(cfg, *closure);
  const RegionX X = build_region_X(grid, *closure, config_r_max(cfg), config_operator(cfg));
  const double herm = hermiticity_residual(X.H.H_red, X.H.w_red);
  const SpectralBasis b = eigendecompose_X(X.H.H_red, X.H.w_red, cfg.tolerances.hermiticity);
  const double ortho = orthonormality_residual(b);
  const fs::path path = output_dir(cfg) / "spectrum.csv";
  std::ofstream out(path);
  write_spectrum_csv(out, b, boundary_participation(b, X.H));
  std::cout << std::setprecision(6) << "X = [" << cfg.metric.r0 << ", " << X.r_mid << "], "
            << b.size() << " modes -> " << path.string() << '\n'
            << "hermiticity residual    " << herm << '\n'
            << "orthonormality residual " << ortho << '\n'
            << "smallest |omega|:";
  for (double w : smallest_abs_eigenvalues(b, cfg.spectral.n_eigs)) std::cout << ' ' << w;
  std::cout << '\n';
  if (ortho > cfg.tolerances.orthonormality) {
    std::cerr << "orthonormality residual above tolerance\n";
    return kExitNumerical;
  }
  return 0;
}

void summarize(const char* label, const EvolutionTrace& tr) {
  double bres = 0.0, glue = 0.0;
  for (double v : tr.boundary_residual) bres = std::max(bres, v);
  for (double v : tr.gluing_discrepancy) glue = std::max(glue, v);
  std::cout << std::setprecision(6) << label << ": " << tr.t.size() - 1 << " windows to t = "
            << tr.t.back() << ", w-norm drift " << std::abs(tr.w_norm.back() - tr.w_norm.front())
            << ", max boundary residual " << bres << ", max gluing discrepancy " << glue << '\n';
}

void write_trace(const fs::path& dir, const std::string& stem, const SplitSolver& S,
                 const EvolutionTrace& tr) {
  std::ofstream csv(dir / (stem + "_diagnostics.csv"));
  write_diagnostics_csv(csv, tr);
  for (size_t i = 0; i < tr.snapshots.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "%s_%04zu.dirh", stem.c_str(), i);
    write_snapshot_file((dir / name).string(), make_snapshot(S.grid, S.reference.f(), tr.snapshots[i]));
  }
}

int cmd_evolve(const RunConfig& cfg, const std::string& mode_flag, double r_center,
               double r_radius) {
  const std::string mode = mode_flag.empty() ? cfg.evolution.mode : mode_flag;
  if (mode != "split" && mode != "reference" && mode != "both")
    throw ConfigError("--mode must be split, reference or both");
  const auto closure = config_metric(cfg);
  const SplitSolver S(config_grid(cfg, *closure), closure, config_operator(cfg),
                      config_r_max(cfg));
  const EvolutionConfig ec = config_evolution(cfg);
  const CVec psi0 = default_bump(cfg, S.reference, r_center, r_radius);
  const fs::path dir = output_dir(cfg);
  std::cout << "eps = " << S.epsilon << " (v_max = " << S.v_max << "), window "
            << ec.window_fraction * S.epsilon << ", scheme " << scheme_name(ec.scheme) << '\n';
  if (mode != "reference") {
    const EvolutionTrace tr = evolve_cauchy(S, psi0, ec);
    summarize("split", tr);
    write_trace(dir, "split", S, tr);
  }
  if (mode != "split") {
    const EvolutionTrace tr = reference_evolve(S, psi0, ec);
    summarize("reference", tr);
    write_trace(dir, "reference", S, tr);
  }
  return 0;
}

struct Check {
  std::string name;
  double value;
  double limit;
};

int cmd_validate(const RunConfig& cfg) {
  const auto closure = config_metric(cfg);
  const Grid grid = config_grid(cfg, *closure);
  const OperatorOptions opts = config_operator(cfg);
  const auto rep = flat_clifford_rep(closure->dimension());
  std::vector<Check> checks;

  // Clifford relations at seeded random nodes
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> pick_r(0, grid.nr() - 1), pick_t(0, grid.nth() - 1);
  double cliff = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const MetricSample s = closure->sample(closure->point(grid.spatial(pick_r(rng), pick_t(rng))));
    const auto gam = curved_gammas(rep, build_vielbein(s));
    const int d = s.dim();
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        const CMat ac = gam[j] * gam[k] + gam[k] * gam[j];
        const CMat want = 2.0 * s.ginv(j, k) * CMat::Identity(rep.f, rep.f);
        cliff = std::max(cliff, (ac - want).cwiseAbs().maxCoeff());
      }
  }
  checks.push_back({"clifford anticommutator", cliff, 1e-12});

  const SplitSolver S(grid, closure, opts, config_r_max(cfg));
  checks.push_back({"reduced operator hermiticity",
                    hermiticity_residual(S.reference.H_red, S.reference.w_red),
                    cfg.tolerances.hermiticity});
  checks.push_back({"X orthonormality", orthonormality_residual(S.basis),
                    cfg.tolerances.orthonormality});

  const CVec psi0 = default_bump(cfg, S.reference, 0.0, 0.0);
  double compat = 0.0;
  for (double v : compatibility_residuals(S.reference, psi0, cfg.spectral.p_max))
    compat = std::max(compat, v);
  checks.push_back({"compatibility residuals of bump data", compat, 0.0});

  EvolutionConfig ec = config_evolution(cfg);
  ec.T_final = std::min(std::abs(cfg.evolution.T_final), 4.0 * ec.window_fraction * S.epsilon);
  ec.snapshot_every = 0;
  const EvolutionTrace tr = evolve_cauchy(S, psi0, ec);
  double bres = 0.0, glue = 0.0;
  for (double v : tr.boundary_residual) bres = std::max(bres, v);
  for (double v : tr.gluing_discrepancy) glue = std::max(glue, v);
  checks.push_back({"boundary residual during evolution", bres, cfg.tolerances.boundary});
  checks.push_back({"relative w-norm drift",
                    std::abs(tr.w_norm.back() - tr.w_norm.front()) / tr.w_norm.front(),
                    cfg.tolerances.norm});

  bool ok = true;
  for (const auto& c : checks) {
    const bool pass = c.value <= c.limit;
    ok = ok && pass;
    std::cout << (pass ? "PASS " : "FAIL ") << std::left << std::setw(40) << c.name
              << std::setprecision(3) << std::scientific << c.value << " (limit " << c.limit
              << ")\n";
  }
  std::cout << std::defaultfloat << "max gluing discrepancy (informational) " << glue << '\n';
  return ok ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirac laboratory: Dirac operator on horizon-penetrating slices"};
  app.require_subcommand(1);
  std::string config_path;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "configuration file (section.key = value)")
        ->required();
  };

  auto* horizons = app.add_subcommand("horizons", "closed-form and grid-scan horizon radii");
  add_config(horizons);
  auto* symbol = app.add_subcommand("symbol", "principal symbol and determinant check");
  add_config(symbol);
  std::string at, xi;
  symbol->add_option("--at", at, "r,theta")->required();
  symbol->add_option("--xi", xi, "covector components")->required();
  auto* spectrum = app.add_subcommand("spectrum", "eigenbasis of the collar problem");
  add_config(spectrum);
  auto* evolve = app.add_subcommand("evolve", "split and/or reference evolution");
  add_config(evolve);
  std::string mode;
  double r_center = 0.0, r_radius = 0.0;
  evolve->add_option("--mode", mode, "split | reference | both (default: evolution.mode)");
  evolve->add_option("--bump-center", r_center, "radial centre of the initial bump");
  evolve->add_option("--bump-radius", r_radius, "radial half-width of the initial bump");
  auto* validate = app.add_subcommand("validate", "invariant suite for one configuration");
  add_config(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const RunConfig cfg = load_config(config_path);
    if (horizons->parsed()) return cmd_horizons(cfg);
    if (symbol->parsed()) return cmd_symbol(cfg, at, xi);
    if (spectrum->parsed()) return cmd_spectrum(cfg);
    if (evolve->parsed()) return cmd_evolve(cfg, mode, r_center, r_radius);
    if (validate->parsed()) return cmd_validate(cfg);
  } catch (const WindowViolation& e) {
    std::cerr << "window violation: " << e.what() << '\n';
    return kExitWindow;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SignatureError& e) {
    std::cerr << "configuration error (causal structure): " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "configuration error (outside chart): " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical contract violated: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
