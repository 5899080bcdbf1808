// Dirac laboratory - run configuration
//
// Line format: `section.key = value`, `#` starts a comment. Every key has a default, so an
// empty file is a complete configuration.

#ifndef DIRAC_CONFIG_HPP_
#define DIRAC_CONFIG_HPP_

#include <cstdint>
#include <memory>
#include <string>

#include "dirac/evolution.hpp"
#include "dirac/geometry.hpp"
#include "dirac/grid.hpp"
#include "dirac/hamiltonian.hpp"

namespace dirac {

struct RunConfig {
  struct Metric {
    std::string kind = "flat";  // kerr_ef | ef_schwarzschild | ef_schwarzschild3 | flat
    double M = 1.0;
    double a = 0.0;
    bool b_auto = false;
    double b = 0.0;
    double r0 = 1.0;  // inner face
    bool operator==(const Metric&) const = default;
  } metric;
  struct GridCfg {
    int Nr = 256;       // radial intervals
    int Ntheta = 8;     // polar nodes (ignored for d = 3)
    double r_outer = 3.0;
    int k = 1;
    bool operator==(const GridCfg&) const = default;
  } grid;
  struct Op {
    double m = 0.5;
    std::string potential = "none";  // none | scalar | broken
    double v0 = 0.0;
    int stencil_order = 2;
    bool operator==(const Op&) const = default;
  } op;
  struct Spectral {
    double r_mid = 0.0;  // outer face of X; 0 means halfway to r_outer
    int p_max = 4;
    int n_eigs = 10;
    bool operator==(const Spectral&) const = default;
  } spectral;
  struct Evol {
    double T_final = 1.0;
    double dt = 5e-3;
    std::string scheme = "crank_nicolson";  // crank_nicolson | rk4 | exponential
    double cfl = 1.0;
    double window_fraction = 0.5;  // window length as a fraction of eps
    double support_threshold = 1e-10;
    double window_threshold = 1e-8;
    std::string mode = "split";  // split | reference | both
    bool operator==(const Evol&) const = default;
  } evolution;
  struct Output {
    std::string directory = "out";
    int snapshot_every = 1;
    bool operator==(const Output&) const = default;
  } output;
  struct Tolerances {
    double hermiticity = 1e-12;
    double orthonormality = 1e-10;
    double boundary = 1e-10;
    double norm = 1e-8;
    bool operator==(const Tolerances&) const = default;
  } tolerances;
  std::uint64_t seed = 20240531;

  bool operator==(const RunConfig&) const = default;
};

// Throws ConfigError("line N: ...") on unknown keys, malformed values and range violations.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

// Objects built from a configuration.
std::shared_ptr<const MetricClosure> config_metric(const RunConfig& cfg);
Grid config_grid(const RunConfig& cfg, const MetricClosure& closure);
OperatorOptions config_operator(const RunConfig& cfg);
EvolutionConfig config_evolution(const RunConfig& cfg);
// r_max of the collar construction: 2 (r_mid - r0).
double config_r_max(const RunConfig& cfg);

}  // namespace dirac

#endif  // DIRAC_CONFIG_HPP_
