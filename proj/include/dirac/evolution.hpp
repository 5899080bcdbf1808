// Dirac laboratory - windowed split evolution and the monolithic reference
//
// Each window of length eps: psi = eta psi + (1 - eta) psi; the first part is evolved on
// the collar X by its eigenfunction series, the second on the full grid without the inner
// boundary condition, and the two results are added. The collar coordinate rho is
// r - r0 of the grid's radial axis.

#ifndef DIRAC_EVOLUTION_HPP_
#define DIRAC_EVOLUTION_HPP_

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/SparseLU>

#include "dirac/common.hpp"
#include "dirac/hamiltonian.hpp"
#include "dirac/spectral.hpp"

namespace dirac {

// eta = 1 on [0, r_max/8], 0 for rho >= r_max/4, smooth blend in between.
struct CutoffEta {
  double r_max = 1.0;
  double operator()(double rho) const;
};

// Largest radial characteristic speed over the grid nodes.
double max_radial_speed(const Grid& grid, const MetricClosure& closure);
// eps = r_max / (8 v_max). Throws NumericalError if v_max is not finite and positive.
double epsilon_from_lightcones(const Grid& grid, const MetricClosure& closure, double r_max,
                               double* v_max = nullptr);

struct SplitData {
  CVec boundary;  // eta psi
  CVec interior;  // psi - eta psi
};
SplitData split_initial(const Grid& grid, const CVec& psi0, const CutoffEta& eta);

enum class Scheme { CrankNicolson, RK4, Exponential };
Scheme parse_scheme(const std::string& s);
std::string scheme_name(Scheme s);

// Time stepping for a reduced w-Hermitian operator.
class Propagator {
 public:
  Propagator(const DiscreteHamiltonian& H, Scheme scheme);
  // Advance reduced coefficients by tau in n equal steps. `observe` (may be empty) is
  // called after each step (CN, RK4) or at n equally spaced times (exponential).
  CVec advance(const CVec& c, double tau, long n,
               const std::function<void(const CVec&)>& observe = {}) const;
  Scheme scheme() const { return scheme_; }

 private:
  const DiscreteHamiltonian* H_;
  Scheme scheme_;
  mutable std::map<double, std::shared_ptr<Eigen::SparseLU<SpMat>>> lu_;
  std::shared_ptr<SpectralBasis> basis_;
};

struct EvolutionConfig {
  double T_final = 0.0;
  double dt = 1e-2;
  Scheme scheme = Scheme::CrankNicolson;
  double cfl = 1.0;
  // window length = window_fraction * eps; must lie in (0, 1]
  double window_fraction = 0.5;
  double support_threshold = 1e-10;
  double window_threshold = 1e-8;
  double norm_tolerance = 1e-8;  // relative drift that triggers an instability error
  int snapshot_every = 1;        // windows between stored snapshots (0 = none)
  int monitor_samples = 4;       // intermediate checks of the series face amplitude
};

struct EvolutionTrace {
  std::vector<double> t;
  std::vector<double> w_norm;
  std::vector<double> boundary_residual;
  std::vector<double> support_lo;
  std::vector<double> support_hi;
  std::vector<double> support_radius;
  std::vector<double> gluing_discrepancy;
  std::vector<double> snapshot_t;
  std::vector<CVec> snapshots;  // full nodal vectors
  CVec final_state;
  double epsilon = 0.0;
  double v_max = 0.0;
  double max_face_excitation = 0.0;  // largest relative amplitude seen by the monitors
};

// Everything the split scheme needs for one configuration.
struct SplitSolver {
  Grid grid;
  std::shared_ptr<const MetricClosure> closure;
  OperatorOptions options;
  double r_max = 0.0;
  double epsilon = 0.0;
  double v_max = 0.0;
  DiscreteHamiltonian interior;   // inner face free, outer face chiral
  DiscreteHamiltonian reference;  // both faces chiral
  RegionX X;
  SpectralBasis basis;

  SplitSolver(const Grid& grid, std::shared_ptr<const MetricClosure> closure,
              const OperatorOptions& opts, double r_max);

  double w_norm(const CVec& full) const;
  // Inner and outer face residual of a full vector.
  double boundary_residual(const CVec& full) const;
};

// Window pieces on full nodal vectors. `threshold` is an absolute w-amplitude on the
// monitored face (inner face for the interior part, Y-face for the collar part); a breach
// throws WindowViolation. The largest amplitude seen is stored in *excitation.
CVec interior_evolve(const SplitSolver& S, const Propagator& P, const CVec& psi_I, double tau,
                     double dt, double threshold, double* excitation = nullptr);
CVec boundary_evolve(const SplitSolver& S, Scheme scheme, const CVec& psi_B, double tau,
                     double dt, double threshold, int monitor_samples,
                     double* excitation = nullptr);

EvolutionTrace evolve_cauchy(const SplitSolver& S, const CVec& psi0, const EvolutionConfig& cfg);
EvolutionTrace reference_evolve(const SplitSolver& S, const CVec& psi0,
                                const EvolutionConfig& cfg);

// Radial support [lo, hi] of a full vector at relative threshold.
std::pair<double, double> support_interval(const Grid& grid, int f, const CVec& full,
                                           double threshold);

struct SupportReport {
  bool ok = true;
  double worst_excess = 0.0;  // max over snapshots of growth - (v_max t + 2h), <= 0 when ok
};
SupportReport support_and_speed_check(const EvolutionTrace& trace, double v_max, double h);

}  // namespace dirac

#endif  // DIRAC_EVOLUTION_HPP_
