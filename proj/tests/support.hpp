// Dirac laboratory - shared helpers for the test programs

#ifndef DIRAC_TESTS_SUPPORT_HPP_
#define DIRAC_TESTS_SUPPORT_HPP_

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "dirac/evolution.hpp"
#include "dirac/geometry.hpp"
#include "dirac/grid.hpp"
#include "dirac/hamiltonian.hpp"
#include "dirac/spectral.hpp"

namespace dirac::testing {

inline constexpr double kPi = 3.14159265358979323846;

// Least-squares slope of log(err) against log(h).
inline double fit_order(const std::vector<double>& h, const std::vector<double>& err) {
  const int n = static_cast<int>(h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Rapidly rotating configuration inside the Cauchy horizon: a = 0.95, inner face r0 = 0.34,
// K = d_tau + b d_phi timelike on the inner face for the optimal b.
struct KerrSetup {
  KerrParams params;
  std::shared_ptr<const MetricClosure> closure;
  double r0 = 0.34;
  double r_outer = 0.64;
  double r_max = 0.3;
};

inline KerrSetup kerr_setup() {
  KerrSetup s;
  s.params.M = 1.0;
  s.params.a = 0.95;
  s.params.r0 = s.r0;
  s.params.b = find_timelike_mix(s.params, s.r0, {-6.0, 6.0}, 64).b;
  s.closure = make_metric("kerr_ef", s.params);
  return s;
}

inline std::shared_ptr<const MetricClosure> flat_polar() { return make_metric("flat", KerrParams{}); }

inline CVec random_spinor(std::mt19937_64& rng, int f) {
  std::normal_distribution<double> n(0.0, 1.0);
  CVec v(f);
  for (int i = 0; i < f; ++i) v(i) = Cplx(n(rng), n(rng));
  return v;
}

inline double w_norm(const CVec& v, const RVec& w) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += w(i) * std::norm(v(i));
  return std::sqrt(s);
}

// Smooth reduced-space field: random spinor times a few low radial/polar harmonics,
// pushed through the face reduction.
inline CVec smooth_reduced(const DiscreteHamiltonian& H, std::mt19937_64& rng) {
  const Grid& g = H.grid;
  const int f = H.f();
  const double r0 = g.r.nodes(0), r1 = g.r.nodes(g.nr() - 1);
  std::vector<CVec> c;
  for (int m = 0; m < 3; ++m) c.push_back(random_spinor(rng, f));
  CVec full(g.nodes() * f);
  for (int ir = 0; ir < g.nr(); ++ir) {
    const double x = (g.r.nodes(ir) - r0) / (r1 - r0);
    for (int j = 0; j < g.nth(); ++j) {
      const double th = g.theta.nodes(j);
      const CVec v = c[0] + std::cos(kPi * x) * c[1] + std::sin(th) * std::sin(2 * kPi * x) * c[2];
      full.segment(g.node(ir, j) * f, f) = v;
    }
  }
  return H.reduce(full);
}

}  // namespace dirac::testing

#endif  // DIRAC_TESTS_SUPPORT_HPP_
