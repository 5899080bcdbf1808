// Dirac laboratory - stationary metrics in co-moving charts
//
// All charts order coordinates as (t, r, angles...). The Killing field is
// K = d/dt in every chart; for Kerr the azimuth is co-rotating, phi' = phi - b t,
// so that the mixing constant b never leaks into downstream code.

#ifndef DIRAC_GEOMETRY_HPP_
#define DIRAC_GEOMETRY_HPP_

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dirac/common.hpp"

namespace dirac {

// Spacetime point, coordinates in chart order (t, r, angles...).
using Point = RVec;

struct MetricSample {
  RMat g;                // g_ij
  std::vector<RMat> dg;  // dg[k](i, j) = d_k g_ij
  RMat ginv;             // g^ij
  double detg = 0.0;

  int dim() const { return static_cast<int>(g.rows()); }
  // (g_N)_ab = -g_ab on the spatial block.
  RMat slice_metric() const;
};

struct KerrParams {
  double M = 1.0;
  double a = 0.0;
  double b = 0.0;   // Killing mix: K = d_tau + b d_phi
  double r0 = 0.5;  // inner boundary radius
};

class MetricClosure {
 public:
  virtual ~MetricClosure() = default;

  virtual int dimension() const = 0;
  virtual std::string name() const = 0;
  // Analytic components and first derivatives. Throws DomainError off-chart.
  virtual MetricSample sample(const Point& p) const = 0;
  // Coordinate indices the components do not depend on (t always, plus the azimuth).
  virtual std::vector<int> symmetry_directions() const { return {0}; }
  // Index of the mode-reduced angle (e^{ik phi}), or -1 when the chart has none.
  virtual int azimuth_index() const { return -1; }
  // Allowed open interval of the radial coordinate.
  virtual std::pair<double, double> radial_range() const = 0;
  // Closed-form horizon radii when known (used for precondition checks only).
  virtual std::vector<double> known_horizons() const { return {}; }
  // A chart point with spatial coordinates `spatial` (size d-1) at t = 0.
  Point point(const RVec& spatial) const;

  // K^i in the chart; always the unit vector along t.
  RVec killing() const;
  // Largest |omega| of the characteristic cone g^ij k_i k_j = 0 for k = (-omega, e_axis).
  double characteristic_speed(const Point& p, int axis) const;
};

// Ingoing Eddington-Finkelstein-type Kerr chart (tau, r, theta, phi'), d = 4.
class KerrEF final : public MetricClosure {
 public:
  explicit KerrEF(KerrParams params);
  int dimension() const override { return 4; }
  std::string name() const override;
  MetricSample sample(const Point& p) const override;
  std::vector<int> symmetry_directions() const override { return {0, 3}; }
  int azimuth_index() const override { return 3; }
  std::pair<double, double> radial_range() const override;
  std::vector<double> known_horizons() const override;
  const KerrParams& params() const { return params_; }

 private:
  KerrParams params_;
};

// 2+1 dimensional EF-Schwarzschild-like family (t, r, phi):
// ds^2 = (1-2M/r) dt^2 - (4M/r) dt dr - (1+2M/r) dr^2 - r^2 dphi^2, horizon at r = 2M.
class EFSchwarzschild3 final : public MetricClosure {
 public:
  explicit EFSchwarzschild3(double M) : M_(M) {}
  int dimension() const override { return 3; }
  std::string name() const override { return "ef_schwarzschild3"; }
  MetricSample sample(const Point& p) const override;
  std::vector<int> symmetry_directions() const override { return {0, 2}; }
  int azimuth_index() const override { return 2; }
  std::pair<double, double> radial_range() const override;
  std::vector<double> known_horizons() const override { return {2.0 * M_}; }

 private:
  double M_;
};

// Minkowski in the polar chart (t, r, phi), d = 3.
class FlatPolar final : public MetricClosure {
 public:
  int dimension() const override { return 3; }
  std::string name() const override { return "flat"; }
  MetricSample sample(const Point& p) const override;
  std::vector<int> symmetry_directions() const override { return {0, 2}; }
  int azimuth_index() const override { return 2; }
  std::pair<double, double> radial_range() const override;
};

// Minkowski in Cartesian coordinates (t, x, y[, z]); the last coordinate is mode-reduced.
class FlatCartesian final : public MetricClosure {
 public:
  explicit FlatCartesian(int d);
  int dimension() const override { return d_; }
  std::string name() const override { return "flat_cartesian"; }
  MetricSample sample(const Point& p) const override;
  std::vector<int> symmetry_directions() const override;
  int azimuth_index() const override { return d_ - 1; }
  std::pair<double, double> radial_range() const override;

 private:
  int d_;
};

// Ultrastatic spacetime over a round 2-sphere of radius R, chart (t, chi, phi).
// Normal geodesics leaving the circle chi = chi0 refocus at distance R (pi - chi0).
class SphereSlice final : public MetricClosure {
 public:
  explicit SphereSlice(double R) : R_(R) {}
  int dimension() const override { return 3; }
  std::string name() const override { return "sphere_slice"; }
  MetricSample sample(const Point& p) const override;
  std::vector<int> symmetry_directions() const override { return {0, 2}; }
  int azimuth_index() const override { return 2; }
  std::pair<double, double> radial_range() const override;

 private:
  double R_;
};

// Kerr EF sample at p for the given parameters (co-rotating chart when b != 0).
MetricSample kerr_ef_sample(const KerrParams& params, const Point& p);

// (r_minus, r_plus) = M -/+ sqrt(M^2 - a^2). Throws ConfigError for |a| >= M.
std::pair<double, double> horizon_radii(double M, double a);

// <K, K> = g_ij K^i K^j.
double killing_norm(const MetricClosure& closure, const Point& p);

// Gamma[i](j, k) = Gamma^i_jk of the Levi-Civita connection.
std::vector<RMat> christoffels(const MetricSample& s);
std::vector<RMat> christoffels(const MetricClosure& closure, const Point& p);

// Raised by find_timelike_mix when no b in range makes K timelike on the boundary.
class InfeasibleMix : public SignatureError {
 public:
  InfeasibleMix(double best_b, double deficit);
  double best_b;
  double deficit;  // -max_b min_theta <K,K> >= 0
};

struct TimelikeMix {
  double b = 0.0;
  double min_norm = 0.0;  // min over sampled theta of <K,K> at r0
};

// Choose b maximising min_theta <d_t + b d_phi, d_t + b d_phi> at r = r0.
// `base` must be the non-rotating chart (b = 0).
TimelikeMix find_timelike_mix(const MetricClosure& base, double r0,
                              std::pair<double, double> b_range, int n_samples);
TimelikeMix find_timelike_mix(const KerrParams& params, double r0,
                              std::pair<double, double> b_range, int n_samples);

// Factory used by the CLI: "kerr_ef", "ef_schwarzschild" (a = 0 Kerr), "ef_schwarzschild3",
// "flat", "flat_cartesian", "sphere_slice".
std::shared_ptr<const MetricClosure> make_metric(const std::string& kind, const KerrParams& params);

}  // namespace dirac

#endif  // DIRAC_GEOMETRY_HPP_
