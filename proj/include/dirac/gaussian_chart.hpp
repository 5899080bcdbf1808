// Dirac laboratory - Gaussian normal chart of the slice near the inner boundary
//
// Coordinates (rho, Omega): rho is slice-geodesic distance from {r = r0} along the
// inner unit normal, Omega are the boundary coordinates (phi for d = 3, (theta, phi)
// for d = 4). The azimuth is handled by symmetry, so geodesics are integrated only
// from boundary points with phi = 0.

#ifndef DIRAC_GAUSSIAN_CHART_HPP_
#define DIRAC_GAUSSIAN_CHART_HPP_

#include <memory>
#include <vector>

#include "dirac/common.hpp"
#include "dirac/geometry.hpp"

namespace dirac {

// Raised when the chart cannot be built on [0, r_max): focal points, leaving the
// coordinate domain, or a failed injectivity check. The remedy is a smaller r_max.
class ChartError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

struct ChartOptions {
  int steps = 256;              // h_rho = r_max / steps
  double volume_tol = 1e-3;     // min allowed ratio sqrt(det g_N)(rho) / sqrt(det g_N)(0)
  double jacobi_delta = 1e-4;   // Omega offset for Jacobi fields (d = 4)
};

class GaussianChart {
 public:
  GaussianChart(std::shared_ptr<const MetricClosure> closure, double r0, double r_max,
                RVec boundary_theta, ChartOptions opts = {});

  int dimension() const { return closure_->dimension(); }
  double r0() const { return r0_; }
  double r_max() const { return r_max_; }
  double step() const { return r_max_ / opts_.steps; }
  const RVec& boundary_theta() const { return theta_; }
  // Richardson estimate |x_h - x_2h| / 15 of the geodesic endpoints, max over nodes.
  double richardson_error() const { return richardson_; }

  // Spatial chart coordinates (size d-1) of the point (rho, Omega). Omega has size d-2:
  // (phi) for d = 3, (theta, phi) for d = 4.
  RVec map(double rho, const RVec& omega) const;
  // Inverse of map by Newton iteration; returns (rho, Omega).
  RVec inverse(const RVec& spatial) const;
  // Pulled-back slice metric in (rho, Omega) coordinates, (d-1) x (d-1).
  RMat slice_metric(double rho, const RVec& omega) const;
  // Spacetime Jacobian d x / d(t, rho, Omega) at the boundary point with angles omega.
  RMat boundary_jacobian(const RVec& omega) const;
  // Inner unit normal of {r = r0} in the slice at spatial point x (contravariant, size d-1).
  RVec inner_normal(const RVec& spatial) const;

  const MetricClosure& closure() const { return *closure_; }

 private:
  struct Track {
    std::vector<RVec> x;   // per step, spatial coordinates
    std::vector<RVec> v;   // dx/drho
    std::vector<RVec> dtheta;  // dx/dtheta0 (d = 4 only)
  };
  Track integrate(const RVec& x0, int steps) const;
  RVec boundary_point(const RVec& omega) const;
  RVec eval(const Track& tr, double rho) const;
  RVec eval_velocity(const Track& tr, double rho) const;
  Track track_for(double theta) const;
  RMat jacobian(double rho, const RVec& omega) const;

  std::shared_ptr<const MetricClosure> closure_;
  double r0_;
  double r_max_;
  RVec theta_;
  ChartOptions opts_;
  std::vector<Track> tracks_;
  double richardson_ = 0.0;
};

GaussianChart gaussian_normal_chart(std::shared_ptr<const MetricClosure> closure, double r0,
                                    double r_max, const RVec& boundary_theta,
                                    ChartOptions opts = {});

}  // namespace dirac

#endif  // DIRAC_GAUSSIAN_CHART_HPP_
