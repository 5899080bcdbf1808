// Dirac laboratory - Gaussian normal chart of the slice near the inner boundary

#include "dirac/gaussian_chart.hpp"

#include <algorithm>
#include <cmath>

namespace dirac {

namespace {

struct SliceGeometry {
  RMat h;     // (g_N)_ab
  RMat hinv;  // inverse of h
  std::vector<RMat> gamma;  // gamma[a](b, c), slice Christoffels
};

SliceGeometry slice_geometry(const MetricClosure& closure, const RVec& y) {
  const MetricSample s = closure.sample(closure.point(y));
  const int n = s.dim() - 1;
  SliceGeometry sg;
  sg.h = s.slice_metric();
  sg.hinv = sg.h.inverse();
  std::vector<RMat> dh(n);
  for (int k = 0; k < n; ++k) dh[k] = -s.dg[k + 1].bottomRightCorner(n, n);
  sg.gamma.assign(n, RMat::Zero(n, n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        double sum = 0.0;
        for (int l = 0; l < n; ++l) {
          sum += sg.hinv(a, l) * (dh[b](l, c) + dh[c](l, b) - dh[l](b, c));
        }
        sg.gamma[a](b, c) = 0.5 * sum;
      }
    }
  }
  return sg;
}

// Geodesic right-hand side for state (y, v).
std::pair<RVec, RVec> geodesic_rhs(const MetricClosure& closure, const RVec& y, const RVec& v) {
  const SliceGeometry sg = slice_geometry(closure, y);
  RVec acc(y.size());
  for (int a = 0; a < y.size(); ++a) acc(a) = -v.dot(sg.gamma[a] * v);
  return {v, acc};
}

}  // namespace

GaussianChart::GaussianChart(std::shared_ptr<const MetricClosure> closure, double r0,
                             double r_max, RVec boundary_theta, ChartOptions opts)
    : closure_(std::move(closure)), r0_(r0), r_max_(r_max), theta_(std::move(boundary_theta)),
      opts_(opts) {
  if (!(r_max_ > 0.0)) throw ConfigError("Gaussian chart needs r_max > 0");
  if (opts_.steps < 4 || opts_.steps % 2 != 0) throw ConfigError("chart steps must be even, >= 4");
  const int d = closure_->dimension();
  if (d == 3) theta_ = RVec::Zero(1);
  if (theta_.size() == 0) throw ConfigError("Gaussian chart needs at least one boundary node");

  for (int i = 0; i < theta_.size(); ++i) {
    Track tr = track_for(theta_(i));
    // Richardson check of the integrator on the endpoint
    RVec omega = RVec::Zero(d - 2);
    if (d == 4) omega(0) = theta_(i);
    const Track coarse = integrate(boundary_point(omega), opts_.steps / 2);
    richardson_ = std::max(richardson_, (tr.x.back() - coarse.x.back()).norm() / 15.0);

    // injectivity: the Jacobian must stay non-degenerate along the track
    double vol0 = 0.0;
    double det0 = 0.0;
    for (int j = 0; j <= opts_.steps; ++j) {
      RMat J = RMat::Zero(d - 1, d - 1);
      J.col(0) = tr.v[j];
      if (d == 4) J.col(1) = tr.dtheta[j];
      J.col(d - 2) = RVec::Unit(d - 1, d - 2);
      const SliceGeometry sg = slice_geometry(*closure_, tr.x[j]);
      const double vol = std::sqrt(std::max(0.0, (J.transpose() * sg.h * J).determinant()));
      const double det = J.determinant();
      if (j == 0) {
        vol0 = vol;
        det0 = det;
        continue;
      }
      if (vol < opts_.volume_tol * vol0 || det * det0 <= 0.0) {
        throw ChartError("Gaussian chart not injective before rho = " +
                         std::to_string(j * step()) + " (neighbouring normal geodesics meet); "
                         "shrink r_max");
      }
    }
    tracks_.push_back(std::move(tr));
  }
}

RVec GaussianChart::boundary_point(const RVec& omega) const {
  const int d = dimension();
  RVec y = RVec::Zero(d - 1);
  y(0) = r0_;
  for (int a = 0; a < d - 2; ++a) y(a + 1) = omega(a);
  return y;
}

RVec GaussianChart::inner_normal(const RVec& spatial) const {
  const SliceGeometry sg = slice_geometry(*closure_, spatial);
  return sg.hinv.col(0) / std::sqrt(sg.hinv(0, 0));
}

GaussianChart::Track GaussianChart::integrate(const RVec& x0, int steps) const {
  const double h = r_max_ / steps;
  Track tr;
  RVec y = x0;
  RVec v = inner_normal(x0);
  tr.x.push_back(y);
  tr.v.push_back(v);
  try {
    for (int i = 0; i < steps; ++i) {
      const auto [k1y, k1v] = geodesic_rhs(*closure_, y, v);
      const auto [k2y, k2v] = geodesic_rhs(*closure_, y + 0.5 * h * k1y, v + 0.5 * h * k1v);
      const auto [k3y, k3v] = geodesic_rhs(*closure_, y + 0.5 * h * k2y, v + 0.5 * h * k2v);
      const auto [k4y, k4v] = geodesic_rhs(*closure_, y + h * k3y, v + h * k3v);
      y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
      v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      tr.x.push_back(y);
      tr.v.push_back(v);
    }
  } catch (const Error& e) {
    throw ChartError(std::string("normal geodesic left the chart: ") + e.what() +
                     "; shrink r_max");
  }
  return tr;
}

GaussianChart::Track GaussianChart::track_for(double theta) const {
  const int d = dimension();
  RVec omega = RVec::Zero(d - 2);
  if (d == 4) omega(0) = theta;
  Track tr = integrate(boundary_point(omega), opts_.steps);
  if (d == 4) {
    const double delta = opts_.jacobi_delta;
    RVec op = omega, om = omega;
    op(0) += delta;
    om(0) -= delta;
    const Track tp = integrate(boundary_point(op), opts_.steps);
    const Track tm = integrate(boundary_point(om), opts_.steps);
    for (std::size_t j = 0; j < tr.x.size(); ++j) {
      tr.dtheta.push_back((tp.x[j] - tm.x[j]) / (2.0 * delta));
    }
  }
  return tr;
}

RVec GaussianChart::eval(const Track& tr, double rho) const {
  const double h = step();
  const int n = static_cast<int>(tr.x.size()) - 1;
  if (rho < -1e-14 || rho > r_max_ * (1.0 + 1e-12)) throw DomainError("rho outside [0, r_max]");
  int i = std::clamp(static_cast<int>(std::floor(rho / h)), 0, n - 1);
  const double s = std::clamp(rho / h - i, 0.0, 1.0);
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * tr.x[i] + h10 * h * tr.v[i] + h01 * tr.x[i + 1] + h11 * h * tr.v[i + 1];
}

RVec GaussianChart::eval_velocity(const Track& tr, double rho) const {
  const double h = step();
  const int n = static_cast<int>(tr.x.size()) - 1;
  int i = std::clamp(static_cast<int>(std::floor(rho / h)), 0, n - 1);
  const double s = std::clamp(rho / h - i, 0.0, 1.0);
  const double d00 = 6 * s * s - 6 * s;
  const double d10 = 3 * s * s - 4 * s + 1;
  const double d01 = -6 * s * s + 6 * s;
  const double d11 = 3 * s * s - 2 * s;
  return (d00 * tr.x[i] + d01 * tr.x[i + 1]) / h + d10 * tr.v[i] + d11 * tr.v[i + 1];
}

RVec GaussianChart::map(double rho, const RVec& omega) const {
  const int d = dimension();
  if (omega.size() != d - 2) throw DomainError("Omega has the wrong number of angles");
  const double theta = d == 4 ? omega(0) : 0.0;
  RVec y;
  auto it = std::find_if(tracks_.begin(), tracks_.end(), [&](const Track& t) {
    return d == 3 || std::abs(t.x[0](1) - theta) < 1e-14;
  });
  if (it != tracks_.end()) {
    y = eval(*it, rho);
  } else {
    y = eval(track_for(theta), rho);
  }
  y(d - 2) += omega(d - 3);
  return y;
}

RMat GaussianChart::jacobian(double rho, const RVec& omega) const {
  const int d = dimension();
  const double theta = d == 4 ? omega(0) : 0.0;
  const Track tr = track_for(theta);
  RMat J = RMat::Zero(d - 1, d - 1);
  J.col(0) = eval_velocity(tr, rho);
  if (d == 4) {
    const double h = step();
    const int n = static_cast<int>(tr.x.size()) - 1;
    const int i = std::clamp(static_cast<int>(std::floor(rho / h)), 0, n - 1);
    const double s = std::clamp(rho / h - i, 0.0, 1.0);
    J.col(1) = (1.0 - s) * tr.dtheta[i] + s * tr.dtheta[i + 1];
  }
  J.col(d - 2) = RVec::Unit(d - 1, d - 2);
  return J;
}

RMat GaussianChart::slice_metric(double rho, const RVec& omega) const {
  const RMat J = jacobian(rho, omega);
  const SliceGeometry sg = slice_geometry(*closure_, map(rho, omega));
  return J.transpose() * sg.h * J;
}

RVec GaussianChart::inverse(const RVec& spatial) const {
  const int d = dimension();
  RVec out = RVec::Zero(d - 1);
  if (d == 3) {
    double rho = std::clamp(spatial(0) - r0_, 0.0, r_max_);
    const Track& tr = tracks_.front();
    for (int it = 0; it < 50; ++it) {
      const double f = eval(tr, rho)(0) - spatial(0);
      const double df = eval_velocity(tr, rho)(0);
      const double step_rho = f / df;
      rho = std::clamp(rho - step_rho, 0.0, r_max_);
      if (std::abs(step_rho) < 1e-14) break;
    }
    out(0) = rho;
    out(1) = spatial(1) - eval(tr, rho)(1);
    return out;
  }
  double rho = std::clamp(spatial(0) - r0_, 0.0, r_max_);
  double theta = spatial(1);
  for (int it = 0; it < 50; ++it) {
    RVec om(2);
    om << theta, 0.0;
    const RVec y = map(rho, om);
    const RMat J = jacobian(rho, om);
    RVec f(2);
    f << y(0) - spatial(0), y(1) - spatial(1);
    const RVec delta = J.topLeftCorner(2, 2).lu().solve(f);
    rho = std::clamp(rho - delta(0), 0.0, r_max_);
    theta -= delta(1);
    if (delta.norm() < 1e-13) break;
  }
  RVec om(2);
  om << theta, 0.0;
  out(0) = rho;
  out(1) = theta;
  out(2) = spatial(2) - map(rho, om)(2);
  return out;
}

RMat GaussianChart::boundary_jacobian(const RVec& omega) const {
  const int d = dimension();
  RMat J = RMat::Zero(d, d);
  J(0, 0) = 1.0;
  J.block(1, 1, d - 1, 1) = inner_normal(boundary_point(omega));
  for (int a = 2; a < d; ++a) J(a, a) = 1.0;
  return J;
}

GaussianChart gaussian_normal_chart(std::shared_ptr<const MetricClosure> closure, double r0,
                                    double r_max, const RVec& boundary_theta,
                                    ChartOptions opts) {
  return GaussianChart(std::move(closure), r0, r_max, boundary_theta, opts);
}

}  // namespace dirac
