// Dirac laboratory - stationary metrics in co-moving charts

#include "dirac/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dirac {

namespace {

constexpr double kPi = 3.14159265358979323846;

MetricSample finish(RMat g, std::vector<RMat> dg) {
  MetricSample s;
  s.detg = g.determinant();
  s.ginv = g.inverse();
  s.g = std::move(g);
  s.dg = std::move(dg);
  return s;
}

std::vector<RMat> zero_derivs(int d) { return std::vector<RMat>(d, RMat::Zero(d, d)); }

void check_dim(const Point& p, int d) {
  if (p.size() != d) {
    std::ostringstream msg;
    msg << "point has " << p.size() << " coordinates, chart expects " << d;
    throw DomainError(msg.str());
  }
}

void check_polar(double theta) {
  if (!(theta > 0.0 && theta < kPi) || std::sin(theta) < 1e-12) {
    throw DomainError("polar angle on or beyond the axis");
  }
}

}  // namespace

RMat MetricSample::slice_metric() const {
  const int n = dim() - 1;
  return -g.bottomRightCorner(n, n);
}

Point MetricClosure::point(const RVec& spatial) const {
  Point p = Point::Zero(dimension());
  p.tail(dimension() - 1) = spatial;
  return p;
}

RVec MetricClosure::killing() const {
  RVec k = RVec::Zero(dimension());
  k(0) = 1.0;
  return k;
}

double MetricClosure::characteristic_speed(const Point& p, int axis) const {
  const MetricSample s = sample(p);
  const double A = s.ginv(0, 0);
  const double B = s.ginv(0, axis);
  const double C = s.ginv(axis, axis);
  const double disc = std::max(0.0, B * B - A * C);
  const double root = std::sqrt(disc);
  return std::max(std::abs((B + root) / A), std::abs((B - root) / A));
}

//--------------------------------------------------------------------------------------------------
// Kerr

MetricSample kerr_ef_sample(const KerrParams& params, const Point& p) {
  check_dim(p, 4);
  const double M = params.M;
  const double a = params.a;
  const double r = p(1);
  const double theta = p(2);
  if (!(r > 0.0)) throw DomainError("Kerr EF chart requires r > 0");
  check_polar(theta);

  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  const double s2 = sn * sn;
  const double sigma = r * r + a * a * c * c;
  const double rho = 2.0 * M * r / sigma;

  // r and theta derivatives of the building blocks
  const double sigma_r = 2.0 * r;
  const double sigma_th = -2.0 * a * a * c * sn;
  const double rho_r = 2.0 * M * (sigma - 2.0 * r * r) / (sigma * sigma);
  const double rho_th = -2.0 * M * r * sigma_th / (sigma * sigma);
  const double s2_th = 2.0 * sn * c;

  RMat g = RMat::Zero(4, 4);
  g(0, 0) = 1.0 - rho;
  g(0, 1) = g(1, 0) = -rho;
  g(0, 3) = g(3, 0) = rho * a * s2;
  g(1, 1) = -(1.0 + rho);
  g(1, 3) = g(3, 1) = (1.0 + rho) * a * s2;
  g(2, 2) = -sigma;
  g(3, 3) = -(1.0 + rho) * a * a * s2 * s2 - sigma * s2;

  auto block = [&](double drho, double dsigma, double ds2) {
    RMat d = RMat::Zero(4, 4);
    d(0, 0) = -drho;
    d(0, 1) = d(1, 0) = -drho;
    d(0, 3) = d(3, 0) = a * (drho * s2 + rho * ds2);
    d(1, 1) = -drho;
    d(1, 3) = d(3, 1) = a * (drho * s2 + (1.0 + rho) * ds2);
    d(2, 2) = -dsigma;
    d(3, 3) = -a * a * (drho * s2 * s2 + 2.0 * (1.0 + rho) * s2 * ds2) - (dsigma * s2 + sigma * ds2);
    return d;
  };

  std::vector<RMat> dg = zero_derivs(4);
  dg[1] = block(rho_r, sigma_r, 0.0);
  dg[2] = block(rho_th, sigma_th, s2_th);

  if (params.b != 0.0) {
    // old coordinates x = J x' with phi = phi' + b tau
    RMat J = RMat::Identity(4, 4);
    J(3, 0) = params.b;
    g = J.transpose() * g * J;
    dg[1] = J.transpose() * dg[1] * J;
    dg[2] = J.transpose() * dg[2] * J;
  }
  return finish(std::move(g), std::move(dg));
}

KerrEF::KerrEF(KerrParams params) : params_(params) {
  if (!(params_.M > 0.0)) throw ConfigError("Kerr mass must be positive");
  if (std::abs(params_.a) >= params_.M) throw ConfigError("Kerr requires |a| < M (non-extreme)");
}

std::string KerrEF::name() const { return params_.a == 0.0 ? "ef_schwarzschild" : "kerr_ef"; }

MetricSample KerrEF::sample(const Point& p) const { return kerr_ef_sample(params_, p); }

std::pair<double, double> KerrEF::radial_range() const {
  return {0.0, std::numeric_limits<double>::infinity()};
}

std::vector<double> KerrEF::known_horizons() const {
  auto [rm, rp] = horizon_radii(params_.M, params_.a);
  if (rm > 0.0) return {rm, rp};
  return {rp};
}

std::pair<double, double> horizon_radii(double M, double a) {
  if (!(M > 0.0)) throw ConfigError("horizon_radii: M must be positive");
  if (std::abs(a) >= M) throw ConfigError("horizon_radii: extreme or over-extreme |a| >= M");
  const double root = std::sqrt(M * M - a * a);
  return {M - root, M + root};
}

//--------------------------------------------------------------------------------------------------
// 2+1 test family and flat charts

MetricSample EFSchwarzschild3::sample(const Point& p) const {
  check_dim(p, 3);
  const double r = p(1);
  if (!(r > 0.0)) throw DomainError("EF chart requires r > 0");
  const double u = 2.0 * M_ / r;
  const double du = -2.0 * M_ / (r * r);
  RMat g = RMat::Zero(3, 3);
  g(0, 0) = 1.0 - u;
  g(0, 1) = g(1, 0) = -u;
  g(1, 1) = -(1.0 + u);
  g(2, 2) = -r * r;
  std::vector<RMat> dg = zero_derivs(3);
  dg[1](0, 0) = -du;
  dg[1](0, 1) = dg[1](1, 0) = -du;
  dg[1](1, 1) = -du;
  dg[1](2, 2) = -2.0 * r;
  return finish(std::move(g), std::move(dg));
}

std::pair<double, double> EFSchwarzschild3::radial_range() const {
  return {0.0, std::numeric_limits<double>::infinity()};
}

MetricSample FlatPolar::sample(const Point& p) const {
  check_dim(p, 3);
  const double r = p(1);
  if (!(r > 0.0)) throw DomainError("polar chart requires r > 0");
  RMat g = RMat::Zero(3, 3);
  g(0, 0) = 1.0;
  g(1, 1) = -1.0;
  g(2, 2) = -r * r;
  std::vector<RMat> dg = zero_derivs(3);
  dg[1](2, 2) = -2.0 * r;
  return finish(std::move(g), std::move(dg));
}

std::pair<double, double> FlatPolar::radial_range() const {
  return {0.0, std::numeric_limits<double>::infinity()};
}

FlatCartesian::FlatCartesian(int d) : d_(d) {
  if (d < 3 || d > 4) throw ConfigError("flat Cartesian chart supports d = 3 or 4");
}

MetricSample FlatCartesian::sample(const Point& p) const {
  check_dim(p, d_);
  RMat g = -RMat::Identity(d_, d_);
  g(0, 0) = 1.0;
  return finish(std::move(g), zero_derivs(d_));
}

std::vector<int> FlatCartesian::symmetry_directions() const {
  std::vector<int> dirs(d_);
  for (int i = 0; i < d_; ++i) dirs[i] = i;
  return dirs;
}

std::pair<double, double> FlatCartesian::radial_range() const {
  const double inf = std::numeric_limits<double>::infinity();
  return {-inf, inf};
}

MetricSample SphereSlice::sample(const Point& p) const {
  check_dim(p, 3);
  const double chi = p(1);
  check_polar(chi);
  const double s = std::sin(chi);
  const double c = std::cos(chi);
  RMat g = RMat::Zero(3, 3);
  g(0, 0) = 1.0;
  g(1, 1) = -R_ * R_;
  g(2, 2) = -R_ * R_ * s * s;
  std::vector<RMat> dg = zero_derivs(3);
  dg[1](2, 2) = -2.0 * R_ * R_ * s * c;
  return finish(std::move(g), std::move(dg));
}

std::pair<double, double> SphereSlice::radial_range() const { return {0.0, kPi}; }

//--------------------------------------------------------------------------------------------------

double killing_norm(const MetricClosure& closure, const Point& p) {
  const RVec k = closure.killing();
  return k.dot(closure.sample(p).g * k);
}

std::vector<RMat> christoffels(const MetricSample& s) {
  const int d = s.dim();
  std::vector<RMat> gamma(d, RMat::Zero(d, d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int k = j; k < d; ++k) {
        double sum = 0.0;
        for (int l = 0; l < d; ++l) {
          sum += s.ginv(i, l) * (s.dg[j](l, k) + s.dg[k](l, j) - s.dg[l](j, k));
        }
        gamma[i](j, k) = gamma[i](k, j) = 0.5 * sum;
      }
    }
  }
  return gamma;
}

std::vector<RMat> christoffels(const MetricClosure& closure, const Point& p) {
  return christoffels(closure.sample(p));
}

InfeasibleMix::InfeasibleMix(double b, double def)
    : SignatureError("no Killing mix b in range makes K timelike on the boundary (best b = " +
                     std::to_string(b) + ", deficit = " + std::to_string(def) + ")"),
      best_b(b),
      deficit(def) {}

TimelikeMix find_timelike_mix(const MetricClosure& base, double r0,
                              std::pair<double, double> b_range, int n_samples) {
  const int az = base.azimuth_index();
  if (az < 0) throw ConfigError("find_timelike_mix: chart has no azimuthal Killing direction");
  for (double rh : base.known_horizons()) {
    if (std::abs(r0 - rh) <= 1e-12 * std::max(1.0, rh)) {
      throw ConfigError("find_timelike_mix: boundary radius lies on a horizon");
    }
  }
  if (n_samples < 1) throw ConfigError("find_timelike_mix: need at least one angular sample");

  // quadratic coefficients of <K,K>(b) at each sample: g_tt + 2 b g_tphi + b^2 g_phiphi
  std::vector<std::array<double, 3>> quad;
  const int d = base.dimension();
  const int n = d == 4 ? n_samples : 1;
  for (int j = 0; j < n; ++j) {
    RVec spatial = RVec::Zero(d - 1);
    spatial(0) = r0;
    if (d == 4) spatial(1) = (j + 0.5) * kPi / n;
    const MetricSample s = base.sample(base.point(spatial));
    quad.push_back({s.g(0, 0), s.g(0, az), s.g(az, az)});
  }
  auto min_norm = [&](double b) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& q : quad) m = std::min(m, q[0] + 2.0 * b * q[1] + b * b * q[2]);
    return m;
  };

  // coarse scan then golden-section refinement around the best sample
  auto [lo, hi] = b_range;
  if (!(hi >= lo)) throw ConfigError("find_timelike_mix: empty b range");
  const int n_scan = 2001;
  double best_b = lo;
  double best = min_norm(lo);
  const double step = (hi - lo) / (n_scan - 1);
  for (int i = 1; i < n_scan; ++i) {
    const double b = lo + i * step;
    const double v = min_norm(b);
    if (v > best) {
      best = v;
      best_b = b;
    }
  }
  double a = std::max(lo, best_b - step);
  double c = std::min(hi, best_b + step);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 200 && c - a > 1e-14 * std::max(1.0, std::abs(best_b)); ++it) {
    const double x1 = c - phi * (c - a);
    const double x2 = a + phi * (c - a);
    if (min_norm(x1) < min_norm(x2)) {
      a = x1;
    } else {
      c = x2;
    }
  }
  const double b_opt = 0.5 * (a + c);
  if (min_norm(b_opt) > best) {
    best = min_norm(b_opt);
    best_b = b_opt;
  }
  if (!(best > 0.0)) throw InfeasibleMix(best_b, -best);
  return {best_b, best};
}

TimelikeMix find_timelike_mix(const KerrParams& params, double r0,
                              std::pair<double, double> b_range, int n_samples) {
  KerrParams base = params;
  base.b = 0.0;
  return find_timelike_mix(KerrEF(base), r0, b_range, n_samples);
}

std::shared_ptr<const MetricClosure> make_metric(const std::string& kind, const KerrParams& params) {
  if (kind == "kerr_ef") return std::make_shared<KerrEF>(params);
  if (kind == "ef_schwarzschild") {
    KerrParams p = params;
    p.a = 0.0;
    return std::make_shared<KerrEF>(p);
  }
  if (kind == "ef_schwarzschild3") return std::make_shared<EFSchwarzschild3>(params.M);
  if (kind == "flat") return std::make_shared<FlatPolar>();
  if (kind == "flat_cartesian") return std::make_shared<FlatCartesian>(3);
  if (kind == "sphere_slice") return std::make_shared<SphereSlice>(1.0);
  throw ConfigError("unknown metric kind '" + kind + "'");
}

}  // namespace dirac
