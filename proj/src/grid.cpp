// Dirac laboratory - tensor grids and one-dimensional difference operators

#include "dirac/grid.hpp"

#include <cmath>

namespace dirac {

namespace {

constexpr double kPi = 3.14159265358979323846;

RSpMat from_triplets(int n, const std::vector<Eigen::Triplet<double>>& t) {
  RSpMat m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

Axis sbp_axis(double a, double b, int n_intervals, int order) {
  if (!(b > a)) throw ConfigError("axis needs b > a");
  const int n = n_intervals + 1;
  Axis ax;
  ax.h = (b - a) / n_intervals;
  ax.nodes = RVec::LinSpaced(n, a, b);
  ax.nodes(n - 1) = b;
  const double h = ax.h;
  std::vector<Eigen::Triplet<double>> t;
  if (order == 2) {
    if (n_intervals < 2) throw ConfigError("second-order axis needs at least 2 intervals");
    ax.weights = RVec::Constant(n, h);
    ax.weights(0) = ax.weights(n - 1) = 0.5 * h;
    t.emplace_back(0, 0, -1.0 / h);
    t.emplace_back(0, 1, 1.0 / h);
    for (int i = 1; i < n - 1; ++i) {
      t.emplace_back(i, i - 1, -0.5 / h);
      t.emplace_back(i, i + 1, 0.5 / h);
    }
    t.emplace_back(n - 1, n - 2, -1.0 / h);
    t.emplace_back(n - 1, n - 1, 1.0 / h);
  } else if (order == 4) {
    if (n_intervals < 8) throw ConfigError("fourth-order axis needs at least 8 intervals");
    const double wb[4] = {17.0 / 48, 59.0 / 48, 43.0 / 48, 49.0 / 48};
    const double Db[4][6] = {{-24.0 / 17, 59.0 / 34, -4.0 / 17, -3.0 / 34, 0, 0},
                             {-0.5, 0, 0.5, 0, 0, 0},
                             {4.0 / 43, -59.0 / 86, 0, 59.0 / 86, -4.0 / 43, 0},
                             {3.0 / 98, 0, -59.0 / 98, 0, 32.0 / 49, -4.0 / 49}};
    ax.weights = RVec::Constant(n, h);
    for (int i = 0; i < 4; ++i) {
      ax.weights(i) = ax.weights(n - 1 - i) = wb[i] * h;
      for (int j = 0; j < 6; ++j) {
        if (Db[i][j] == 0.0) continue;
        t.emplace_back(i, j, Db[i][j] / h);
        t.emplace_back(n - 1 - i, n - 1 - j, -Db[i][j] / h);
      }
    }
    for (int i = 4; i < n - 4; ++i) {
      t.emplace_back(i, i - 2, 1.0 / (12 * h));
      t.emplace_back(i, i - 1, -2.0 / (3 * h));
      t.emplace_back(i, i + 1, 2.0 / (3 * h));
      t.emplace_back(i, i + 2, -1.0 / (12 * h));
    }
  } else {
    throw ConfigError("stencil order must be 2 or 4");
  }
  ax.D = from_triplets(n, t);
  return ax;
}

Axis periodic_axis(double a, double b, int n, int order) {
  if (!(b > a) || n < 5) throw ConfigError("periodic axis needs b > a and n >= 5");
  Axis ax;
  ax.h = (b - a) / n;
  ax.nodes = RVec::LinSpaced(n, a, b - ax.h);
  ax.weights = RVec::Constant(n, ax.h);
  const double h = ax.h;
  std::vector<Eigen::Triplet<double>> t;
  auto wrap = [n](int i) { return ((i % n) + n) % n; };
  for (int i = 0; i < n; ++i) {
    if (order == 2) {
      t.emplace_back(i, wrap(i - 1), -0.5 / h);
      t.emplace_back(i, wrap(i + 1), 0.5 / h);
    } else if (order == 4) {
      t.emplace_back(i, wrap(i - 2), 1.0 / (12 * h));
      t.emplace_back(i, wrap(i - 1), -2.0 / (3 * h));
      t.emplace_back(i, wrap(i + 1), 2.0 / (3 * h));
      t.emplace_back(i, wrap(i + 2), -1.0 / (12 * h));
    } else {
      throw ConfigError("stencil order must be 2 or 4");
    }
  }
  ax.D = from_triplets(n, t);
  return ax;
}

Axis polar_axis(int n) {
  if (n < 2) throw ConfigError("polar axis needs at least 2 nodes");
  Axis ax;
  ax.h = kPi / n;
  ax.nodes.resize(n);
  for (int j = 0; j < n; ++j) ax.nodes(j) = (j + 0.5) * ax.h;
  ax.weights = RVec::Constant(n, ax.h);
  std::vector<Eigen::Triplet<double>> t;
  for (int j = 0; j < n; ++j) {
    if (j > 0) t.emplace_back(j, j - 1, -0.5 / ax.h);
    if (j < n - 1) t.emplace_back(j, j + 1, 0.5 / ax.h);
  }
  ax.D = from_triplets(n, t);
  return ax;
}

namespace {

Axis trivial_theta() {
  Axis ax;
  ax.nodes = RVec::Constant(1, 0.5 * kPi);
  ax.weights = RVec::Ones(1);
  ax.D = RSpMat(1, 1);
  ax.h = 0.0;
  return ax;
}

}  // namespace

RVec Grid::spatial(int ir, int ith) const {
  RVec y = RVec::Zero(d - 1);
  y(0) = r.nodes(ir);
  if (d == 4) y(1) = theta.nodes(ith);
  return y;
}

Grid make_grid(int d, double r_in, double r_out, int n_intervals, int n_theta, int k,
               int order) {
  if (d != 3 && d != 4) throw ConfigError("grid dimension must be 3 or 4");
  Grid g;
  g.d = d;
  g.k = k;
  g.r = sbp_axis(r_in, r_out, n_intervals, order);
  g.theta = d == 4 ? polar_axis(n_theta) : trivial_theta();
  return g;
}

Grid make_periodic_grid(int d, double r_in, double r_out, int n_nodes, int n_theta, int k,
                        int order) {
  if (d != 3 && d != 4) throw ConfigError("grid dimension must be 3 or 4");
  Grid g;
  g.d = d;
  g.k = k;
  g.periodic = true;
  g.r = periodic_axis(r_in, r_out, n_nodes, order);
  g.theta = d == 4 ? polar_axis(n_theta) : trivial_theta();
  return g;
}

Grid radial_subgrid(const Grid& g, int ir_lo, int ir_hi, int order) {
  if (g.periodic) throw ConfigError("radial_subgrid needs a bounded radial axis");
  if (ir_lo < 0 || ir_hi >= g.nr() || ir_hi - ir_lo < 2) {
    throw ConfigError("radial_subgrid index range invalid");
  }
  Grid s = g;
  s.r = sbp_axis(g.r.nodes(ir_lo), g.r.nodes(ir_hi), ir_hi - ir_lo, order);
  // keep node values bitwise identical to the parent grid
  s.r.nodes = g.r.nodes.segment(ir_lo, ir_hi - ir_lo + 1);
  return s;
}

}  // namespace dirac
