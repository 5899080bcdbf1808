// Dirac laboratory - tensor grids and one-dimensional difference operators

#ifndef DIRAC_GRID_HPP_
#define DIRAC_GRID_HPP_

#include <vector>

#include "dirac/common.hpp"

namespace dirac {

using RSpMat = Eigen::SparseMatrix<double>;

// One axis: nodes, quadrature weights and a first-derivative matrix D with
// W D + (W D)^T = diag(-1, 0, ..., 0, 1) on bounded axes (summation by parts),
// W D skew on periodic and pole-offset axes.
struct Axis {
  RVec nodes;
  RVec weights;
  RSpMat D;
  double h = 0.0;
};

// Uniform nodes x_0 .. x_n on [a, b]. order 2: central interior, first-order one-sided
// boundary rows, trapezoid weights. order 4: the standard (4,2) closure (needs n >= 8).
Axis sbp_axis(double a, double b, int n_intervals, int order = 2);
// n nodes a + i h, h = (b - a) / n, periodic wrap.
Axis periodic_axis(double a, double b, int n, int order = 2);
// Polar angle nodes (j + 1/2) pi / n, midpoint weights, central differences with zero ghosts.
Axis polar_axis(int n);

struct Grid {
  int d = 3;         // spacetime dimension
  Axis r;            // radial axis (chart index 1)
  Axis theta;        // polar axis (chart index 2, d = 4); a single node at pi/2 for d = 3
  int k = 0;         // azimuthal mode number
  bool periodic = false;

  int nr() const { return static_cast<int>(r.nodes.size()); }
  int nth() const { return static_cast<int>(theta.nodes.size()); }
  int nodes() const { return nr() * nth(); }
  int node(int ir, int ith) const { return ir * nth() + ith; }
  // Spatial chart coordinates of a node (size d-1, azimuth = 0).
  RVec spatial(int ir, int ith) const;
};

Grid make_grid(int d, double r_in, double r_out, int n_intervals, int n_theta, int k,
               int order = 2);
Grid make_periodic_grid(int d, double r_in, double r_out, int n_nodes, int n_theta, int k,
                        int order = 2);

// Sub-grid with radial nodes [ir_lo, ir_hi] of g (same spacing, rebuilt SBP closures).
Grid radial_subgrid(const Grid& g, int ir_lo, int ir_hi, int order = 2);

}  // namespace dirac

#endif  // DIRAC_GRID_HPP_
