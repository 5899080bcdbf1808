// Dirac laboratory - discrete Dirac Hamiltonian, boundary projectors, principal symbol
//
// H = -(gamma^t)^{-1} (i gamma^j nabla_j|_{spatial derivatives} + B - m) with d_t dropped
// and d_phi -> i k. Unknowns are f spinor components per node (node-major). With the
// frame gauge e_0 = nu the slice product is Euclidean in the components, so the
// discrete inner product is (psi|phi)_w = sum_nodes w psi^* phi with a scalar weight.

#ifndef DIRAC_HAMILTONIAN_HPP_
#define DIRAC_HAMILTONIAN_HPP_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dirac/common.hpp"
#include "dirac/geometry.hpp"
#include "dirac/grid.hpp"
#include "dirac/spinor_algebra.hpp"

namespace dirac {

enum class FaceCondition { Free, Chiral };

// B(x): none, spin-symmetric scalar v0 exp(-r) 1, or the non-spin-symmetric i v0 1.
struct Potential {
  enum class Kind { None, Scalar, Broken };
  Kind kind = Kind::None;
  double v0 = 0.0;

  CMat operator()(const Point& p, int f) const;
};

struct OperatorOptions {
  double m = 0.0;
  Potential potential;
  int order = 2;
  FaceCondition inner = FaceCondition::Chiral;
  FaceCondition outer = FaceCondition::Chiral;
  double h_frame = 1e-5;
};

struct BoundaryProjector {
  RVec normal;  // covector n_j, unit spacelike
  CMat P;       // (i n-slash + 1) / 2
  CMat Q;       // orthonormal basis of ker P, f x f/2
};

// side = -1 for an inner face (region at larger r), +1 for an outer face; n points
// into the region. Throws SignatureError if {r = const} is not timelike (g^rr >= 0).
BoundaryProjector boundary_projector(const MetricSample& s, const CliffordRep& rep, int side);

struct DiscreteHamiltonian {
  Grid grid;
  CliffordRep rep;
  OperatorOptions options;
  SpMat H_full;                  // no face elimination, f * nodes
  RVec w_node;                   // quadrature weight times sqrt(det g_N)
  std::vector<BoundaryProjector> inner_face;  // per theta node
  std::vector<BoundaryProjector> outer_face;
  SpMat T;                       // reduced -> full embedding
  RVec w_red;                    // weights of the reduced unknowns
  SpMat H_raw;                   // T^* H_full T
  SpMat H_red;                   // (H_raw + W^{-1} H_raw^* W) / 2

  int f() const { return rep.f; }
  int full_dim() const { return static_cast<int>(H_full.rows()); }
  int reduced_dim() const { return static_cast<int>(H_red.rows()); }
  RVec w_full() const;  // per full unknown
  CVec reduce(const CVec& full) const { return T.adjoint() * full; }
  CVec expand(const CVec& red) const { return T * red; }
  // Components of a full vector violating the face conditions, Euclidean over face nodes.
  double boundary_residual(const CVec& full, bool inner = true) const;
};

DiscreteHamiltonian assemble_hamiltonian(const Grid& grid, const MetricClosure& closure,
                                         const OperatorOptions& opts);

// ||W^{1/2} H W^{-1/2} - (.)^*||_F / ||W^{1/2} H W^{-1/2}||_F.
double hermiticity_residual(const SpMat& H, const RVec& w);

// max over `trials` seeded pairs of |(psi|H phi)_w - (H psi|phi)_w| for w-normalised,
// smooth reduced-space fields. symmetrized = false uses H_raw.
double symmetry_residual(const DiscreteHamiltonian& H, int trials, std::uint64_t seed,
                         bool symmetrized = true);

struct SymbolSample {
  Point x;
  RVec xi;      // spatial covector, size d-1
  CMat P;
  Cplx detP;    // direct determinant
  Cplx det_formula;  // (-g^{ab} xi_a xi_b / g^tt)^{f/2}
};

SymbolSample principal_symbol(const MetricClosure& closure, const CliffordRep& rep,
                              const Point& x, const RVec& xi);

// Radii in [r_lo, r_hi] where g^rr changes sign on the equator, bisected to tol.
std::vector<double> locate_horizons(const MetricClosure& closure, double r_lo, double r_hi,
                                    double tol = 1e-10, int n_scan = 4000);

// Entry p = ||P (H_full^p psi0)|inner face|| for p = 0..p_max.
std::vector<double> compatibility_residuals(const DiscreteHamiltonian& H, const CVec& psi0,
                                            int p_max);

struct BumpSpec {
  double r_center = 0.0;
  double r_radius = 0.0;
  double theta_center = 1.5707963267948966;
  double theta_radius = 0.5;
  CVec spinor;          // constant spinor profile, size f
  int p_max = 4;        // support must clear the faces by (p_max + 1) stencil widths
};

// Smooth compactly supported field exp(1 - 1/(1 - s^2)) * spinor on the full grid.
CVec make_bump_data(const DiscreteHamiltonian& H, const BumpSpec& spec);

// Write (row, col, re, im) lines, 0-based.
void export_coo(const SpMat& A, std::ostream& out);

}  // namespace dirac

#endif  // DIRAC_HAMILTONIAN_HPP_
