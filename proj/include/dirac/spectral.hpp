// Dirac laboratory - double-boundary problem on the collar X, series evolution,
// boundary operator A, Garding and ellipticity certificates

#ifndef DIRAC_SPECTRAL_HPP_
#define DIRAC_SPECTRAL_HPP_

#include <cstdint>
#include <vector>

#include "dirac/common.hpp"
#include "dirac/gaussian_chart.hpp"
#include "dirac/hamiltonian.hpp"

namespace dirac {

// Hermitian eigendecomposition A = V diag(lambda) V^*, eigenvalues ascending.
void hermitian_eigensolve(const CMat& A, RVec& lambda, CMat& V);

struct RegionX {
  Grid grid;              // radial nodes r0 .. r_mid of the parent grid
  DiscreteHamiltonian H;  // both faces chiral
  double r_mid = 0.0;
  double min_killing_norm = 0.0;
  int parent_hi = 0;      // index of r_mid in the parent radial axis
};

// X = {r0 <= r <= r0 + r_max / 2}; if K is not timelike on all of it, r_mid is lowered to
// the largest parent node below which it is. ConfigError when fewer than 3 radial nodes remain.
RegionX build_region_X(const Grid& parent, const MetricClosure& closure, double r_max,
                       OperatorOptions opts);

struct SpectralBasis {
  RVec omega;   // ascending
  CMat psi;     // columns, w-orthonormal
  RVec w;

  int size() const { return static_cast<int>(omega.size()); }
  CVec coefficients(const CVec& psi0) const;
  // sum_n coef_n psi_n
  CVec synthesize(const CVec& coef) const;
};

// Throws NumericalError if the w-Hermiticity residual of H exceeds herm_tol or the
// reconstruction check fails.
SpectralBasis eigendecompose_X(const SpMat& H, const RVec& w, double herm_tol = 1e-12);

double orthonormality_residual(const SpectralBasis& b);
double reconstruction_residual(const SpectralBasis& b, const SpMat& H);

// psi(t) = sum c_n e^{-i omega_n t} psi_n.
CVec series_evolve(const SpectralBasis& b, const CVec& psi0, double t);
// Same with the Crank-Nicolson amplification factor R(omega dt)^steps.
CVec series_evolve_cn(const SpectralBasis& b, const CVec& psi0, double dt, long steps);

// Fraction of the w-norm of each eigenvector on the inner face nodes.
RVec boundary_participation(const SpectralBasis& b, const DiscreteHamiltonian& H);

// n smallest |omega|, sorted by |omega|.
std::vector<double> smallest_abs_eigenvalues(const SpectralBasis& b, int n);

struct BoundaryOperator {
  CMat A0, A0_star, Z, A;
  CMat G;             // K-slash Gram matrix (Hermitian positive definite)
  RVec nodes;         // phi nodes (d = 3) or theta nodes (d = 4)
  int f = 0;
  double h = 0.0;
};

// A0 = (gamma^rho)^{-1} gamma^{Omega_a} d_{Omega_a} on {r = r0}: d = 3 uses a periodic
// circle of n_nodes points; d = 4 uses n_nodes pole-offset theta nodes and d_phi -> i k.
BoundaryOperator boundary_operator_A(const MetricClosure& closure, double r0, int n_nodes,
                                     int k = 0);

// ||G A - (G A)^*||_F / ||G A||_F
double a_hermiticity_residual(const BoundaryOperator& op);
// Real parts of the spectrum of A (imaginary parts returned in max_imag).
RVec a_spectrum(const BoundaryOperator& op, double* max_imag = nullptr);
// Off-node-diagonal action of Z on smooth seeded fields: ||(Z - Z_lumped) u||_G / ||u||_G.
double z_locality(const BoundaryOperator& op, int trials, std::uint64_t seed);

struct ASquaredReport {
  double fitted = 0.0;     // leading coefficient of <A^2>_m against kappa^2
  double predicted = 0.0;  // |g^{Omega Omega} / g^{rho rho}| weighted by the wave
  double mismatch = 0.0;   // |fitted - predicted| / predicted
  std::vector<int> modes;  // frequencies used (m = 0 excluded)
};
ASquaredReport a_squared_certificate(const BoundaryOperator& op, const MetricClosure& closure,
                                     double r0);

struct AnticommutatorReport {
  double plain = 0.0;    // max |{X_a, X_b} + 2 g^{ab}/g^{rr}|
  double general = 0.0;  // same including the g^{rho a} correction
  double max_cross = 0.0;  // max |g^{rho a}| in the Gaussian frame
};
AnticommutatorReport anticommutator_check(const MetricClosure& closure, double r0,
                                          const RVec& theta_nodes);

struct GardingReport {
  double C = 0.0;
};
// max over the reduced space of ||psi||^2_{W12} / (||H psi||^2_w + ||psi||^2_w), exact via
// a dense generalised eigensolve. Gradients: the grid's difference operators, contracted
// with the slice co-metric g_N^{ab}.
GardingReport garding_estimate(const DiscreteHamiltonian& H, const MetricClosure& closure);

struct EllipticityReport {
  double delta = 0.0;
  double identity_residual = 0.0;
};
// delta = min over the region's nodes of the least eigenvalue of -g^{ab} relative to
// g_N^{ab}; identity checked at `trials` seeded random (node, xi, psi).
EllipticityReport ellipticity_certificate(const DiscreteHamiltonian& H,
                                          const MetricClosure& closure, int trials,
                                          std::uint64_t seed);

}  // namespace dirac

#endif  // DIRAC_SPECTRAL_HPP_
