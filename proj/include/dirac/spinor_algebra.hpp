// Dirac laboratory - Clifford representations, frames, spin connection, spin products

#ifndef DIRAC_SPINOR_ALGEBRA_HPP_
#define DIRAC_SPINOR_ALGEBRA_HPP_

#include <vector>

#include "dirac/common.hpp"
#include "dirac/geometry.hpp"

namespace dirac {

struct CliffordRep {
  int d = 0;
  int f = 0;
  std::vector<CMat> gamma;  // gamma[a] = flat gamma^(a), upper frame index
  CMat S;                   // spin product matrix, <phi|psi> = phi^* S psi
  RVec eta;                 // diagonal of the Minkowski metric (+, -, ..., -)
};

// d = 3: f = 2, gamma^(0) = diag(1,-1), gamma^(1) = i sigma_1, gamma^(2) = i sigma_2.
// d = 4: f = 4, chiral basis. S = gamma^(0) in both. See docs/conventions.md.
CliffordRep flat_clifford_rep(int d);

struct Vielbein {
  RMat frame;    // frame(a, j) = e_a^j
  RMat coframe;  // coframe(a, j) = e^a_j, coframe * frame^T = 1
};

// Frame gauge: e_0 = unit normal of the t = const slice, then Gram-Schmidt of the
// spatial coordinate vectors in chart order. Coframe diagonal is positive.
Vielbein build_vielbein(const MetricSample& s);

// gamma^j = e_a^j gamma^(a), j in chart order.
std::vector<CMat> curved_gammas(const CliffordRep& rep, const Vielbein& vb);

// v-slash for a covector v_j: v_j gamma^j.
CMat slash(const std::vector<CMat>& gammas, const RVec& covector);

struct SpinConnection {
  std::vector<RMat> omega;  // omega[j](a, b), antisymmetric in (a, b)
  std::vector<CMat> sigma;  // spinor connection: nabla_j psi = d_j psi + sigma[j] psi
};

// Frame derivatives by centred differences with step h_frame * max(1, |x_j|) along
// non-symmetry directions; symmetry directions contribute zero.
SpinConnection spin_connection(const MetricClosure& closure, const CliffordRep& rep,
                               const Point& p, double h_frame = 1e-5);

// d_j gamma^k + Gamma^k_jl gamma^l + [sigma_j, gamma^k] for all (j, k); max abs entry.
double clifford_compatibility_residual(const MetricClosure& closure, const CliffordRep& rep,
                                       const Point& p, const SpinConnection& sc,
                                       double h_frame = 1e-5);

Cplx spin_product(const CliffordRep& rep, const CVec& phi, const CVec& psi);
// <psi | nu-slash psi> for the future unit normal nu of the slice.
double slice_norm(const CliffordRep& rep, const MetricSample& s, const CVec& psi);
// <psi | K-slash psi>; throws SignatureError unless <K,K> > 0 at the sample.
double boundary_norm(const CliffordRep& rep, const MetricSample& s, const CVec& psi);

}  // namespace dirac

#endif  // DIRAC_SPINOR_ALGEBRA_HPP_
