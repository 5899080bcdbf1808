// Dirac laboratory - discrete Dirac Hamiltonian, boundary projectors, principal symbol

#include "dirac/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

namespace dirac {

namespace {

using Trip = Eigen::Triplet<Cplx>;

void add_block(std::vector<Trip>& t, int row_node, int col_node, int f, const CMat& B,
               Cplx scale = 1.0) {
  for (int a = 0; a < f; ++a) {
    for (int b = 0; b < f; ++b) {
      const Cplx v = scale * B(a, b);
      if (v != Cplx(0.0)) t.emplace_back(row_node * f + a, col_node * f + b, v);
    }
  }
}

struct NodeData {
  CMat Cr;    // coefficient of d_r
  CMat Cth;   // coefficient of d_theta (d = 4)
  CMat Z0;    // zero-order block
  double w = 0.0;
};

NodeData node_data(const Grid& grid, const MetricClosure& closure, const CliffordRep& rep,
                   const OperatorOptions& opts, int ir, int ith) {
  const int d = grid.d;
  const int f = rep.f;
  const Point p = closure.point(grid.spatial(ir, ith));
  const MetricSample s = closure.sample(p);
  const double gtt = s.ginv(0, 0);
  if (!(gtt > 0.0)) {
    throw SignatureError("g^tt <= 0 at r = " + std::to_string(p(1)) +
                         ": constant-t slice not spacelike");
  }
  const auto gam = curved_gammas(rep, build_vielbein(s));
  const CMat gt_inv = gam[0] / gtt;
  const SpinConnection sc = spin_connection(closure, rep, p, opts.h_frame);

  NodeData nd;
  nd.Cr = -kI * gt_inv * gam[1];
  if (d == 4) nd.Cth = -kI * gt_inv * gam[2];
  CMat lower = kI * gam[d - 1] * (kI * static_cast<double>(grid.k));
  for (int j = 0; j < d; ++j) lower += kI * gam[j] * sc.sigma[j];
  lower += opts.potential(p, f);
  lower -= opts.m * CMat::Identity(f, f);
  nd.Z0 = -gt_inv * lower;
  nd.w = grid.r.weights(ir) * grid.theta.weights(ith) * std::sqrt(s.slice_metric().determinant());
  return nd;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

CMat Potential::operator()(const Point& p, int f) const {
  switch (kind) {
    case Kind::None:
      return CMat::Zero(f, f);
    case Kind::Scalar:
      return v0 * std::exp(-p(1)) * CMat::Identity(f, f);
    case Kind::Broken:
      return kI * v0 * CMat::Identity(f, f);
  }
  return CMat::Zero(f, f);
}

BoundaryProjector boundary_projector(const MetricSample& s, const CliffordRep& rep, int side) {
  const double grr = s.ginv(1, 1);
  if (!(grr < 0.0)) {
    throw SignatureError("face {r = const} is not timelike (g^rr >= 0); chiral condition "
                         "undefined");
  }
  const int d = rep.d;
  const int f = rep.f;
  BoundaryProjector bp;
  bp.normal = RVec::Zero(d);
  bp.normal(1) = (side < 0 ? -1.0 : 1.0) / std::sqrt(-grr);
  const CMat nslash = slash(curved_gammas(rep, build_vielbein(s)), bp.normal);
  bp.P = 0.5 * (kI * nslash + CMat::Identity(f, f));
  Eigen::JacobiSVD<CMat> svd(bp.P, Eigen::ComputeFullV);
  bp.Q = svd.matrixV().rightCols(f / 2);
  return bp;
}

RVec DiscreteHamiltonian::w_full() const {
  const int f = rep.f;
  RVec w(w_node.size() * f);
  for (int n = 0; n < w_node.size(); ++n) w.segment(n * f, f).setConstant(w_node(n));
  return w;
}

double DiscreteHamiltonian::boundary_residual(const CVec& full, bool inner) const {
  const auto& face = inner ? inner_face : outer_face;
  if (face.empty()) return 0.0;
  const int f = rep.f;
  const int ir = inner ? 0 : grid.nr() - 1;
  double sum = 0.0;
  for (int ith = 0; ith < grid.nth(); ++ith) {
    const int n = grid.node(ir, ith);
    sum += (face[ith].P * full.segment(n * f, f)).squaredNorm();
  }
  return std::sqrt(sum);
}

DiscreteHamiltonian assemble_hamiltonian(const Grid& grid, const MetricClosure& closure,
                                         const OperatorOptions& opts) {
  if (closure.dimension() != grid.d) throw ConfigError("grid and metric dimensions differ");
  DiscreteHamiltonian H;
  H.grid = grid;
  H.rep = flat_clifford_rep(grid.d);
  H.options = opts;
  const int f = H.rep.f;
  const int nr = grid.nr();
  const int nth = grid.nth();
  const int N = grid.nodes();

  std::vector<NodeData> nodes(N);
  for (int ir = 0; ir < nr; ++ir) {
    for (int ith = 0; ith < nth; ++ith) {
      nodes[grid.node(ir, ith)] = node_data(grid, closure, H.rep, opts, ir, ith);
    }
  }

  std::vector<Trip> trip;
  H.w_node.resize(N);
  for (int ir = 0; ir < nr; ++ir) {
    for (int ith = 0; ith < nth; ++ith) {
      const int n = grid.node(ir, ith);
      const NodeData& nd = nodes[n];
      H.w_node(n) = nd.w;
      add_block(trip, n, n, f, nd.Z0);
    }
  }
  // radial and polar derivative couplings; row access through the transposed D
  const RSpMat Dr_rows = RSpMat(grid.r.D.transpose());
  for (int ir = 0; ir < nr; ++ir) {
    for (RSpMat::InnerIterator it(Dr_rows, ir); it; ++it) {
      const int jr = static_cast<int>(it.row());
      for (int ith = 0; ith < nth; ++ith) {
        const int n = grid.node(ir, ith);
        add_block(trip, n, grid.node(jr, ith), f, nodes[n].Cr, it.value());
      }
    }
  }
  if (grid.d == 4) {
    const RSpMat Dt_rows = RSpMat(grid.theta.D.transpose());
    for (int ith = 0; ith < nth; ++ith) {
      for (RSpMat::InnerIterator it(Dt_rows, ith); it; ++it) {
        const int jth = static_cast<int>(it.row());
        for (int ir = 0; ir < nr; ++ir) {
          const int n = grid.node(ir, ith);
          add_block(trip, n, grid.node(ir, jth), f, nodes[n].Cth, it.value());
        }
      }
    }
  }
  H.H_full.resize(N * f, N * f);
  H.H_full.setFromTriplets(trip.begin(), trip.end());

  // face projectors (kept for diagnostics on free faces when the face is timelike)
  auto face_projectors = [&](int ir, int side, FaceCondition cond) {
    std::vector<BoundaryProjector> out;
    for (int ith = 0; ith < nth; ++ith) {
      const MetricSample s = closure.sample(closure.point(grid.spatial(ir, ith)));
      try {
        out.push_back(boundary_projector(s, H.rep, side));
      } catch (const SignatureError&) {
        if (cond == FaceCondition::Chiral) throw;
        return std::vector<BoundaryProjector>{};
      }
    }
    return out;
  };
  const bool faces = !grid.periodic;
  if (faces) {
    H.inner_face = face_projectors(0, -1, opts.inner);
    H.outer_face = face_projectors(nr - 1, +1, opts.outer);
  }

  // embedding of the reduced unknowns
  std::vector<Trip> tt;
  std::vector<double> wred;
  int col = 0;
  for (int ir = 0; ir < nr; ++ir) {
    const bool inner_c = faces && ir == 0 && opts.inner == FaceCondition::Chiral;
    const bool outer_c = faces && ir == nr - 1 && opts.outer == FaceCondition::Chiral;
    for (int ith = 0; ith < nth; ++ith) {
      const int n = grid.node(ir, ith);
      if (inner_c || outer_c) {
        const CMat& Q = inner_c ? H.inner_face[ith].Q : H.outer_face[ith].Q;
        for (int c = 0; c < Q.cols(); ++c) {
          for (int a = 0; a < f; ++a) tt.emplace_back(n * f + a, col, Q(a, c));
          wred.push_back(H.w_node(n));
          ++col;
        }
      } else {
        for (int a = 0; a < f; ++a) {
          tt.emplace_back(n * f + a, col, 1.0);
          wred.push_back(H.w_node(n));
          ++col;
        }
      }
    }
  }
  H.T.resize(N * f, col);
  H.T.setFromTriplets(tt.begin(), tt.end());
  H.w_red = Eigen::Map<RVec>(wred.data(), static_cast<Eigen::Index>(wred.size()));

  H.H_raw = SpMat(H.T.adjoint()) * H.H_full * H.T;
  H.H_raw.makeCompressed();
  const Eigen::VectorXcd w = H.w_red.cast<Cplx>();
  const Eigen::VectorXcd winv = H.w_red.cwiseInverse().cast<Cplx>();
  SpMat adj = winv.asDiagonal() * SpMat(H.H_raw.adjoint()) * w.asDiagonal();
  H.H_red = 0.5 * (H.H_raw + adj);
  H.H_red.prune(Cplx(0.0));
  H.H_red.makeCompressed();
  return H;
}

double hermiticity_residual(const SpMat& H, const RVec& w) {
  const Eigen::VectorXcd s = w.cwiseSqrt().cast<Cplx>();
  const Eigen::VectorXcd si = w.cwiseSqrt().cwiseInverse().cast<Cplx>();
  const SpMat Hh = s.asDiagonal() * H * si.asDiagonal();
  const SpMat diff = Hh - SpMat(Hh.adjoint());
  const double nrm = Hh.norm();
  return nrm > 0.0 ? diff.norm() / nrm : 0.0;
}

double symmetry_residual(const DiscreteHamiltonian& H, int trials, std::uint64_t seed,
                         bool symmetrized) {
  const Grid& g = H.grid;
  const int f = H.f();
  const int nr = g.nr();
  const double r_lo = g.r.nodes(0);
  const double L = g.r.nodes(nr - 1) - r_lo;
  const bool chiral_in = !g.periodic && H.options.inner == FaceCondition::Chiral;
  const bool chiral_out = !g.periodic && H.options.outer == FaceCondition::Chiral;
  const SpMat& A = symmetrized ? H.H_red : H.H_raw;
  const RVec& w = H.w_red;
  std::mt19937_64 rng(seed);

  // Smooth fields satisfying the face conditions: blend of the face kernel projectors
  // (1 - P) of each theta line, carried along r.
  auto smooth_field = [&]() {
    const int modes = 3;
    std::vector<CVec> coef(modes * modes, CVec::Zero(f));
    for (auto& c : coef) {
      for (int a = 0; a < f; ++a) c(a) = Cplx(uniform(rng, -1, 1), uniform(rng, -1, 1));
    }
    CVec psi = CVec::Zero(H.full_dim());
    for (int ir = 0; ir < nr; ++ir) {
      const double x = g.periodic ? (g.r.nodes(ir) - r_lo) / (L + g.r.h) : (g.r.nodes(ir) - r_lo) / L;
      const double lam = x * x * (3.0 - 2.0 * x);
      for (int ith = 0; ith < g.nth(); ++ith) {
        const double th = g.theta.nodes(ith);
        CVec chi = CVec::Zero(f);
        for (int i = 0; i < modes; ++i) {
          for (int j = 0; j < modes; ++j) {
            const double radial = g.periodic ? std::cos(2.0 * M_PI * i * x) : std::cos(M_PI * i * x);
            const double polar = g.d == 4 ? std::cos(j * th) : (j == 0 ? 1.0 : 0.0);
            chi += radial * polar * coef[i * modes + j];
          }
        }
        CVec val = chi;
        if (chiral_in || chiral_out) {
          CMat K = CMat::Zero(f, f);
          if (chiral_in) K += (1.0 - lam) * (CMat::Identity(f, f) - H.inner_face[ith].P);
          else K += (1.0 - lam) * CMat::Identity(f, f);
          if (chiral_out) K += lam * (CMat::Identity(f, f) - H.outer_face[ith].P);
          else K += lam * CMat::Identity(f, f);
          val = K * chi;
        }
        psi.segment(g.node(ir, ith) * f, f) = val;
      }
    }
    CVec c = H.reduce(psi);
    const double nrm = std::sqrt((c.cwiseAbs2().array() * w.array()).sum());
    return CVec(c / nrm);
  };

  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const CVec psi = smooth_field();
    const CVec phi = smooth_field();
    const CVec Hpsi = A * psi;
    const CVec Hphi = A * phi;
    Cplx lhs(0.0), rhs(0.0);
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      lhs += std::conj(psi(i)) * w(i) * Hphi(i);
      rhs += std::conj(Hpsi(i)) * w(i) * phi(i);
    }
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

SymbolSample principal_symbol(const MetricClosure& closure, const CliffordRep& rep,
                              const Point& x, const RVec& xi) {
  const int d = rep.d;
  if (xi.size() != d - 1) throw ConfigError("symbol covector must have d-1 components");
  const MetricSample s = closure.sample(x);
  const double gtt = s.ginv(0, 0);
  if (!(gtt > 0.0)) throw SignatureError("g^tt <= 0: principal symbol undefined");
  const auto gam = curved_gammas(rep, build_vielbein(s));
  CMat sum = CMat::Zero(rep.f, rep.f);
  for (int a = 0; a < d - 1; ++a) sum += xi(a) * gam[a + 1];
  SymbolSample out;
  out.x = x;
  out.xi = xi;
  out.P = -kI * (gam[0] / gtt) * sum;
  out.detP = out.P.determinant();
  const double q = xi.dot(s.ginv.bottomRightCorner(d - 1, d - 1) * xi);
  out.det_formula = std::pow(Cplx(-q / gtt), rep.f / 2);
  return out;
}

std::vector<double> locate_horizons(const MetricClosure& closure, double r_lo, double r_hi,
                                    double tol, int n_scan) {
  const int d = closure.dimension();
  auto grr = [&](double r, bool& ok) {
    RVec y = RVec::Zero(d - 1);
    y(0) = r;
    if (d == 4) y(1) = 0.5 * M_PI;
    try {
      ok = true;
      return closure.sample(closure.point(y)).ginv(1, 1);
    } catch (const DomainError&) {
      ok = false;
      return 0.0;
    }
  };
  std::vector<double> roots;
  double prev_r = 0.0, prev_v = 0.0;
  bool have_prev = false;
  for (int i = 0; i <= n_scan; ++i) {
    const double r = r_lo + (r_hi - r_lo) * i / n_scan;
    bool ok = false;
    const double v = grr(r, ok);
    if (!ok) {
      have_prev = false;
      continue;
    }
    if (v == 0.0) {
      roots.push_back(r);
    } else if (have_prev && prev_v != 0.0 && (v > 0.0) != (prev_v > 0.0)) {
      double a = prev_r, b = r, fa = prev_v;
      while (b - a > tol) {
        const double m = 0.5 * (a + b);
        bool okm = false;
        const double fm = grr(m, okm);
        if (fm == 0.0) {
          a = b = m;
          break;
        }
        if ((fm > 0.0) == (fa > 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_r = r;
    prev_v = v;
    have_prev = true;
  }
  return roots;
}

std::vector<double> compatibility_residuals(const DiscreteHamiltonian& H, const CVec& psi0,
                                            int p_max) {
  if (p_max < 0) throw ConfigError("p_max must be >= 0");
  if (H.inner_face.empty()) throw SignatureError("inner face carries no projector");
  std::vector<double> out;
  CVec v = psi0;
  for (int p = 0; p <= p_max; ++p) {
    out.push_back(H.boundary_residual(v, true));
    if (p < p_max) v = H.H_full * v;
  }
  return out;
}

CVec make_bump_data(const DiscreteHamiltonian& H, const BumpSpec& spec) {
  const Grid& g = H.grid;
  const int f = H.f();
  CVec psi = CVec::Zero(H.full_dim());
  if (spec.r_radius <= 0.0) return psi;
  if (spec.spinor.size() != f) throw ConfigError("bump spinor has the wrong size");
  if (!g.periodic) {
    const int order = H.options.order;
    const int margin = (spec.p_max + 1) * (order / 2) + (order == 4 ? 4 : 1);
    const double clear = margin * g.r.h;
    if (spec.r_center - spec.r_radius < g.r.nodes(0) + clear ||
        spec.r_center + spec.r_radius > g.r.nodes(g.nr() - 1) - clear) {
      throw ConfigError("bump support too close to a face for p_max = " +
                        std::to_string(spec.p_max));
    }
  }
  for (int ir = 0; ir < g.nr(); ++ir) {
    for (int ith = 0; ith < g.nth(); ++ith) {
      const double sr = (g.r.nodes(ir) - spec.r_center) / spec.r_radius;
      double s2 = sr * sr;
      if (g.d == 4) {
        const double st = (g.theta.nodes(ith) - spec.theta_center) / spec.theta_radius;
        s2 += st * st;
      }
      if (s2 >= 1.0) continue;
      const double amp = std::exp(1.0 - 1.0 / (1.0 - s2));
      psi.segment(g.node(ir, ith) * f, f) = amp * spec.spinor;
    }
  }
  return psi;
}

void export_coo(const SpMat& A, std::ostream& out) {
  out.precision(17);
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SpMat::InnerIterator it(A, k); it; ++it) {
      out << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag()
          << '\n';
    }
  }
}

}  // namespace dirac
