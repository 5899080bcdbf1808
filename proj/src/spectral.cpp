// Dirac laboratory - double-boundary problem on the collar X, series evolution,
// boundary operator A, Garding and ellipticity certificates

#include "dirac/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace dirac {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Gaussian-frame data at a boundary point: transformed gammas and inverse metric.
struct BoundaryFrame {
  std::vector<CMat> gam;  // gamma'^j in (t, rho, Omega...)
  RMat ginv;              // g'^{ij}
  CMat Kslash;
  double mu = 0.0;        // sqrt(det g_dN)
  double Knorm = 0.0;
};

BoundaryFrame boundary_frame(const MetricClosure& closure, const CliffordRep& rep, double r0,
                             double theta) {
  const int d = closure.dimension();
  RVec y = RVec::Zero(d - 1);
  y(0) = r0;
  if (d == 4) y(1) = theta;
  const MetricSample s = closure.sample(closure.point(y));
  const RMat hinv = s.slice_metric().inverse();

  RMat J = RMat::Identity(d, d);
  J.block(1, 1, d - 1, 1) = hinv.col(0) / std::sqrt(hinv(0, 0));
  const RMat Jinv = J.inverse();
  const auto gam = curved_gammas(rep, build_vielbein(s));

  BoundaryFrame bf;
  bf.gam.assign(d, CMat::Zero(rep.f, rep.f));
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) bf.gam[j] += Jinv(j, k) * gam[k];
  }
  bf.ginv = Jinv * s.ginv * Jinv.transpose();
  bf.Knorm = s.g(0, 0);
  bf.Kslash = slash(gam, s.g.col(0));
  bf.mu = std::sqrt((-s.g.bottomRightCorner(d - 2, d - 2)).determinant());
  return bf;
}

// X_a = (gamma^rho)^{-1} gamma^{Omega_a}, a indexes chart directions 2..d-1.
CMat x_matrix(const BoundaryFrame& bf, int a) {
  return bf.gam[1] * bf.gam[a] / bf.ginv(1, 1);
}

double uniform(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
}

}  // namespace

void hermitian_eigensolve(const CMat& A, RVec& lambda, CMat& V) {
  Eigen::SelfAdjointEigenSolver<CMat> es(A);
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
  lambda = es.eigenvalues();
  V = es.eigenvectors();
}

//--------------------------------------------------------------------------------------------------

RegionX build_region_X(const Grid& parent, const MetricClosure& closure, double r_max,
                       OperatorOptions opts) {
  if (parent.periodic) throw ConfigError("region X needs a bounded radial axis");
  if (!(r_max > 0.0)) throw ConfigError("r_max must be positive");
  const double r0 = parent.r.nodes(0);
  int hi = static_cast<int>(std::lround(0.5 * r_max / parent.r.h));
  hi = std::min(hi, parent.nr() - 1);

  double min_kk = std::numeric_limits<double>::infinity();
  for (int ir = 0; ir <= hi; ++ir) {
    bool ok = true;
    double row_min = std::numeric_limits<double>::infinity();
    for (int ith = 0; ith < parent.nth(); ++ith) {
      const MetricSample s = closure.sample(closure.point(parent.spatial(ir, ith)));
      row_min = std::min(row_min, s.g(0, 0));
      if (!(s.g(0, 0) > 0.0) || !(s.ginv(1, 1) < 0.0)) ok = false;
    }
    if (!ok) {
      hi = ir - 1;
      break;
    }
    min_kk = std::min(min_kk, row_min);
  }
  if (hi < 2) {
    throw ConfigError("no region X with K timelike next to r0 = " + std::to_string(r0));
  }
  RegionX X;
  X.grid = radial_subgrid(parent, 0, hi, opts.order);
  X.parent_hi = hi;
  X.r_mid = parent.r.nodes(hi);
  X.min_killing_norm = min_kk;
  opts.inner = FaceCondition::Chiral;
  opts.outer = FaceCondition::Chiral;
  X.H = assemble_hamiltonian(X.grid, closure, opts);
  return X;
}

//--------------------------------------------------------------------------------------------------

CVec SpectralBasis::coefficients(const CVec& psi0) const {
  return psi.adjoint() * (w.cast<Cplx>().asDiagonal() * psi0);
}

CVec SpectralBasis::synthesize(const CVec& coef) const { return psi * coef; }

SpectralBasis eigendecompose_X(const SpMat& H, const RVec& w, double herm_tol) {
  const double herm = hermiticity_residual(H, w);
  if (herm > herm_tol) {
    throw NumericalError("operator not w-Hermitian (residual " + std::to_string(herm) + ")");
  }
  const RVec sw = w.cwiseSqrt();
  const RVec isw = sw.cwiseInverse();
  CMat Hh = sw.cast<Cplx>().asDiagonal() * CMat(H) * isw.cast<Cplx>().asDiagonal();
  Hh = 0.5 * (Hh + Hh.adjoint()).eval();
  SpectralBasis b;
  CMat U;
  hermitian_eigensolve(Hh, b.omega, U);
  b.psi = isw.cast<Cplx>().asDiagonal() * U;
  b.w = w;
  const double rec = reconstruction_residual(b, H);
  if (rec > 1e-9) {
    throw NumericalError("spectral reconstruction failed (residual " + std::to_string(rec) + ")");
  }
  return b;
}

double orthonormality_residual(const SpectralBasis& b) {
  const CMat gram = b.psi.adjoint() * b.w.cast<Cplx>().asDiagonal() * b.psi;
  return (gram - CMat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

double reconstruction_residual(const SpectralBasis& b, const SpMat& H) {
  const CMat Hd(H);
  const CMat rec = b.psi * b.omega.cast<Cplx>().asDiagonal() * b.psi.adjoint() *
                   b.w.cast<Cplx>().asDiagonal();
  const double nrm = Hd.norm();
  return nrm > 0.0 ? (Hd - rec).norm() / nrm : (Hd - rec).norm();
}

CVec series_evolve(const SpectralBasis& b, const CVec& psi0, double t) {
  CVec c = b.coefficients(psi0);
  for (int n = 0; n < b.size(); ++n) c(n) *= std::exp(Cplx(0.0, -b.omega(n) * t));
  return b.synthesize(c);
}

CVec series_evolve_cn(const SpectralBasis& b, const CVec& psi0, double dt, long steps) {
  CVec c = b.coefficients(psi0);
  for (int n = 0; n < b.size(); ++n) {
    const double arg = -2.0 * static_cast<double>(steps) * std::atan(0.5 * b.omega(n) * dt);
    c(n) *= std::exp(Cplx(0.0, arg));
  }
  return b.synthesize(c);
}

RVec boundary_participation(const SpectralBasis& b, const DiscreteHamiltonian& H) {
  // reduced unknowns of the inner face come first (node-major ordering, ir = 0)
  const int nth = H.grid.nth();
  const int per_node = H.options.inner == FaceCondition::Chiral ? H.f() / 2 : H.f();
  const int n_face = nth * per_node;
  RVec out(b.size());
  for (int n = 0; n < b.size(); ++n) {
    double face = 0.0;
    for (int i = 0; i < n_face; ++i) face += b.w(i) * std::norm(b.psi(i, n));
    double total = 0.0;
    for (int i = 0; i < b.psi.rows(); ++i) total += b.w(i) * std::norm(b.psi(i, n));
    out(n) = face / total;
  }
  return out;
}

std::vector<double> smallest_abs_eigenvalues(const SpectralBasis& b, int n) {
  std::vector<double> v(b.omega.data(), b.omega.data() + b.omega.size());
  std::sort(v.begin(), v.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
  v.resize(std::min<std::size_t>(v.size(), static_cast<std::size_t>(n)));
  return v;
}

//--------------------------------------------------------------------------------------------------

BoundaryOperator boundary_operator_A(const MetricClosure& closure, double r0, int n_nodes,
                                     int k) {
  const int d = closure.dimension();
  const CliffordRep rep = flat_clifford_rep(d);
  const int f = rep.f;
  if (n_nodes < 4) throw ConfigError("boundary grid needs at least 4 nodes");
  BoundaryOperator op;
  op.f = f;
  Axis ax = d == 3 ? periodic_axis(0.0, 2.0 * kPi, n_nodes) : polar_axis(n_nodes);
  op.nodes = ax.nodes;
  op.h = ax.h;
  const int n = n_nodes;
  op.A0 = CMat::Zero(n * f, n * f);
  op.G = CMat::Zero(n * f, n * f);
  const RMat D(ax.D);
  for (int i = 0; i < n; ++i) {
    const BoundaryFrame bf = boundary_frame(closure, rep, r0, d == 4 ? ax.nodes(i) : 0.0);
    if (!(bf.Knorm > 0.0)) {
      throw SignatureError("K not timelike on the boundary (node " + std::to_string(i) + ")");
    }
    const CMat X = x_matrix(bf, 2);
    for (int j = 0; j < n; ++j) {
      if (D(i, j) != 0.0) op.A0.block(i * f, j * f, f, f) += D(i, j) * X;
    }
    if (d == 4) op.A0.block(i * f, i * f, f, f) += (kI * static_cast<double>(k)) * x_matrix(bf, 3);
    op.G.block(i * f, i * f, f, f) = bf.mu * ax.weights(i) * rep.S * bf.Kslash;
  }
  op.G = 0.5 * (op.G + op.G.adjoint()).eval();
  op.A0_star = op.G.ldlt().solve(op.A0.adjoint() * op.G);
  op.Z = -0.5 * (op.A0 - op.A0_star);
  op.A = 0.5 * (op.A0 + op.A0_star);
  return op;
}

double a_hermiticity_residual(const BoundaryOperator& op) {
  const CMat GA = op.G * op.A;
  return (GA - GA.adjoint()).norm() / GA.norm();
}

RVec a_spectrum(const BoundaryOperator& op, double* max_imag) {
  Eigen::LLT<CMat> llt(op.G);
  if (llt.info() != Eigen::Success) throw SignatureError("K-slash Gram matrix not positive");
  const CMat L = llt.matrixL();
  // L^* A L^{-*} = (C + C^*) / 2 with C = L^* A0 L^{-*}
  const CMat Linv = L.triangularView<Eigen::Lower>().solve(CMat::Identity(L.rows(), L.cols()));
  const CMat C = L.adjoint() * op.A0 * Linv.adjoint();
  RVec lam;
  CMat V;
  hermitian_eigensolve(0.5 * (C + C.adjoint()), lam, V);
  if (max_imag) {
    Eigen::ComplexEigenSolver<CMat> ces(op.A, false);
    *max_imag = ces.eigenvalues().imag().cwiseAbs().maxCoeff();
  }
  return lam;
}

double z_locality(const BoundaryOperator& op, int trials, std::uint64_t seed) {
  const int f = op.f;
  const int n = static_cast<int>(op.nodes.size());
  CMat Zl = CMat::Zero(n * f, n * f);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) Zl.block(i * f, i * f, f, f) += op.Z.block(i * f, j * f, f, f);
  }
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::vector<CVec> c(3, CVec::Zero(f));
    for (auto& v : c) {
      for (int a = 0; a < f; ++a) v(a) = Cplx(uniform(rng), uniform(rng));
    }
    CVec u(n * f);
    for (int i = 0; i < n; ++i) {
      const double x = op.nodes(i);
      u.segment(i * f, f) = c[0] + std::cos(x) * c[1] + std::sin(2.0 * x) * c[2];
    }
    const CVec r = (op.Z - Zl) * u;
    const double num = std::sqrt(std::abs(r.dot(op.G * r)));
    const double den = std::sqrt(std::abs(u.dot(op.G * u)));
    worst = std::max(worst, num / den);
  }
  return worst;
}

ASquaredReport a_squared_certificate(const BoundaryOperator& op, const MetricClosure& closure,
                                     double r0) {
  const int d = closure.dimension();
  const int f = op.f;
  const int n = static_cast<int>(op.nodes.size());
  const CliffordRep rep = flat_clifford_rep(d);
  RVec coef(n);
  for (int i = 0; i < n; ++i) {
    const BoundaryFrame bf = boundary_frame(closure, rep, r0, d == 4 ? op.nodes(i) : 0.0);
    coef(i) = std::abs(bf.ginv(2, 2) / bf.ginv(1, 1));
  }
  const CMat A2 = op.A * op.A;
  ASquaredReport rep_out;
  const int m_lo = std::max(1, n / 16);
  const int m_hi = std::max(m_lo + 2, n / 4);
  std::vector<double> kap2, val, pred_num, pred_den;
  for (int m = m_lo; m <= m_hi; ++m) {
    const double kappa = std::sin(m * op.h) / op.h;
    double sum = 0.0;
    double pn = 0.0, pd = 0.0;
    for (int a = 0; a < f; ++a) {
      CVec u = CVec::Zero(n * f);
      for (int i = 0; i < n; ++i) {
        const Cplx wave = d == 3 ? std::exp(Cplx(0.0, m * op.nodes(i))) : Cplx(std::sin(m * op.nodes(i)));
        u(i * f + a) = wave;
      }
      const Cplx num = u.dot(op.G * (A2 * u));
      const Cplx den = u.dot(op.G * u);
      sum += (num / den).real();
      for (int i = 0; i < n; ++i) {
        const double wgt = std::norm(u(i * f + a)) * op.G(i * f + a, i * f + a).real();
        pn += wgt * coef(i);
        pd += wgt;
      }
    }
    kap2.push_back(kappa * kappa);
    val.push_back(sum / f);
    pred_num.push_back(pn);
    pred_den.push_back(pd);
    rep_out.modes.push_back(m);
  }
  // least-squares fit val = c2 kappa^2 + c1 kappa + c0
  const int M = static_cast<int>(val.size());
  RMat X(M, 3);
  RVec y(M);
  for (int i = 0; i < M; ++i) {
    const double kap = std::sqrt(kap2[i]);
    X(i, 0) = kap2[i];
    X(i, 1) = kap;
    X(i, 2) = 1.0;
    y(i) = val[i];
  }
  const RVec c = X.colPivHouseholderQr().solve(y);
  rep_out.fitted = std::abs(c(0));
  rep_out.predicted = std::accumulate(pred_num.begin(), pred_num.end(), 0.0) /
                      std::accumulate(pred_den.begin(), pred_den.end(), 0.0);
  rep_out.mismatch = std::abs(rep_out.fitted - rep_out.predicted) / rep_out.predicted;
  return rep_out;
}

AnticommutatorReport anticommutator_check(const MetricClosure& closure, double r0,
                                          const RVec& theta_nodes) {
  const int d = closure.dimension();
  const CliffordRep rep = flat_clifford_rep(d);
  const int f = rep.f;
  AnticommutatorReport out;
  const int n = d == 4 ? static_cast<int>(theta_nodes.size()) : 1;
  for (int i = 0; i < n; ++i) {
    const BoundaryFrame bf = boundary_frame(closure, rep, r0, d == 4 ? theta_nodes(i) : 0.0);
    const double grr = bf.ginv(1, 1);
    for (int a = 2; a < d; ++a) {
      out.max_cross = std::max(out.max_cross, std::abs(bf.ginv(1, a)));
      for (int b = 2; b < d; ++b) {
        const CMat Xa = x_matrix(bf, a);
        const CMat Xb = x_matrix(bf, b);
        const CMat anti = Xa * Xb + Xb * Xa;
        const CMat plain = -2.0 * bf.ginv(a, b) / grr * CMat::Identity(f, f);
        const CMat corr = 2.0 / (grr * grr) * bf.gam[1] *
                          (bf.ginv(a, 1) * bf.gam[b] + bf.ginv(b, 1) * bf.gam[a]);
        out.plain = std::max(out.plain, (anti - plain).cwiseAbs().maxCoeff());
        out.general = std::max(out.general, (anti - plain - corr).cwiseAbs().maxCoeff());
      }
    }
  }
  return out;
}

//--------------------------------------------------------------------------------------------------

GardingReport garding_estimate(const DiscreteHamiltonian& H, const MetricClosure& closure) {
  const Grid& g = H.grid;
  const int d = g.d;
  const int f = H.f();
  const int N = g.nodes();
  const int nf = N * f;

  // full-space gradient operators, one per spatial chart direction
  std::vector<SpMat> grad;
  {
    std::vector<Eigen::Triplet<Cplx>> t;
    const RSpMat Dr = RSpMat(g.r.D.transpose());
    for (int ir = 0; ir < g.nr(); ++ir) {
      // the one-sided closure rows see the odd-even mode that the centred stencil of H
      // cannot; leaving them out keeps the seminorm consistent with H (O(h) quadrature loss)
      if (!g.periodic && (ir == 0 || ir == g.nr() - 1)) continue;
      for (RSpMat::InnerIterator it(Dr, ir); it; ++it) {
        for (int ith = 0; ith < g.nth(); ++ith) {
          for (int a = 0; a < f; ++a) {
            t.emplace_back(g.node(ir, ith) * f + a, g.node(static_cast<int>(it.row()), ith) * f + a,
                           it.value());
          }
        }
      }
    }
    SpMat G(nf, nf);
    G.setFromTriplets(t.begin(), t.end());
    grad.push_back(G);
  }
  if (d == 4) {
    std::vector<Eigen::Triplet<Cplx>> t;
    const RSpMat Dt = RSpMat(g.theta.D.transpose());
    for (int ith = 0; ith < g.nth(); ++ith) {
      for (RSpMat::InnerIterator it(Dt, ith); it; ++it) {
        for (int ir = 0; ir < g.nr(); ++ir) {
          for (int a = 0; a < f; ++a) {
            t.emplace_back(g.node(ir, ith) * f + a, g.node(ir, static_cast<int>(it.row())) * f + a,
                           it.value());
          }
        }
      }
    }
    SpMat G(nf, nf);
    G.setFromTriplets(t.begin(), t.end());
    grad.push_back(G);
  }
  {
    SpMat G(nf, nf);
    G.setIdentity();
    grad.push_back(G * (kI * static_cast<double>(g.k)));
  }

  // slice co-metric per node
  const int n_dir = d - 1;
  std::vector<RMat> hinv(N);
  for (int ir = 0; ir < g.nr(); ++ir) {
    for (int ith = 0; ith < g.nth(); ++ith) {
      const MetricSample s = closure.sample(closure.point(g.spatial(ir, ith)));
      hinv[g.node(ir, ith)] = s.slice_metric().inverse();
    }
  }
  const RVec wf = H.w_full();
  SpMat M(nf, nf);
  {
    SpMat W(nf, nf);
    W.reserve(Eigen::VectorXi::Constant(nf, 1));
    for (int i = 0; i < nf; ++i) W.insert(i, i) = wf(i);
    M = W;
  }
  for (int a = 0; a < n_dir; ++a) {
    for (int b = 0; b < n_dir; ++b) {
      SpMat Wab(nf, nf);
      Wab.reserve(Eigen::VectorXi::Constant(nf, 1));
      for (int i = 0; i < nf; ++i) Wab.insert(i, i) = wf(i) * hinv[i / f](a, b);
      M += SpMat(grad[a].adjoint()) * Wab * grad[b];
    }
  }
  const CMat Mred = CMat(SpMat(H.T.adjoint()) * M * H.T);
  const CMat Hd(H.H_red);
  const Eigen::VectorXcd wr = H.w_red.cast<Cplx>();
  CMat B = Hd.adjoint() * wr.asDiagonal() * Hd;
  B.diagonal() += wr;
  Eigen::GeneralizedSelfAdjointEigenSolver<CMat> ges(0.5 * (Mred + Mred.adjoint()),
                                                     0.5 * (B + B.adjoint()),
                                                     Eigen::EigenvaluesOnly);
  if (ges.info() != Eigen::Success) throw NumericalError("Garding eigensolve failed");
  GardingReport rep;
  rep.C = ges.eigenvalues().maxCoeff();
  return rep;
}

EllipticityReport ellipticity_certificate(const DiscreteHamiltonian& H,
                                          const MetricClosure& closure, int trials,
                                          std::uint64_t seed) {
  const Grid& g = H.grid;
  const int d = g.d;
  const CliffordRep& rep = H.rep;
  EllipticityReport out;
  out.delta = std::numeric_limits<double>::infinity();
  std::vector<MetricSample> samples;
  for (int ir = 0; ir < g.nr(); ++ir) {
    for (int ith = 0; ith < g.nth(); ++ith) {
      const MetricSample s = closure.sample(closure.point(g.spatial(ir, ith)));
      if (!(s.g(0, 0) > 0.0)) throw ConfigError("K not timelike in the region");
      const RMat neg = -s.ginv.bottomRightCorner(d - 1, d - 1);
      const RMat hinv = s.slice_metric().inverse();
      Eigen::GeneralizedSelfAdjointEigenSolver<RMat> ges(neg, hinv, Eigen::EigenvaluesOnly);
      out.delta = std::min(out.delta, ges.eigenvalues().minCoeff());
      samples.push_back(s);
    }
  }
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const MetricSample& s = samples[rng() % samples.size()];
    const auto gam = curved_gammas(rep, build_vielbein(s));
    const CMat Gt_inv = gam[0] / s.ginv(0, 0);
    const CMat Ks = slash(gam, s.g.col(0));
    const CMat Nx = rep.S * gam[0] * Ks * gam[0];
    auto nrm = [&](const CVec& v) { return v.dot(Nx * v).real(); };
    RVec xi(d - 1);
    for (int a = 0; a < d - 1; ++a) xi(a) = uniform(rng);
    CVec psi(rep.f);
    for (int a = 0; a < rep.f; ++a) psi(a) = Cplx(uniform(rng), uniform(rng));
    CMat xs = CMat::Zero(rep.f, rep.f);
    for (int a = 0; a < d - 1; ++a) xs += xi(a) * gam[a + 1];
    const double q = xi.dot(s.ginv.bottomRightCorner(d - 1, d - 1) * xi);
    const double lhs = nrm(Gt_inv * xs * psi);
    const double rhs = -q * nrm(Gt_inv * psi);
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    out.identity_residual = std::max(out.identity_residual, std::abs(lhs - rhs) / scale);
  }
  if (!(out.delta > 0.0)) throw ConfigError("region is not uniformly elliptic (delta <= 0)");
  return out;
}

}  // namespace dirac
