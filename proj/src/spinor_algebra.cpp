// Dirac laboratory - Clifford representations, frames, spin connection, spin products

#include "dirac/spinor_algebra.hpp"

#include <algorithm>
#include <cmath>

namespace dirac {

namespace {

CMat pauli(int i) {
  CMat s = CMat::Zero(2, 2);
  switch (i) {
    case 1:
      s(0, 1) = s(1, 0) = 1.0;
      break;
    case 2:
      s(0, 1) = -kI;
      s(1, 0) = kI;
      break;
    case 3:
      s(0, 0) = 1.0;
      s(1, 1) = -1.0;
      break;
    default:
      s = CMat::Identity(2, 2);
  }
  return s;
}

bool is_symmetry_direction(const MetricClosure& closure, int j) {
  const auto dirs = closure.symmetry_directions();
  return std::find(dirs.begin(), dirs.end(), j) != dirs.end();
}

double fd_step(const Point& p, int j, double h_frame) {
  return h_frame * std::max(1.0, std::abs(p(j)));
}

// Sample at p +/- h e_j, translating chart failures into a pole-exclusion error.
MetricSample shifted_sample(const MetricClosure& closure, const Point& p, int j, double h) {
  Point q = p;
  q(j) += h;
  try {
    return closure.sample(q);
  } catch (const DomainError& e) {
    throw DomainError(std::string("frame differentiation left the chart (pole exclusion): ") +
                      e.what());
  }
}

}  // namespace

CliffordRep flat_clifford_rep(int d) {
  CliffordRep rep;
  rep.d = d;
  if (d == 3) {
    rep.f = 2;
    rep.gamma = {pauli(3), kI * pauli(1), kI * pauli(2)};
  } else if (d == 4) {
    rep.f = 4;
    const CMat Z = CMat::Zero(2, 2);
    const CMat I2 = CMat::Identity(2, 2);
    auto blocks = [](const CMat& a, const CMat& b, const CMat& c, const CMat& e) {
      CMat m(4, 4);
      m << a, b, c, e;
      return m;
    };
    rep.gamma.push_back(blocks(Z, I2, I2, Z));
    for (int i = 1; i <= 3; ++i) rep.gamma.push_back(blocks(Z, pauli(i), -pauli(i), Z));
  } else {
    throw ConfigError("flat_clifford_rep supports d = 3 and d = 4 only");
  }
  rep.S = rep.gamma[0];
  rep.eta = -RVec::Ones(d);
  rep.eta(0) = 1.0;
  return rep;
}

Vielbein build_vielbein(const MetricSample& s) {
  const int d = s.dim();
  const double gtt = s.ginv(0, 0);
  if (!(gtt > 0.0)) throw SignatureError("g^tt <= 0: constant-t slice is not spacelike");
  const RMat& g = s.g;
  auto dot = [&](const RVec& u, const RVec& v) { return u.dot(g * v); };

  Vielbein vb;
  vb.frame = RMat::Zero(d, d);
  vb.frame.row(0) = s.ginv.col(0).transpose() / std::sqrt(gtt);
  for (int a = 1; a < d; ++a) {
    RVec v = RVec::Unit(d, a);
    for (int b = 0; b < a; ++b) {
      const RVec eb = vb.frame.row(b).transpose();
      const double eta_b = b == 0 ? 1.0 : -1.0;
      v -= eta_b * dot(v, eb) * eb;
    }
    const double nrm = dot(v, v);
    if (!(nrm < 0.0)) throw SignatureError("slice metric g_N is not positive definite");
    vb.frame.row(a) = v.transpose() / std::sqrt(-nrm);
  }
  // e^a_j = eta_ab g_jk e_b^k
  RMat eta = -RMat::Identity(d, d);
  eta(0, 0) = 1.0;
  vb.coframe = eta * vb.frame * g;
  return vb;
}

std::vector<CMat> curved_gammas(const CliffordRep& rep, const Vielbein& vb) {
  const int d = rep.d;
  std::vector<CMat> out(d, CMat::Zero(rep.f, rep.f));
  for (int j = 0; j < d; ++j) {
    for (int a = 0; a < d; ++a) out[j] += vb.frame(a, j) * rep.gamma[a];
  }
  return out;
}

CMat slash(const std::vector<CMat>& gammas, const RVec& covector) {
  CMat out = CMat::Zero(gammas[0].rows(), gammas[0].cols());
  for (std::size_t j = 0; j < gammas.size(); ++j) out += covector(j) * gammas[j];
  return out;
}

SpinConnection spin_connection(const MetricClosure& closure, const CliffordRep& rep,
                               const Point& p, double h_frame) {
  const int d = rep.d;
  const MetricSample s = closure.sample(p);
  const Vielbein vb = build_vielbein(s);
  const auto gamma = christoffels(s);

  SpinConnection sc;
  sc.omega.assign(d, RMat::Zero(d, d));
  sc.sigma.assign(d, CMat::Zero(rep.f, rep.f));
  for (int j = 0; j < d; ++j) {
    RMat dframe = RMat::Zero(d, d);  // d_j e_a^k
    if (!is_symmetry_direction(closure, j)) {
      const double h = fd_step(p, j, h_frame);
      const Vielbein vp = build_vielbein(shifted_sample(closure, p, j, h));
      const Vielbein vm = build_vielbein(shifted_sample(closure, p, j, -h));
      dframe = (vp.frame - vm.frame) / (2.0 * h);
    }
    // (nabla_j e_a)^k = d_j e_a^k + Gamma^k_jm e_a^m
    RMat nabla = dframe;
    for (int a = 0; a < d; ++a) {
      for (int k = 0; k < d; ++k) {
        nabla(a, k) += gamma[k].row(j).dot(vb.frame.row(a));
      }
    }
    // omega_jab = <e_b, nabla_j e_a>
    RMat w = vb.frame * s.g * nabla.transpose();  // w(b, a)
    w.transposeInPlace();
    sc.omega[j] = 0.5 * (w - w.transpose());
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        if (sc.omega[j](a, b) != 0.0) {
          sc.sigma[j] += -0.25 * sc.omega[j](a, b) * rep.gamma[a] * rep.gamma[b];
        }
      }
    }
  }
  return sc;
}

double clifford_compatibility_residual(const MetricClosure& closure, const CliffordRep& rep,
                                       const Point& p, const SpinConnection& sc,
                                       double h_frame) {
  const int d = rep.d;
  const MetricSample s = closure.sample(p);
  const auto gam = curved_gammas(rep, build_vielbein(s));
  const auto chr = christoffels(s);
  double worst = 0.0;
  for (int j = 0; j < d; ++j) {
    std::vector<CMat> dgam(d, CMat::Zero(rep.f, rep.f));
    if (!is_symmetry_direction(closure, j)) {
      const double h = fd_step(p, j, h_frame);
      const auto gp = curved_gammas(rep, build_vielbein(shifted_sample(closure, p, j, h)));
      const auto gm = curved_gammas(rep, build_vielbein(shifted_sample(closure, p, j, -h)));
      for (int k = 0; k < d; ++k) dgam[k] = (gp[k] - gm[k]) / (2.0 * h);
    }
    for (int k = 0; k < d; ++k) {
      CMat r = dgam[k] + sc.sigma[j] * gam[k] - gam[k] * sc.sigma[j];
      for (int l = 0; l < d; ++l) r += chr[k](j, l) * gam[l];
      worst = std::max(worst, r.cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

Cplx spin_product(const CliffordRep& rep, const CVec& phi, const CVec& psi) {
  return phi.dot(rep.S * psi);
}

double slice_norm(const CliffordRep& rep, const MetricSample& s, const CVec& psi) {
  const auto gam = curved_gammas(rep, build_vielbein(s));
  RVec nu = RVec::Zero(rep.d);
  nu(0) = 1.0 / std::sqrt(s.ginv(0, 0));
  return spin_product(rep, psi, slash(gam, nu) * psi).real();
}

double boundary_norm(const CliffordRep& rep, const MetricSample& s, const CVec& psi) {
  const double kk = s.g(0, 0);
  if (!(kk > 0.0)) throw SignatureError("boundary product needs K timelike (<K,K> <= 0)");
  const auto gam = curved_gammas(rep, build_vielbein(s));
  const RVec Kflat = s.g.col(0);  // K_j = g_jt
  return spin_product(rep, psi, slash(gam, Kflat) * psi).real();
}

}  // namespace dirac
