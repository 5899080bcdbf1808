// Dirac laboratory - Clifford representations, frames, spin connection, spin products
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "dirac/geometry.hpp"
#include "dirac/spinor_algebra.hpp"
#include "support.hpp"

using namespace dirac;
using namespace dirac::testing;

namespace {

double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

Point random_point(const MetricClosure& c, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RVec x(c.dimension() - 1);
  x(0) = lo + (hi - lo) * u(rng);
  if (c.dimension() == 4) {
    x(1) = 0.2 + (kPi - 0.4) * u(rng);
    x(2) = 2 * kPi * u(rng);
  } else {
    x(1) = 2 * kPi * u(rng);
  }
  return c.point(x);
}

}  // namespace

TEST_CASE("flat representations satisfy the Clifford relations") {
  for (int d : {3, 4}) {
    const CliffordRep rep = flat_clifford_rep(d);
    CHECK(rep.f == (d == 3 ? 2 : 4));
    const CMat I = CMat::Identity(rep.f, rep.f);
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        const double eta = a == b ? rep.eta(a) : 0.0;
        CHECK(max_abs(rep.gamma[a] * rep.gamma[b] + rep.gamma[b] * rep.gamma[a] - 2 * eta * I) ==
              0.0);
      }
      // gamma^(0) Hermitian, spatial gammas anti-Hermitian
      CHECK(max_abs(rep.gamma[a].adjoint() - rep.eta(a) * rep.gamma[a]) == 0.0);
    }
    CHECK(max_abs(rep.S - rep.gamma[0]) == 0.0);
  }
  CHECK_THROWS_AS(flat_clifford_rep(5), ConfigError);
}

TEST_CASE("vielbein is orthonormal and adapted to the slice") {
  std::mt19937_64 rng(3);
  KerrParams k;
  k.a = 0.9;
  for (const auto& c : {make_metric("kerr_ef", k), make_metric("ef_schwarzschild3", KerrParams{}),
                        make_metric("sphere_slice", KerrParams{})}) {
    const int d = c->dimension();
    RMat eta = -RMat::Identity(d, d);
    eta(0, 0) = 1.0;
    for (int t = 0; t < 100; ++t) {
      const MetricSample s = c->sample(random_point(*c, rng, 0.3, 3.0));
      const Vielbein vb = build_vielbein(s);
      CHECK((vb.frame * s.g * vb.frame.transpose() - eta).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((vb.coframe * vb.frame.transpose() - RMat::Identity(d, d)).cwiseAbs().maxCoeff() <
            1e-12);
      // e_0 is the unit normal nu^j = g^{jt} / sqrt(g^tt)
      const RVec nu = s.ginv.col(0) / std::sqrt(s.ginv(0, 0));
      CHECK((vb.frame.row(0).transpose() - nu).cwiseAbs().maxCoeff() < 1e-12);
      for (int a = 0; a < d; ++a) CHECK(vb.coframe(a, a) > 0.0);
    }
  }
}

TEST_CASE("slice product is Euclidean in the component basis") {
  std::mt19937_64 rng(5);
  KerrParams k;
  k.a = 0.6;
  const auto c = make_metric("kerr_ef", k);
  const CliffordRep rep = flat_clifford_rep(4);
  for (int t = 0; t < 100; ++t) {
    const MetricSample s = c->sample(random_point(*c, rng, 0.2, 4.0));
    const CVec psi = random_spinor(rng, 4);
    CHECK(slice_norm(rep, s, psi) == doctest::Approx(psi.squaredNorm()).epsilon(1e-12));
  }
}

TEST_CASE("spin connection makes the curved gammas covariantly constant") {
  std::mt19937_64 rng(7);
  KerrParams k;
  k.a = 0.8;
  KerrParams kb = k;
  kb.b = 0.5;
  for (const auto& c : {make_metric("kerr_ef", k), make_metric("kerr_ef", kb),
                        make_metric("ef_schwarzschild3", KerrParams{}),
                        make_metric("flat", KerrParams{}), make_metric("sphere_slice", KerrParams{})}) {
    const CliffordRep rep = flat_clifford_rep(c->dimension());
    const auto [lo, hi] = c->radial_range();
    for (int t = 0; t < 20; ++t) {
      const Point p = random_point(*c, rng, std::max(lo + 0.2, 0.3), std::min(hi - 0.2, 4.0));
      const SpinConnection sc = spin_connection(*c, rep, p);
      // centred frame differences: O(h_frame^2) truncation, larger near r = 0.3 of Kerr
      CHECK(clifford_compatibility_residual(*c, rep, p, sc) < 1e-6);
      for (const auto& w : sc.omega) CHECK((w + w.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("compatibility residual is a second-order difference error") {
  KerrParams k;
  k.a = 0.8;
  const auto c = make_metric("kerr_ef", k);
  const CliffordRep rep = flat_clifford_rep(4);
  RVec x(3);
  x << 0.6, 1.1, 0.0;
  const Point p = c->point(x);
  const double e1 = clifford_compatibility_residual(*c, rep, p, spin_connection(*c, rep, p, 2e-3), 2e-3);
  const double e2 = clifford_compatibility_residual(*c, rep, p, spin_connection(*c, rep, p, 1e-3), 1e-3);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("flat polar spin connection") {
  // e_1 = d_r, e_2 = d_phi / r rotate with phi: sigma_phi = -(1/2) gamma^(1) gamma^(2)
  const auto c = make_metric("flat", KerrParams{});
  const CliffordRep rep = flat_clifford_rep(3);
  RVec x(2);
  x << 1.3, 0.0;
  const SpinConnection sc = spin_connection(*c, rep, c->point(x));
  CHECK(max_abs(sc.sigma[0]) < 1e-12);
  CHECK(max_abs(sc.sigma[1]) < 1e-9);
  const CMat expect = -0.5 * rep.gamma[1] * rep.gamma[2];
  CHECK(std::min(max_abs(sc.sigma[2] - expect), max_abs(sc.sigma[2] + expect)) < 1e-9);
  // and the Cartesian chart has none
  const auto cart = make_metric("flat_cartesian", KerrParams{});
  RVec y(2);
  y << 0.4, 0.0;
  for (const auto& s : spin_connection(*cart, rep, cart->point(y)).sigma) CHECK(max_abs(s) == 0.0);
}

TEST_CASE("boundary product needs a timelike Killing field") {
  const KerrSetup ks = kerr_setup();
  const CliffordRep rep = flat_clifford_rep(4);
  std::mt19937_64 rng(9);
  for (double th : {0.3, 1.2, kPi / 2, 2.8}) {
    RVec x(3);
    x << ks.r0, th, 0.0;
    const MetricSample s = ks.closure->sample(ks.closure->point(x));
    for (int t = 0; t < 10; ++t) CHECK(boundary_norm(rep, s, random_spinor(rng, 4)) > 0.0);
  }
  // inside the ergoregion of the non-rotating chart
  KerrParams p;
  p.a = 0.5;
  const auto c = make_metric("kerr_ef", p);
  RVec x(3);
  x << 1.0, kPi / 2, 0.0;
  CHECK_THROWS_AS(boundary_norm(rep, c->sample(c->point(x)), random_spinor(rng, 4)),
                  SignatureError);
}
