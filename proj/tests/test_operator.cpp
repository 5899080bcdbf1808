// Dirac laboratory - difference operators, face projectors, discrete Hamiltonian
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <sstream>

#include "dirac/grid.hpp"
#include "dirac/hamiltonian.hpp"
#include "dirac/spectral.hpp"
#include "support.hpp"

using namespace dirac;
using namespace dirac::testing;

TEST_CASE("summation by parts") {
  for (int order : {2, 4}) {
    for (int n : {8, 13, 40}) {
      const Axis ax = sbp_axis(0.5, 2.0, n, order);
      const RMat WD = ax.weights.asDiagonal() * RMat(ax.D);
      RMat B = RMat::Zero(n + 1, n + 1);
      B(0, 0) = -1.0;
      B(n, n) = 1.0;
      CHECK((WD + WD.transpose() - B).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(ax.weights.sum() == doctest::Approx(1.5).epsilon(1e-14));
    }
  }
  for (int order : {2, 4}) {
    const Axis ax = periodic_axis(0.0, 1.0, 17, order);
    const RMat WD = ax.weights.asDiagonal() * RMat(ax.D);
    CHECK((WD + WD.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  }
  const Axis pol = polar_axis(12);
  const RMat WD = pol.weights.asDiagonal() * RMat(pol.D);
  CHECK((WD + WD.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(pol.nodes(0) > 0.0);
  CHECK(pol.nodes(11) < kPi);
}

TEST_CASE("difference operators are exact on low-degree polynomials") {
  // order 2: exact on quadratics in the interior, on lines at the closure rows
  const Axis a2 = sbp_axis(0.0, 1.0, 20, 2);
  const RVec x = a2.nodes;
  const RVec d2 = a2.D * x.cwiseProduct(x);
  for (int i = 1; i < 20; ++i) CHECK(d2(i) == doctest::Approx(2 * x(i)).epsilon(1e-12));
  CHECK((a2.D * x - RVec::Ones(21)).cwiseAbs().maxCoeff() < 1e-12);
  // order 4: exact on quartics in the interior, quadratics at the closure
  const Axis a4 = sbp_axis(0.0, 1.0, 24, 4);
  const RVec y = a4.nodes;
  const RVec q = a4.D * y.array().pow(4).matrix();
  for (int i = 4; i < 21; ++i) CHECK(q(i) == doctest::Approx(4 * std::pow(y(i), 3)).epsilon(1e-10));
  const RVec s = a4.D * y.cwiseProduct(y);
  CHECK((s - 2 * y).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("grid construction errors") {
  CHECK_THROWS_AS(sbp_axis(1.0, 0.0, 10), ConfigError);
  CHECK_THROWS_AS(sbp_axis(0.0, 1.0, 4, 4), ConfigError);
  CHECK_THROWS_AS(sbp_axis(0.0, 1.0, 10, 6), ConfigError);
  CHECK_THROWS_AS(make_grid(5, 0.0, 1.0, 10, 1, 0), ConfigError);
  const Grid g = make_grid(4, 1.0, 2.0, 20, 6, 1);
  const Grid sub = radial_subgrid(g, 0, 10);
  CHECK(sub.nr() == 11);
  CHECK(sub.r.nodes(10) == doctest::Approx(g.r.nodes(10)));
  CHECK(sub.nth() == 6);
  CHECK_THROWS_AS(radial_subgrid(g, 5, 6), ConfigError);
}

TEST_CASE("face projectors") {
  const KerrSetup ks = kerr_setup();
  const CliffordRep rep = flat_clifford_rep(4);
  for (double th : {0.2, 1.0, 2.0}) {
    RVec x(3);
    x << ks.r0, th, 0.0;
    const MetricSample s = ks.closure->sample(ks.closure->point(x));
    for (int side : {-1, 1}) {
      const BoundaryProjector bp = boundary_projector(s, rep, side);
      CHECK((bp.P * bp.P - bp.P).cwiseAbs().maxCoeff() < 1e-13);
      CHECK((bp.P * bp.Q).cwiseAbs().maxCoeff() < 1e-13);
      CHECK((bp.Q.adjoint() * bp.Q - CMat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-13);
      CHECK(bp.normal.dot(s.ginv * bp.normal) == doctest::Approx(-1.0));
      // inner normal points to larger r
      CHECK((s.ginv * bp.normal)(1) * side < 0.0);
    }
  }
  // a spacelike face has no chiral condition
  const auto ef3 = make_metric("ef_schwarzschild3", KerrParams{});
  RVec y(2);
  y << 1.5, 0.0;
  CHECK_THROWS_AS(boundary_projector(ef3->sample(ef3->point(y)), flat_clifford_rep(3), -1),
                  SignatureError);
}

TEST_CASE("periodic flat operator has the central-difference dispersion relation") {
  const auto cart = make_metric("flat_cartesian", KerrParams{});
  OperatorOptions o;
  o.m = 0.7;
  const int n = 32;
  const double L = 2 * kPi;
  const auto H = assemble_hamiltonian(make_periodic_grid(3, 0.0, L, n, 1, 0), *cart, o);
  RVec lam;
  CMat V;
  hermitian_eigensolve(CMat(H.H_red), lam, V);
  std::vector<double> expect;
  const double h = L / n;
  for (int j = 0; j < n; ++j) {
    const double s = std::sin(2 * kPi * j / L * h) / h;
    expect.push_back(std::sqrt(s * s + o.m * o.m));
    expect.push_back(-std::sqrt(s * s + o.m * o.m));
  }
  std::sort(expect.begin(), expect.end());
  REQUIRE(lam.size() == 2 * n);
  for (int i = 0; i < lam.size(); ++i) CHECK(lam(i) == doctest::Approx(expect[i]).epsilon(1e-12));
}

TEST_CASE("reduced operator is w-Hermitian and its range satisfies the face condition") {
  const KerrSetup ks = kerr_setup();
  OperatorOptions o;
  o.m = 0.3;
  o.potential.kind = Potential::Kind::Scalar;
  o.potential.v0 = 0.4;
  for (int order : {2, 4}) {
    const auto H = assemble_hamiltonian(make_grid(4, ks.r0, ks.r_outer, 16, 6, 1, order),
                                        *ks.closure, o);
    CHECK(hermiticity_residual(H.H_red, H.w_red) < 1e-14);
    CHECK(symmetry_residual(H, 4, 1) < 1e-12);
    std::mt19937_64 rng(2);
    CVec red(H.reduced_dim());
    for (Eigen::Index i = 0; i < red.size(); ++i) red(i) = random_spinor(rng, 1)(0);
    const CVec full = H.expand(red);
    CHECK(H.boundary_residual(full, true) < 1e-13);
    CHECK(H.boundary_residual(full, false) < 1e-13);
    // T is a w-isometry onto its range
    CHECK(w_norm(full, H.w_full()) == doctest::Approx(w_norm(red, H.w_red)).epsilon(1e-12));
    CHECK((H.reduce(full) - red).norm() < 1e-12 * red.norm());
  }
}

TEST_CASE("pre-symmetrisation residual: consistent for the spin-symmetric potential only") {
  const auto flat = flat_polar();
  OperatorOptions o;
  o.m = 0.5;
  o.potential.kind = Potential::Kind::Scalar;
  o.potential.v0 = 1.0;
  std::vector<double> good, bad;
  for (int n : {32, 64}) {
    const auto H = assemble_hamiltonian(make_grid(3, 1.0, 3.0, n, 1, 1), *flat, o);
    good.push_back(symmetry_residual(H, 6, 3, false));
  }
  o.potential.kind = Potential::Kind::Broken;
  for (int n : {32, 64}) {
    const auto H = assemble_hamiltonian(make_grid(3, 1.0, 3.0, n, 1, 1), *flat, o);
    bad.push_back(symmetry_residual(H, 6, 3, false));
  }
  CHECK(good[1] < 0.5 * good[0]);
  CHECK(bad[1] > 0.1);
  CHECK(bad[1] > 0.8 * bad[0]);
}

TEST_CASE("principal symbol determinant on a worked example") {
  // flat polar at r = 2, xi = (3, 4): g^{ab} xi xi = -(9 + 16/4) = -13, f = 2
  const auto flat = flat_polar();
  RVec x(2), xi(2);
  x << 2.0, 0.0;
  xi << 3.0, 4.0;
  const SymbolSample s = principal_symbol(*flat, flat_clifford_rep(3), flat->point(x), xi);
  CHECK(s.det_formula.real() == doctest::Approx(13.0));
  CHECK(s.detP.real() == doctest::Approx(13.0).epsilon(1e-12));
  CHECK(std::abs(s.detP.imag()) < 1e-12);
}

TEST_CASE("bump data") {
  const auto flat = flat_polar();
  const auto H = assemble_hamiltonian(make_grid(3, 1.0, 3.0, 64, 1, 1), *flat, OperatorOptions{});
  BumpSpec b;
  b.r_center = 2.0;
  b.r_radius = 0.4;
  b.spinor = CVec::Ones(2);
  const CVec psi = make_bump_data(H, b);
  for (int ir = 0; ir < H.grid.nr(); ++ir) {
    const double r = H.grid.r.nodes(ir);
    if (std::abs(r - 2.0) >= 0.4) CHECK(psi.segment(2 * ir, 2).norm() == 0.0);
  }
  CHECK(psi.segment(2 * 32, 2).norm() == doctest::Approx(std::sqrt(2.0)));
  b.r_center = 1.2;
  b.r_radius = 0.15;
  CHECK_THROWS_AS(make_bump_data(H, b), ConfigError);
}

TEST_CASE("matrix export") {
  const auto H = assemble_hamiltonian(make_grid(3, 1.0, 2.0, 6, 1, 0), *flat_polar(),
                                      OperatorOptions{});
  std::ostringstream out;
  export_coo(H.H_red, out);
  std::istringstream in(out.str());
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    ++lines;
  }
  CHECK(lines == H.H_red.nonZeros());
}
