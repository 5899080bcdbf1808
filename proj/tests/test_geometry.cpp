// Dirac laboratory - metric closures, horizons, Killing mix, Gaussian normal chart
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "dirac/gaussian_chart.hpp"
#include "dirac/geometry.hpp"
#include "dirac/hamiltonian.hpp"
#include "support.hpp"

using namespace dirac;
using namespace dirac::testing;

namespace {

RVec random_spatial(const MetricClosure& c, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int d = c.dimension();
  RVec x(d - 1);
  x(0) = lo + (hi - lo) * u(rng);
  if (d == 4) {
    x(1) = 0.2 + (kPi - 0.4) * u(rng);
    x(2) = 2 * kPi * u(rng);
  } else {
    x(1) = 2 * kPi * u(rng);
  }
  return x;
}

std::vector<std::shared_ptr<const MetricClosure>> curved_metrics() {
  KerrParams k;
  k.a = 0.7;
  KerrParams kb = k;
  kb.b = 0.4;
  return {make_metric("kerr_ef", k), make_metric("kerr_ef", kb),
          make_metric("ef_schwarzschild3", KerrParams{}), make_metric("sphere_slice", KerrParams{}),
          make_metric("flat", KerrParams{})};
}

}  // namespace

TEST_CASE("analytic derivatives agree with centred differences") {
  std::mt19937_64 rng(11);
  for (const auto& c : curved_metrics()) {
    const auto [rlo, rhi] = c->radial_range();
    const double lo = std::max(rlo + 0.2, 0.3), hi = std::min(rhi - 0.2, 5.0);
    for (int trial = 0; trial < 50; ++trial) {
      const Point p = c->point(random_spatial(*c, rng, lo, hi));
      const MetricSample s = c->sample(p);
      for (int k = 0; k < s.dim(); ++k) {
        const double h = 1e-5;
        Point pp = p, pm = p;
        pp(k) += h;
        pm(k) -= h;
        const RMat fd = (c->sample(pp).g - c->sample(pm).g) / (2 * h);
        CHECK((fd - s.dg[k]).cwiseAbs().maxCoeff() < 1e-7 * std::max(1.0, fd.cwiseAbs().maxCoeff()));
      }
      CHECK((s.ginv * s.g - RMat::Identity(s.dim(), s.dim())).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(s.detg == doctest::Approx(s.g.determinant()).epsilon(1e-12));
      CHECK(s.g.isApprox(s.g.transpose()));
    }
  }
}

TEST_CASE("Kerr inverse radial component vanishes on both horizons") {
  for (double a : {0.3, 0.5, 0.8, 0.95}) {
    KerrParams p;
    p.a = a;
    const auto [rm, rp] = horizon_radii(1.0, a);
    CHECK(rm == doctest::Approx(1 - std::sqrt(1 - a * a)).epsilon(1e-14));
    CHECK(rp == doctest::Approx(1 + std::sqrt(1 - a * a)).epsilon(1e-14));
    for (double th : {0.3, 1.0, kPi / 2, 2.5}) {
      for (double r : {rm, rp}) {
        RVec x(3);
        x << r, th, 0.0;
        const MetricSample s = kerr_ef_sample(p, make_metric("kerr_ef", p)->point(x));
        CHECK(std::abs(s.ginv(1, 1)) < 1e-11);  // Delta = r^2 - 2Mr + a^2 cancels
      }
    }
  }
}

TEST_CASE("Kerr Killing norm at the equator is 1 - 2M/r") {
  KerrParams p;
  p.a = 0.5;
  const auto c = make_metric("kerr_ef", p);
  RVec x(3);
  x << 3.0, kPi / 2, 0.0;
  CHECK(killing_norm(*c, c->point(x)) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  // co-rotating chart: <d_t + b d_phi, same> of the base chart
  KerrParams pb = p;
  pb.b = 0.3;
  const MetricSample s0 = c->sample(c->point(x));
  const auto cb = make_metric("kerr_ef", pb);
  const double mixed = s0.g(0, 0) + 2 * 0.3 * s0.g(0, 3) + 0.09 * s0.g(3, 3);
  CHECK(killing_norm(*cb, cb->point(x)) == doctest::Approx(mixed).epsilon(1e-13));
}

TEST_CASE("flat polar Christoffels") {
  const auto c = make_metric("flat", KerrParams{});
  RVec x(2);
  x << 1.7, 0.4;
  const auto G = christoffels(*c, c->point(x));
  CHECK(G[1](2, 2) == doctest::Approx(-1.7));
  CHECK(G[2](1, 2) == doctest::Approx(1.0 / 1.7));
  CHECK(G[2](2, 1) == doctest::Approx(1.0 / 1.7));
  CHECK(std::abs(G[1](1, 1)) < 1e-14);
  CHECK(c->characteristic_speed(c->point(x), 1) == doctest::Approx(1.0));
}

TEST_CASE("invalid parameters and off-chart points") {
  CHECK_THROWS_AS(horizon_radii(1.0, 1.0), ConfigError);
  KerrParams bad;
  bad.a = 1.2;
  CHECK_THROWS_AS(make_metric("kerr_ef", bad), ConfigError);
  CHECK_THROWS_AS(make_metric("anti_de_sitter", KerrParams{}), ConfigError);
  const auto k = make_metric("kerr_ef", KerrParams{});
  RVec x(3);
  x << -0.1, 1.0, 0.0;
  CHECK_THROWS_AS(k->sample(k->point(x)), DomainError);
  x << 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(k->sample(k->point(x)), DomainError);
}

TEST_CASE("horizon search") {
  KerrParams p;
  p.a = 0.6;
  const auto h = locate_horizons(*make_metric("kerr_ef", p), 1e-3, 5.0);
  REQUIRE(h.size() == 2);
  CHECK(h[0] == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(h[1] == doctest::Approx(1.8).epsilon(1e-9));
  const auto h3 = locate_horizons(*make_metric("ef_schwarzschild3", KerrParams{}), 0.5, 5.0);
  REQUIRE(h3.size() == 1);
  CHECK(h3[0] == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("timelike Killing mix") {
  const KerrSetup ks = kerr_setup();
  const auto base = make_metric("kerr_ef", KerrParams{1.0, 0.95, 0.0, ks.r0});
  const TimelikeMix mix = find_timelike_mix(*base, ks.r0, {-6.0, 6.0}, 64);
  CHECK(mix.min_norm > 0.0);
  CHECK(mix.b == doctest::Approx(ks.params.b));
  // at the optimum no nearby b does better
  for (double db : {-0.05, 0.05}) {
    double worst = 1e300;
    const RVec th = polar_axis(64).nodes;
    for (int i = 0; i < th.size(); ++i) {
      RVec x(3);
      x << ks.r0, th(i), 0.0;
      const MetricSample s = base->sample(base->point(x));
      const double b = mix.b + db;
      worst = std::min(worst, s.g(0, 0) + 2 * b * s.g(0, 3) + b * b * s.g(3, 3));
    }
    CHECK(worst <= mix.min_norm + 1e-12);
  }
  // between the horizons of a slowly rotating hole nothing is timelike
  const auto schw = make_metric("ef_schwarzschild", KerrParams{});
  try {
    find_timelike_mix(*schw, 1.0, {-3.0, 3.0}, 32);
    FAIL("expected InfeasibleMix");
  } catch (const InfeasibleMix& e) {
    CHECK(e.deficit > 0.0);
  }
}

TEST_CASE("Gaussian chart of a flat annulus is the polar chart") {
  const auto flat = make_metric("flat", KerrParams{});
  const GaussianChart ch = gaussian_normal_chart(flat, 1.0, 0.8, RVec());
  for (double rho : {0.0, 0.13, 0.5, 0.79}) {
    RVec om(1);
    om << 0.3;
    const RVec x = ch.map(rho, om);
    CHECK(x(0) == doctest::Approx(1.0 + rho).epsilon(1e-10));
    CHECK(x(1) == doctest::Approx(0.3).epsilon(1e-10));
    const RMat g = ch.slice_metric(rho, om);
    CHECK(g(0, 0) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(g(1, 1) == doctest::Approx((1.0 + rho) * (1.0 + rho)).epsilon(1e-8));
    CHECK(std::abs(g(0, 1)) < 1e-8);
    const RVec back = ch.inverse(x);
    CHECK(back(0) == doctest::Approx(rho).epsilon(1e-9));
  }
}

TEST_CASE("Gaussian chart refuses to reach the focal point of a sphere") {
  // circle chi0 = pi/2 on the unit sphere: normals refocus at distance pi/2
  const auto sph = make_metric("sphere_slice", KerrParams{});
  CHECK_NOTHROW(gaussian_normal_chart(sph, kPi / 2, 1.2, RVec()));
  CHECK_THROWS_AS(gaussian_normal_chart(sph, kPi / 2, 1.6, RVec()), ChartError);
  // geodesic distance along a meridian is chi itself
  const GaussianChart ch = gaussian_normal_chart(sph, kPi / 2, 1.0, RVec());
  RVec om(1);
  om << 0.0;
  CHECK(ch.map(0.7, om)(0) == doctest::Approx(kPi / 2 + 0.7).epsilon(1e-8));
  CHECK(ch.slice_metric(0.7, om)(1, 1) ==
        doctest::Approx(std::pow(std::sin(kPi / 2 + 0.7), 2)).epsilon(1e-7));
}
