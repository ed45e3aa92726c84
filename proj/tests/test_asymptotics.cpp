#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <vector>

#include "einbein/action.hpp"
#include "einbein/asymptotics.hpp"
#include "einbein/critical.hpp"
#include "einbein/quadrature.hpp"
#include "einbein/thimble.hpp"

using namespace einbein;

namespace {

RefractionModel constant_model(double n0sq, int dim = 2) {
  RefractionModel m;
  m.kind = ModelKind::Constant;
  m.dim = dim;
  m.n0sq = n0sq;
  return m;
}

RefractionModel linear_model(double n0sq, double a) {
  RefractionModel m;
  m.kind = ModelKind::LinearZ;
  m.n0sq = n0sq;
  m.a = a;
  return m;
}

SourceSpec point_source(const Eigen::VectorXd& loc) {
  SourceSpec s;
  s.kind = SourceKind::PointDelta;
  s.location = loc;
  return s;
}

SourceSpec sheet_source(const Eigen::VectorXd& loc, double mu) {
  SourceSpec s;
  s.kind = SourceKind::PhaseSheet;
  s.location = loc;
  s.mu = mu;
  return s;
}

const Region kWide{-1e6, 1e6, -1e6, 1e6};

std::vector<Thimble> trace_all(const EinbeinAction& action,
                               const std::vector<CriticalPoint>& cps) {
  std::vector<Thimble> out;
  for (const auto& cp : cps) {
    if (std::abs(cp.second_deriv) < 1e-6) continue;
    out.push_back(trace_thimble(action, cp));
  }
  return out;
}

/// Independent Airy oracle: Ai(z) = (1/2 pi i) int exp(t^3/3 - z t) dt over
/// the two rays from the origin to infinity at angles +-pi/3. weight = 1 for
/// Ai, weight = -t for Ai'.
Complex airy_contour(Complex z, bool prime) {
  using boost::math::quadrature::gauss_kronrod;
  auto ray = [&](double ang) {
    const Complex dir = std::exp(I * ang);
    auto re = [&](double r) {
      Complex t = r * dir;
      Complex w = std::exp(t * t * t / 3.0 - z * t) * dir;
      if (prime) w *= -t;
      return w.real();
    };
    auto im = [&](double r) {
      Complex t = r * dir;
      Complex w = std::exp(t * t * t / 3.0 - z * t) * dir;
      if (prime) w *= -t;
      return w.imag();
    };
    double vr = gauss_kronrod<double, 15>::integrate(re, 0.0, 30.0, 14, 1e-14);
    double vi = gauss_kronrod<double, 15>::integrate(im, 0.0, 30.0, 14, 1e-14);
    return Complex(vr, vi);
  };
  return (ray(pi / 3.0) - ray(-pi / 3.0)) / (2.0 * pi * I);
}

}  // namespace

TEST_CASE("Airy function at the origin and the series/asymptotic seam") {
  CHECK(std::abs(airy_ai(0.0) - Complex(0.3550280538878172, 0.0)) < 1e-14);
  CHECK(std::abs(airy_ai_prime(0.0) - Complex(-0.2588194037928068, 0.0)) <
        1e-14);
  // Against the contour-integral oracle across series and asymptotic zones.
  for (double u = -12.0; u <= 12.01; u += 0.5) {
    INFO("u = " << u);
    CHECK(std::abs(airy_ai(u) - airy_contour(u, false)) < 1e-10);
    CHECK(std::abs(airy_ai_prime(u) - airy_contour(u, true)) < 1e-10);
    CHECK(airy_ai(u).imag() == 0.0);  // real on the real axis
  }
  // Complex arguments within the series disc.
  Complex zc(1.2, -0.8);
  CHECK(std::abs(airy_ai(zc) - airy_contour(zc, false)) < 1e-10);
  CHECK(std::abs(airy_ai_prime(zc) - airy_contour(zc, true)) < 1e-10);
  // Finite-difference consistency of the derivative.
  const double h = 1e-5;
  for (double u : {-3.0, 0.7, 2.5}) {
    Complex fd = (airy_ai(u + h) - airy_ai(u - h)) / (2.0 * h);
    CHECK(std::abs(fd - airy_ai_prime(u)) < 1e-8);
  }
}

TEST_CASE("constant medium: stationary phase matches the exact thimble "
          "integral at large k0") {
  Eigen::Vector2d xp(0.0, 0.0), x(0.0, 2.0);
  const double k0 = 50.0;
  auto m = constant_model(1.0);
  auto s = point_source(xp);
  auto built = build_wavefunction(m, s, x, k0);
  auto cps = find_critical_points(built.action, kWide);
  auto thimbles = trace_all(built.action, cps);
  auto coeff = decompose_real_axis(thimbles, m, s, x, k0);
  Complex exact = 0.0;
  for (size_t i = 0; i < thimbles.size(); ++i)
    exact += (double)coeff[i] * integrate_thimble(built, thimbles[i]);
  exact *= I / k0;
  Complex approx = stationary_phase(built, thimbles, coeff);
  CHECK(std::abs(approx - exact) < 1e-2 * std::abs(exact));
}

TEST_CASE("illuminated linear profile: two Gaussian terms with a quarter-"
          "wave relative shift") {
  Eigen::Vector2d xp(0.0, 0.0), x(0.0, 1.2);
  const double k0 = 60.0;
  auto m = linear_model(1.0, 0.4);
  auto s = point_source(xp);
  auto built = build_wavefunction(m, s, x, k0);
  auto cps = find_critical_points(built.action, kWide);
  auto thimbles = trace_all(built.action, cps);
  auto coeff = decompose_real_axis(thimbles, m, s, x, k0);
  // The two contributing saddles are the real ones; their Gaussian branches
  // (thimble tangents) differ by pi/2 (one extra caustic passage).
  std::vector<int> on;
  for (size_t i = 0; i < thimbles.size(); ++i)
    if (coeff[i] != 0) on.push_back((int)i);
  REQUIRE(on.size() == 2);
  double d = std::arg(thimbles[on[0]].tangent / thimbles[on[1]].tangent);
  CHECK(std::abs(std::abs(d) - pi / 2.0) < 1e-6);
  Complex approx = stationary_phase(built, thimbles, coeff);
  Complex oracle = oracle_real_axis(built);
  CHECK(std::abs(approx - oracle) < 3e-2 * std::abs(oracle));
}

TEST_CASE("shadow zone: field decay rate in k0 approaches Im Sbar at the "
          "complex saddle") {
  Eigen::Vector2d xp(0.0, 0.0), x(0.0, 2.9);
  auto m = linear_model(1.0, 0.4);
  auto s = point_source(xp);
  // The dominant complex saddle: lower-half-plane critical point.
  auto built0 = build_wavefunction(m, s, x, 20.0);
  auto cps = find_critical_points(built0.action, kWide);
  double im_s = 1e300;
  for (const auto& cp : cps)
    if (cp.value.imag() > 0.0) im_s = std::min(im_s, cp.value.imag());
  REQUIRE(im_s < 1e299);
  auto mag = [&](double k0) {
    return std::abs(oracle_real_axis(build_wavefunction(m, s, x, k0)));
  };
  const double k1 = 20.0, k2 = 80.0;
  double rate = (std::log(mag(k1)) - std::log(mag(k2))) / (k2 - k1);
  // The Gaussian prefactor contributes a -(1/2) log k0 drift; remove it.
  rate -= 0.5 * std::log(k2 / k1) / (k2 - k1);
  CHECK(std::abs(rate - im_s) < 0.02 * im_s);
}

TEST_CASE("fold series closed forms for the linear profile") {
  auto m = linear_model(1.3, 0.4);
  Eigen::Vector2d xp(0.0, 0.0), x(0.5, 2.0);
  auto fs = linear_fold_series(m, point_source(xp), x);
  CHECK(fs.gm1 == doctest::Approx(0.25 * (0.25 + 4.0)).epsilon(1e-14));
  CHECK(fs.g1 == doctest::Approx(1.3 - 0.4 * 1.0).epsilon(1e-14));
  CHECK(fs.g3 == doctest::Approx(-0.4 * 0.4 / 12.0).epsilon(1e-14));
  // The expansion point kills the quadratic Taylor coefficient.
  auto ue = uniform_expansion(fs.gm1, fs.g0, fs.g1, fs.g3);
  double lc = ue.lambda_c;
  auto sb = [&](double l) {
    return fs.gm1 / l + fs.g0 + fs.g1 * l + fs.g3 * l * l * l;
  };
  const double h = 1e-4 * lc;
  double second = (sb(lc + h) - 2.0 * sb(lc) + sb(lc - h)) / (h * h);
  CHECK(std::abs(second) < 1e-6);
  // And the reported cubic coefficient is the true third derivative / 6.
  double third = (sb(lc + 2 * h) - 2.0 * sb(lc + h) + 2.0 * sb(lc - h) -
                  sb(lc - 2 * h)) /
                 (2.0 * h * h * h);
  CHECK(third / 6.0 == doctest::Approx(ue.Gamma3).epsilon(1e-4));
}

TEST_CASE("uniform Airy field straddles the fold caustic to 5 percent") {
  auto m = linear_model(1.0, 0.4);
  Eigen::Vector2d xp(0.0, 0.0);
  auto s = point_source(xp);
  const double k0 = 50.0;
  // Caustic at z = n0^2/a = 2.5 on the axis; the Airy width in z is about
  // 0.1 at this k0, so the three-width band is z in [2.35, 2.65].
  for (double z = 2.35; z <= 2.651; z += 0.05) {
    Eigen::Vector2d x(0.0, z);
    auto fs = linear_fold_series(m, s, x);
    Complex uni = airy_uniform(fs.gm1, fs.g0, fs.g1, fs.g3, k0);
    Complex oracle = oracle_real_axis(build_wavefunction(m, s, x, k0));
    INFO("z = " << z);
    CHECK(std::abs(uni - oracle) < 5e-2 * std::abs(oracle));
  }
}

TEST_CASE("deep in the illuminated zone the uniform field collapses onto "
          "stationary phase") {
  auto m = linear_model(1.0, 0.4);
  Eigen::Vector2d xp(0.0, 0.0), x(0.0, 0.8);
  auto s = point_source(xp);
  const double k0 = 120.0;
  auto fs = linear_fold_series(m, s, x);
  Complex uni = airy_uniform(fs.gm1, fs.g0, fs.g1, fs.g3, k0);
  auto built = build_wavefunction(m, s, x, k0);
  auto cps = find_critical_points(built.action, kWide);
  auto thimbles = trace_all(built.action, cps);
  auto coeff = decompose_real_axis(thimbles, m, s, x, k0);
  Complex sp = stationary_phase(built, thimbles, coeff);
  CHECK(std::abs(uni - sp) < 1e-2 * std::abs(sp));
}

TEST_CASE("fold normal-form map: control parameter changes sign across the "
          "caustic, ghost pole flagged singular") {
  auto m = linear_model(1.0, 0.4);
  Eigen::Vector2d xp(0.0, 0.0);
  auto s = point_source(xp);
  Eigen::Vector2d xi(0.0, 2.0), xs(0.0, 3.0);
  auto fi = linear_fold_series(m, s, xi);
  auto fsh = linear_fold_series(m, s, xs);
  auto mi = lambda_map(fi.gm1, fi.g1, fi.g3);
  auto ms = lambda_map(fsh.gm1, fsh.g1, fsh.g3);
  REQUIRE(!mi.singular);
  REQUIRE(!ms.singular);
  CHECK(mi.zeta1 * ms.zeta1 < 0.0);
  CHECK(lambda_map(0.0, fi.g1, fi.g3).singular);
  // Generating cubic of the cusp: three real roots with a negative control.
  auto roots = cusp_generating_roots(0.1, -1.0);
  REQUIRE(roots.size() == 3);
  for (auto r : roots) {
    CHECK(std::abs(r.imag()) < 1e-10);
    Complex p = r * r * r - r + 0.1;
    CHECK(std::abs(p) < 1e-10);
  }
}

TEST_CASE("arrival times: direct transit, fold doublet ordering, cusp axis "
          "doublet") {
  // Constant medium: one arrival at t = n0 r / c0.
  {
    Eigen::Vector2d xp(0.0, 0.0), x(0.0, 2.0);
    auto m = constant_model(1.0);
    auto s = point_source(xp);
    auto built = build_action(m, s, x, 5.0);
    auto cps = find_critical_points(built.action, kWide);
    auto thimbles = trace_all(built.action, cps);
    auto coeff = decompose_real_axis(thimbles, m, s, x, 5.0);
    auto arr = arrival_times(thimbles, coeff, 1.0);
    REQUIRE(arr.size() == 1);
    CHECK(arr[0].t == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(std::abs(arr[0].smear) < 1e-10);
  }
  // Illuminated linear profile: the direct ray beats the turned ray.
  {
    Eigen::Vector2d xp(0.0, 0.0), x(0.0, 1.2);
    auto m = linear_model(1.0, 0.4);
    auto s = point_source(xp);
    auto built = build_action(m, s, x, 5.0);
    auto cps = find_critical_points(built.action, kWide);
    auto thimbles = trace_all(built.action, cps);
    auto coeff = decompose_real_axis(thimbles, m, s, x, 5.0);
    auto arr = arrival_times(thimbles, coeff, 1.0);
    REQUIRE(arr.size() == 2);
    CHECK(arr[0].t < arr[1].t);
  }
  // Cusp axis: direct sheet arrival and the later branch-point winding.
  {
    auto arr = cusp_axis_arrivals(1.0, 1.0, 0.9, 1.0);
    REQUIRE(arr.size() == 2);
    CHECK(arr[0].t == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(arr[1].t ==
          doctest::Approx(0.81 / 4.0 + 1.0).epsilon(1e-12));
    CHECK(arr[1].thimble == -1);
  }
}

TEST_CASE("degenerate cubic data is rejected") {
  CHECK_THROWS_AS(uniform_expansion(1.0, 0.0, 1.0, 0.0), DegenerateCubic);
  CHECK_THROWS_AS(uniform_expansion(-1.0, 0.0, 1.0, -0.1), DegenerateCubic);
}
