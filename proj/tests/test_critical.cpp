#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "einbein/action.hpp"
#include "einbein/critical.hpp"
#include "einbein/pade.hpp"

using namespace einbein;

namespace {

RefractionModel constant_model(double n0sq, int dim = 2) {
  RefractionModel m;
  m.kind = ModelKind::Constant;
  m.dim = dim;
  m.n0sq = n0sq;
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

}  // namespace

TEST_CASE("constant medium: symmetric critical pair at +-r/(2 n0)") {
  const double n0 = 1.5;
  auto model = constant_model(n0 * n0);
  Eigen::Vector2d xp(0.1, -0.2), x(0.7, 0.6);
  auto built = build_action(model, point_source(xp), x, 5.0);
  auto cps = find_critical_points(built.action, kWide);
  REQUIRE(cps.size() == 2);
  const double r = (x - xp).norm();
  CHECK(cps[0].lambda.real() == doctest::Approx(-r / (2 * n0)).epsilon(1e-12));
  CHECK(cps[1].lambda.real() == doctest::Approx(r / (2 * n0)).epsilon(1e-12));
  for (const auto& cp : cps) {
    CHECK(cp.real);
    CHECK(cp.multiplicity == 1);
    CHECK(std::abs(built.action.d1(cp.lambda)) < 1e-12);
    // eikonal: (grad_x Sbar)^2 = n^2 at a critical point
    auto g = built.action.grad_x(cp.lambda);
    Complex e{0.0, 0.0};
    for (int i = 0; i < g.size(); ++i) e += g(i) * g(i);
    CHECK(std::abs(e - Complex{n0 * n0, 0.0}) < 1e-8);
  }
  // Sbar at the positive point is the travel time n0 * r
  CHECK(cps[1].value.real() == doctest::Approx(n0 * r).epsilon(1e-12));
}

TEST_CASE("phase-sheet quartic: roots match the cleared-denominator "
          "polynomial") {
  const double x = 0.3, z = 0.7;
  auto model = constant_model(1.0);
  Eigen::Vector2d loc(0.0, 0.0), pt(x, z);
  auto built = build_action(model, sheet_source(loc, 1.0), pt, 5.0);
  auto cps = find_critical_points(built.action, kWide);

  // 4 L^4 - 8 L^3 + (4 - x^2 - z^2) L^2 + 2 z^2 L - z^2
  std::vector<Complex> q{Complex{-z * z, 0}, Complex{2 * z * z, 0},
                         Complex{4 - x * x - z * z, 0}, Complex{-8, 0},
                         Complex{4, 0}};
  auto ref = polynomial_roots(q);
  REQUIRE(cps.size() == 4);
  for (const auto& cp : cps) {
    double best = 1e9;
    for (const auto& r : ref) best = std::min(best, std::abs(cp.lambda - r));
    CHECK(best < 1e-10);
  }
  // critical-point count matches the Riemann-Hurwitz prediction
  // m_inf = 1, n_P = 2 -> n_C = 4
  CHECK(cps.size() == 4);
}

TEST_CASE("phase-sheet on the ghost line: spurious double root discarded") {
  auto model = constant_model(1.0);
  Eigen::Vector2d loc(0.0, 0.0), pt(0.0, 1.0);
  auto built = build_action(model, sheet_source(loc, 1.0), pt, 5.0);
  auto cps = find_critical_points(built.action, kWide);
  REQUIRE(cps.size() == 2);
  CHECK(cps[0].lambda.real() == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(cps[1].lambda.real() == doctest::Approx(0.5).epsilon(1e-10));
  for (const auto& cp : cps) CHECK(std::abs(cp.lambda - Complex{1.0, 0.0}) > 0.4);
}

TEST_CASE("linear gradient: four critical points from the closed form") {
  const double a = 0.6, n0sq = 2.0;
  RefractionModel model;
  model.kind = ModelKind::LinearZ;
  model.dim = 2;
  model.n0sq = n0sq;
  model.a = a;
  Eigen::Vector2d xp(0.0, 0.0), x(0.8, 0.5);
  auto built = build_action(model, point_source(xp), x, 5.0);
  auto cps = find_critical_points(built.action, kWide);
  REQUIRE(cps.size() == 4);

  const double c = n0sq - a * (x(1) + xp(1)) / 2.0;
  const double rho = (x - xp).squaredNorm() / 4.0;
  // -a^2/4 L^4 + c L^2 - rho = 0
  const double disc = c * c - a * a * rho;
  REQUIRE(disc > 0.0);
  std::vector<Complex> lams;
  for (double sq : {(c - std::sqrt(disc)) * 2 / (a * a),
                    (c + std::sqrt(disc)) * 2 / (a * a)}) {
    lams.push_back(std::sqrt(Complex{sq, 0.0}));
    lams.push_back(-std::sqrt(Complex{sq, 0.0}));
  }
  for (const auto& want : lams) {
    double best = 1e9;
    for (const auto& cp : cps) best = std::min(best, std::abs(cp.lambda - want));
    CHECK(best < 1e-9);
  }
  // eikonal at every critical point
  for (const auto& cp : cps) {
    auto g = built.action.grad_x(cp.lambda);
    Complex e{0.0, 0.0};
    for (int i = 0; i < g.size(); ++i) e += g(i) * g(i);
    CHECK(std::abs(e - Complex{model.n2(x), 0.0}) < 1e-8);
  }
}

TEST_CASE("linear gradient: zones and detected caustic match the closed "
          "form") {
  const double a = 0.6, n0sq = 1.0;
  RefractionModel model;
  model.kind = ModelKind::LinearZ;
  model.dim = 2;
  model.n0sq = n0sq;
  model.a = a;
  Eigen::Vector2d xp(0.0, 0.0);
  auto src = point_source(xp);

  // caustic at x=0: z_c from n0^4 - a z n0^2 = 0 -> z = n0^2/a
  Eigen::Vector2d lit(0.2, 0.5), dark(0.2, 2.4);
  CHECK(closed_form_caustic(model, src, lit) > 0.0);
  CHECK(closed_form_caustic(model, src, dark) < 0.0);
  CHECK(classify_point(model, src, lit, 5.0).zone == Zone::Illuminated);
  CHECK(classify_point(model, src, dark, 5.0).zone == Zone::Shadow);

  std::vector<double> xs{0.1, 0.5, 0.9};
  std::vector<double> zs;
  for (double z = 0.8; z <= 2.2; z += 0.35) zs.push_back(z);
  auto grid = caustic_locus(model, src, xs, zs, 5.0);
  REQUIRE(grid.locus.size() >= 3);
  for (const auto& p : grid.locus)
    CHECK(std::abs(closed_form_caustic(model, src, p)) < 1e-6);
}

TEST_CASE("cusp caustic: detected locus, cusp points and pole-pair law") {
  const double n0 = 1.2, mu = 0.7;
  auto model = constant_model(n0 * n0);
  Eigen::Vector2d loc(0.0, 0.0);
  auto src = sheet_source(loc, mu);

  // detected fold locus matches |x|^{2/3} + |z|^{2/3} = (2 n0 mu)^{2/3}
  std::vector<double> xs{0.15, 0.45, 0.75}, zs;
  for (double z = 0.1; z <= 1.9; z += 0.3) zs.push_back(z);
  auto grid = caustic_locus(model, src, xs, zs, 5.0);
  REQUIRE(grid.locus.size() >= 3);
  for (const auto& p : grid.locus)
    CHECK(std::abs(closed_form_caustic(model, src, p)) < 1e-6);

  // the same law from the nearby-pole normal form with b = n0^2, Delta = mu
  auto law = nearby_pole_cusp(0.0, mu, n0 * n0);
  CHECK(law.scale23 ==
        doctest::Approx(std::pow(2 * n0 * mu, 2.0 / 3.0)).epsilon(1e-14));
  for (const auto& p : grid.locus) {
    const double r2 = law.r2_of_r1(p(0));
    CHECK(r2 == doctest::Approx(std::abs(p(1))).epsilon(2e-5));
  }

  // cusp points at (0, +-2 n0 mu)
  for (double sz : {1.0, -1.0}) {
    Eigen::Vector2d tip(0.0, sz * 2 * n0 * mu);
    auto c = classify_point(model, src, tip, 5.0);
    CHECK(c.type == CausticType::Cusp);
    CHECK(c.zone == Zone::OnCaustic);
    CHECK(c.ghost_source);
  }
  // inside vs outside
  CHECK(classify_point(model, src, Eigen::Vector2d(0.2, 0.4), 5.0).zone ==
        Zone::Illuminated);
  CHECK(classify_point(model, src, Eigen::Vector2d(1.2, 1.2), 5.0).zone ==
        Zone::Shadow);

  // endpoint of the b=1, Delta=1 law
  auto unit = nearby_pole_cusp(0.0, 1.0, 1.0);
  CHECK(unit.r2_of_r1(0.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(nearby_pole_cusp(0.0, 0.0, 1.0), NonPositiveParameters);
  CHECK_THROWS_AS(nearby_pole_cusp(0.0, 1.0, -2.0), NonPositiveParameters);
}

TEST_CASE("sterile collision: real critical set continuous across the ghost "
          "line") {
  auto model = constant_model(1.0);
  Eigen::Vector2d loc(0.0, 0.0);
  auto src = sheet_source(loc, 1.0);
  const double z = 0.9;  // inside the cusp, points stay real

  std::vector<double> prev;
  const double dx = 0.01;
  for (double x = -0.12; x <= 0.12 + 1e-12; x += dx) {
    Eigen::Vector2d pt(x, z);
    auto built = build_action(model, src, pt, 5.0);
    auto cps = find_critical_points(built.action, kWide);
    std::vector<double> now;
    for (const auto& cp : cps)
      if (cp.real) now.push_back(cp.lambda.real());
    std::sort(now.begin(), now.end());
    if (!prev.empty() && prev.size() == now.size())
      for (size_t i = 0; i < now.size(); ++i)
        CHECK(std::abs(now[i] - prev[i]) < 12 * dx);
    if (!prev.empty()) CHECK(std::abs(int(now.size()) - int(prev.size())) <= 2);
    prev = now;
  }
}

TEST_CASE("ghost source loci for the catalog") {
  auto model = constant_model(1.0);
  Eigen::Vector2d loc(0.0, 0.0);
  auto cusp = ghost_source_locus(model, sheet_source(loc, 1.0));
  REQUIRE(cusp.size() == 2);
  CHECK(cusp[1].pole.real() == doctest::Approx(1.0));
  CHECK(cusp[1].description == "x = x'");

  auto point = ghost_source_locus(model, point_source(loc));
  REQUIRE(point.size() == 1);
  CHECK(point[0].description == "x = x'");

  RefractionModel ch;
  ch.kind = ModelKind::QuadraticZ;
  ch.dim = 2;
  ch.n0sq = 1.0;
  ch.alpha = 1.0;
  auto chl = ghost_source_locus(ch, point_source(loc));
  REQUIRE(chl.size() >= 5);
  bool saw_odd = false, saw_even = false;
  for (const auto& g : chl) {
    if (g.description == "z = -z'") saw_odd = true;
    if (g.description == "z = z'" && std::abs(g.pole) > 0.1) saw_even = true;
  }
  CHECK(saw_odd);
  CHECK(saw_even);
}

TEST_CASE("channel: Newton search finds real critical points between poles") {
  RefractionModel ch;
  ch.kind = ModelKind::QuadraticZ;
  ch.dim = 2;
  ch.n0sq = 2.0;
  ch.alpha = 1.0;
  Eigen::Vector2d xp(0.0, 0.3), x(0.6, 0.8);
  auto built = build_action(ch, point_source(xp), x, 5.0);
  const double s = built.action.channel->pole_spacing();
  Region region{0.05 * s, 2.95 * s, -0.5 * s, 0.5 * s};
  auto cps = find_critical_points(built.action, region);
  CHECK(cps.size() >= 2);
  int real_count = 0;
  for (const auto& cp : cps) {
    CHECK(std::abs(built.action.d1(cp.lambda)) < 1e-8);
    if (cp.real) ++real_count;
  }
  CHECK(real_count >= 2);
}
