#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "einbein/io.hpp"

using namespace einbein;

namespace {

RefractionModel linear_model(double n0sq, double a) {
  RefractionModel m;
  m.kind = ModelKind::LinearZ;
  m.dim = 2;
  m.n0sq = n0sq;
  m.a = a;
  return m;
}

SourceSpec point_source(int dim) {
  SourceSpec s;
  s.kind = SourceKind::PointDelta;
  s.location = Eigen::VectorXd::Zero(dim);
  return s;
}

}  // namespace

TEST_CASE("model and source JSON round trip") {
  RefractionModel m = linear_model(1.2, 0.4);
  const auto j = model_to_json(m);
  const auto m2 = model_from_json(j);
  CHECK(m2.kind == m.kind);
  CHECK(m2.n0sq == m.n0sq);
  CHECK(m2.a == m.a);

  SourceSpec s;
  s.kind = SourceKind::PhaseSheet;
  s.location = Eigen::VectorXd::Zero(2);
  s.mu = 0.7;
  const auto js = source_to_json(s);
  const auto s2 = source_from_json(js, 2);
  CHECK(s2.kind == SourceKind::PhaseSheet);
  CHECK(s2.mu == doctest::Approx(0.7));

  CHECK_THROWS_AS(model_from_json(nlohmann::json{{"kind", "warp"}}),
                  ConfigError);
  CHECK_THROWS_AS(
      model_from_json(nlohmann::json{{"kind", "constant"}, {"n0sq", -1.0}}),
      ConfigError);
}

TEST_CASE("series export carries the exact rational coefficients") {
  // n^2 = 1 - z: gamma_1 at grade 1 is n0^2 - A (z'+u/...)-style polynomial;
  // the exported strings are exact rationals
  const auto series = laurent_point_source(
      std::vector<Rational>{Rational(1), Rational(-1)}, 0.0, 0.0, 1.0, 4, 2);
  const auto j = laurent_to_json(series);
  CHECK(j.at("codim") == 2);
  CHECK(j.at("pole")[0] == 0.0);
  // gamma_3 = -a^2/12 with a = 1: the exact rational -1/12 is exported
  bool found = false;
  for (const auto& e : j.at("coefficients"))
    if (e.at("m") == 3 && e.at("grade") == 0 &&
        e.at("poly_coeffs")[0] == "-1/12")
      found = true;
  CHECK(found);
  // every coefficient string is of the exact p or p/q form
  for (const auto& e : j.at("coefficients"))
    for (const auto& c : e.at("poly_coeffs")) {
      const std::string s = c.get<std::string>();
      CHECK(s.find_first_not_of("-0123456789/") == std::string::npos);
    }
}

TEST_CASE("approximant export lists the ghost poles") {
  RefractionModel m;
  m.kind = ModelKind::QuadraticZ;
  m.dim = 2;
  m.n0sq = 1.0;
  m.alpha = 0.01;
  const auto series = laurent_point_source(
      std::vector<double>{1.0, 0.0, -m.alpha}, 1.0, 1.0, 8.0, 13, 2);
  const auto fit = fit_rational(series, 1.0, 6, 6);
  const auto j = pade_to_json(fit);
  CHECK(j.at("N") == fit.N);
  CHECK(j.at("ghost_poles").size() == fit.ghost_poles.size());
  REQUIRE(!fit.ghost_poles.empty());
  // the channel ghost pole at pi / (2 sqrt(alpha)) = 15.707963...
  bool near = false;
  for (const auto& g : j.at("ghost_poles"))
    if (std::abs(g.at("beta")[0].get<double>() - 15.707963) < 0.1) near = true;
  CHECK(near);
}

TEST_CASE("monodromy matrix export") {
  MonodromyMatrix mm;
  mm.m.resize(2, 2);
  mm.m << 1, 1, 0, 1;
  mm.labels = {"Gamma_A", "Gamma_D"};
  mm.loop = "infinity-coefficient";
  mm.residual = 1e-15;
  const auto j = monodromy_to_json(mm);
  CHECK(j.at("matrix")[0][1] == 1);
  CHECK(j.at("labels")[1] == "Gamma_D");
  CHECK(j.at("loop") == "infinity-coefficient");
}

TEST_CASE("field CSV has the documented columns and is deterministic") {
  const auto m = linear_model(1.0, 0.5);
  const auto s = point_source(2);
  const auto samples = field_grid(m, s, {0.0, 0.3}, {0.8, 1.1}, 6.0);
  const std::string csv1 = field_csv(m, s, samples);
  const std::string csv2 = field_csv(m, s, samples);
  CHECK(csv1 == csv2);
  CHECK(csv1.rfind("x,z,re_phi,im_phi,abs_phi,zone\n", 0) == 0);
  CHECK(csv1.find("illuminated") != std::string::npos);
  // 4 samples + header
  CHECK(std::count(csv1.begin(), csv1.end(), '\n') == 5);

  const auto jf = field_to_json(samples);
  CHECK(jf.at("samples").size() == 4);
}

TEST_CASE("caustic, thimble and arrival CSV") {
  const auto m = linear_model(1.0, 0.5);
  const auto s = point_source(2);
  const auto grid = caustic_locus(m, s, {0.0, 0.4}, {1.0, 2.4}, 6.0);
  const std::string cc = caustic_csv(grid);
  CHECK(cc.rfind("x,z,zone,type\n", 0) == 0);
  CHECK(cc.find("shadow") != std::string::npos);

  Eigen::VectorXd x(2);
  x << 0.0, 1.0;
  const auto wf = build_wavefunction(m, s, x, 6.0);
  const auto cps = find_critical_points(wf.action, {-30, 30, -30, 30});
  std::vector<Thimble> thimbles;
  for (const auto& cp : cps) thimbles.push_back(trace_thimble(wf.action, cp));
  const std::string tc = thimble_csv(wf.action, thimbles);
  CHECK(tc.rfind("thimble,tau,re_lambda,im_lambda,re_sbar,im_sbar\n", 0) == 0);
  CHECK(std::count(tc.begin(), tc.end(), '\n') > 10);

  std::vector<std::pair<Eigen::VectorXd, std::vector<Arrival>>> rows;
  rows.push_back({x, {{1.0, 0.01, 0}, {1.4, 0.02, -1}}});
  const std::string ac = arrivals_csv(rows);
  CHECK(ac.rfind("x,z,t,smear,thimble\n", 0) == 0);
  CHECK(ac.find(",-1\n") != std::string::npos);
}

TEST_CASE("SVG renderers produce well-formed schematic output") {
  const auto m = linear_model(1.0, 0.5);
  const auto s = point_source(2);
  const std::vector<double> xs = {-0.4, 0.0, 0.4};
  const std::vector<double> zs = {0.6, 1.0, 1.4};
  const auto samples = field_grid(m, s, xs, zs, 6.0);
  const auto svg = field_svg(samples, xs, zs, {Eigen::Vector2d(0.0, 2.0)});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<rect") != std::string::npos);
  CHECK(svg.find("<circle") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);

  Eigen::VectorXd x(2);
  x << 0.0, 1.0;
  const auto wf = build_wavefunction(m, s, x, 6.0);
  const auto cps = find_critical_points(wf.action, {-30, 30, -30, 30});
  std::vector<Thimble> thimbles;
  for (const auto& cp : cps) thimbles.push_back(trace_thimble(wf.action, cp));
  const auto tsvg = thimble_svg(wf.action, thimbles);
  CHECK(tsvg.find("<polyline") != std::string::npos);
  CHECK(tsvg.find("stroke=\"#d01010\"") != std::string::npos);
}
