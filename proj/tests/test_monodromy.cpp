#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "einbein/action.hpp"
#include "einbein/monodromy.hpp"
#include "einbein/quadrature.hpp"

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

SourceSpec sheet_source(double mu) {
  SourceSpec s;
  s.kind = SourceKind::PhaseSheet;
  s.location = Eigen::VectorXd::Zero(2);
  s.mu = mu;
  return s;
}

Eigen::MatrixXi mat2(int a, int b, int c, int d) {
  Eigen::MatrixXi m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("free-space 2D: matrices of the wavenumber-coefficient loop") {
  const auto m = constant_model(1.0);
  const auto s = point_source(2);
  Eigen::VectorXd x(2);
  x << 0.4, 0.9;
  const auto basis = monodromy_basis(m, s, x);
  REQUIRE(basis.size() == 2);
  CHECK(basis[0].label == "Gamma_A");
  CHECK(basis[1].label == "Gamma_D");

  const auto M = transport(m, s, x, basis, ParameterLoop::infinity_coeff(-2.0 * pi));
  CHECK(M.m == mat2(1, 1, 0, 1));
  CHECK(M.residual < 1e-6);
  CHECK(std::abs(M.m.cast<double>().determinant() - 1.0) < 1e-12);

  // opposite traversal inverts the matrix
  const auto Mi = transport(m, s, x, basis, ParameterLoop::infinity_coeff(2.0 * pi));
  CHECK(Mi.m == mat2(1, -1, 0, 1));
  CHECK((M.m * Mi.m).isIdentity());

  const auto Mt = transport(m, s, x, basis, ParameterLoop::trivial());
  CHECK(Mt.m.isIdentity());
}

TEST_CASE("free-space 3D: sign flip from the half-integer prefactor, M^2 = 1") {
  const auto m = constant_model(1.0, 3);
  const auto s = point_source(3);
  Eigen::VectorXd x(3);
  x << 0.3, 0.2, 0.8;
  const auto basis = monodromy_basis(m, s, x);

  const auto M = transport(m, s, x, basis, ParameterLoop::infinity_coeff(-2.0 * pi));
  CHECK(M.m == mat2(-1, 1, 0, 1));
  CHECK(std::abs(M.m.cast<double>().determinant() + 1.0) < 1e-12);
  CHECK((M.m * M.m).isIdentity());

  // the two Riemann sheets close after two turns, so both traversal
  // directions give the same involution
  const auto Mi = transport(m, s, x, basis, ParameterLoop::infinity_coeff(2.0 * pi));
  CHECK(Mi.m == M.m);
}

TEST_CASE("linear profile: cubic-coefficient loop and coordinate loop") {
  const auto m = linear_model(1.0, 0.5);
  const auto s = point_source(2);
  Eigen::VectorXd x(2);
  x << 0.0, 1.0;
  const auto basis = monodromy_basis(m, s, x);
  REQUIRE(basis.size() == 4);

  const auto Ma = transport(m, s, x, basis, ParameterLoop::infinity_coeff(2.0 * pi));
  Eigen::MatrixXi expect(4, 4);
  expect << 1, 1, 0, 0,
            0, -1, 1, -1,
            0, -1, 0, 0,
            0, 0, 0, 1;
  CHECK(Ma.m == expect);
  CHECK(Ma.residual < 1e-6);
  CHECK(std::abs(Ma.m.cast<double>().determinant() - 1.0) < 1e-12);

  const auto Mc = transport(m, s, x, basis, ParameterLoop::pole_residue(0, -2.0 * pi));
  Eigen::MatrixXi cexpect(4, 4);
  cexpect << 1, 0, 0, 1,
             0, 1, 0, 0,
             0, 0, 1, 0,
             0, 0, 0, 1;
  CHECK(Mc.m == cexpect);

  // one loop of the coordinate radius undoes three loops of the cubic
  // coefficient
  CHECK((Mc.m * Ma.m * Ma.m * Ma.m).isIdentity());
}

TEST_CASE("sheet source: ghost-pole loop acts trivially") {
  const auto m = constant_model(1.0);
  const auto s = sheet_source(1.0);
  Eigen::VectorXd x(2);
  x << 0.35, 0.45;
  const auto basis = monodromy_basis(m, s, x);
  REQUIRE(basis.size() == 2);
  CHECK(basis[1].label == "Gamma_G");

  // the windings acquired at the incoming and outgoing approaches of the
  // pass-through pole have opposite orientation and cancel
  for (const double dir : {2.0 * pi, -2.0 * pi}) {
    const auto M = transport(m, s, x, basis, ParameterLoop::pole_residue(1, dir));
    CHECK(M.m.isIdentity());
    CHECK(M.residual < 1e-6);
  }
}

TEST_CASE("transported words reduce against the originals") {
  const auto m = constant_model(1.0);
  const auto s = sheet_source(1.0);
  Eigen::VectorXd x(2);
  x << 0.35, 0.45;
  const auto basis = monodromy_basis(m, s, x);
  const auto wf = build_wavefunction(m, s, x, 1.0);
  const auto moved =
      transport_endpoints(wf, basis, ParameterLoop::pole_residue(1, 2.0 * pi));

  // pass-through windings cancel in the reduced word
  CHECK(moved[1].word().word == basis[1].word().word);
  // the contour ending at the untouched pole is unchanged entirely
  CHECK(moved[0].word().word == basis[0].word().word);

  // a closed standing-wave contour keeps exactly one net winding token
  const auto cb = monodromy_basis(constant_model(1.0), point_source(2), x);
  const auto wd = cb[1].word().word;
  REQUIRE(wd.size() == 2);
  CHECK(wd[0] == "pole(0)");
  CHECK(wd[1].rfind("wind(0,+1", 0) == 0);
}

TEST_CASE("endpoint transport tracks lifts through the discretized loop") {
  const auto m = linear_model(1.0, 0.5);
  const auto s = point_source(2);
  Eigen::VectorXd x(2);
  x << 0.0, 1.0;
  const auto wf = build_wavefunction(m, s, x, 1.0);
  const auto basis = monodromy_basis(m, s, x);

  const auto moved =
      transport_endpoints(wf, basis, ParameterLoop::infinity_coeff(2.0 * pi));
  // infinity rays rotate by -delta_arg / m = -2 pi / 3; pole approaches stay
  CHECK(moved[0].ends[0].lift == doctest::Approx(-pi / 2.0));
  CHECK(moved[0].ends[1].lift ==
        doctest::Approx(pi / 2.0 - 2.0 * pi / 3.0));
  CHECK(moved[1].ends[0].lift ==
        doctest::Approx(pi / 2.0 - 2.0 * pi / 3.0));

  const auto back =
      transport_endpoints(wf, basis, ParameterLoop::pole_residue(0, -2.0 * pi));
  CHECK(back[0].ends[0].lift == doctest::Approx(-pi / 2.0 - 2.0 * pi));
  CHECK(back[0].ends[1].lift == doctest::Approx(pi / 2.0));
}

TEST_CASE("numerical confirmation: transported integral equals the predicted "
          "combination") {
  const auto m = linear_model(1.0, 0.5);
  const auto s = point_source(2);
  Eigen::VectorXd x(2);
  x << 0.0, 1.0;
  const auto basis = monodromy_basis(m, s, x);
  const auto Ma = transport(m, s, x, basis, ParameterLoop::infinity_coeff(2.0 * pi));

  const double k0 = 1.15;
  const auto wf = build_wavefunction(m, s, x, k0);
  const auto moved =
      transport_endpoints(wf, basis, ParameterLoop::infinity_coeff(2.0 * pi));
  for (int i = 0; i < 4; ++i) {
    const Complex vi = integrate_path_continued(
        wf, realize_contour(wf, moved[size_t(i)]), moved[size_t(i)].start_sheet);
    Complex pred{0.0, 0.0};
    for (int j = 0; j < 4; ++j) {
      if (Ma.m(i, j) == 0) continue;
      pred += double(Ma.m(i, j)) *
              integrate_path_continued(wf, realize_contour(wf, basis[size_t(j)]),
                                       basis[size_t(j)].start_sheet);
    }
    CHECK(std::abs(vi - pred) <= 1e-6 * (1.0 + std::abs(vi)));
  }
}

TEST_CASE("invalid bases are rejected") {
  const auto m = constant_model(1.0);
  const auto s = point_source(2);
  Eigen::VectorXd x(2);
  x << 0.4, 0.9;

  CHECK_THROWS_AS(transport(m, s, x, {}, ParameterLoop::trivial()),
                  BasisNotClosed);

  // a ray pointing into a divergent direction is rejected
  std::vector<BasisContour> bad;
  bad.push_back({"bad",
                 {ContourEnd::pole(0, -pi / 2.0), ContourEnd::infinity(-pi / 2.0)},
                 0});
  CHECK_THROWS_AS(transport(m, s, x, bad, ParameterLoop::trivial()),
                  BasisNotClosed);

  // a basis that does not span its own transport cannot be fitted: a single
  // open contour is not closed under the full-turn loop
  std::vector<BasisContour> open;
  open.push_back({"Gamma_A",
                  {ContourEnd::pole(0, -pi / 2.0), ContourEnd::infinity(pi / 2.0)},
                  0});
  CHECK_THROWS(transport(m, s, x, open, ParameterLoop::infinity_coeff(-2.0 * pi)));
}
