#pragma once

#include <map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "einbein/action.hpp"
#include "einbein/types.hpp"

namespace einbein {

using Rational = boost::multiprecision::cpp_rational;

/// Polynomial in u = z - z' with exact rational coefficients, ascending.
using RatPoly = std::vector<Rational>;

Rational rat_from_double(double v);
double rat_to_double(const Rational& r);

/// One Laurent coefficient gamma_m, graded by powers of (i/k0): the entry at
/// grade g multiplies (i/k0)^g. The grading truncates at g = m-1.
struct GradedPoly {
  std::map<int, RatPoly> by_grade;

  Complex eval(double u, double k0) const;
  Complex eval_grade(int grade, double u) const;
};

struct NonPolynomialModel : std::invalid_argument {
  explicit NonPolynomialModel(const std::string& w) : std::invalid_argument(w) {}
};

struct InvalidPoleIndex : std::invalid_argument {
  explicit InvalidPoleIndex(const std::string& w) : std::invalid_argument(w) {}
};

/// Laurent series of Sbar about a finite pole: coefficients gamma_m for
/// m = -1 .. M. About Lambda=0 the coefficients are polynomials in u = z-z'
/// (plus the x-part of gamma_{-1}); gamma_0 = 0 there.
struct LaurentSeries {
  Complex expansion_point{0.0, 0.0};
  int codim = 2;  // d: codimension of the (ghost) source
  int order = 1;  // M
  double zprime = 0.0;
  Rational x_trans_sq;  // (x-x')^2, the transverse part entering gamma_{-1}

  std::vector<GradedPoly> gamma;  // index m+1 holds gamma_m

  const GradedPoly& coeff(int m) const { return gamma.at(size_t(m + 1)); }

  /// gamma_m evaluated at z with all grades summed at the given k0.
  Complex eval_coeff(int m, double z, double k0) const;
  /// Meromorphic (k0 -> infinity) grade only.
  Complex eval_coeff_merom(int m, double z) const;
};

/// Order-by-order solution of the Lambda-Schroedinger equation about the
/// universal pole at Lambda = 0, for n^2 = n^2(z) polynomial. The inverse
/// operator (m + (z-z') d/dz)^{-1} acts on u^k as division by (m+k).
LaurentSeries laurent_point_source(const std::vector<Rational>& n2poly,
                                   double zprime, double x_trans_sq, double k0,
                                   int order, int dim = 2);

/// Convenience overload converting double coefficients exactly to rationals.
LaurentSeries laurent_point_source(const std::vector<double>& n2poly,
                                   double zprime, double x_trans_sq, double k0,
                                   int order, int dim = 2);

/// Laurent expansion of the channel action about the ghost pole
/// Lambda = pi n / (2 sqrt(alpha)), n != 0. Meromorphic grade, exact closed
/// form via the cot/csc expansions; codimension 1.
LaurentSeries laurent_ghost_pole(const RefractionModel& model, long pole_index,
                                 const Eigen::VectorXd& xprime,
                                 const Eigen::VectorXd& x, double k0,
                                 int order);

}  // namespace einbein
