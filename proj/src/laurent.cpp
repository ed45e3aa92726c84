#include "einbein/laurent.hpp"

#include <cmath>

#include "einbein/series.hpp"

namespace einbein {

namespace {

RatPoly add(const RatPoly& a, const RatPoly& b) {
  RatPoly r(std::max(a.size(), b.size()), Rational(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

RatPoly mul(const RatPoly& a, const RatPoly& b) {
  if (a.empty() || b.empty()) return {};
  RatPoly r(a.size() + b.size() - 1, Rational(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

RatPoly deriv(const RatPoly& a) {
  if (a.size() <= 1) return {};
  RatPoly r(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i) r[i - 1] = Rational(i) * a[i];
  return r;
}

RatPoly neg(RatPoly a) {
  for (auto& c : a) c = -c;
  return a;
}

/// (m + u d/du)^{-1}: divides the u^k coefficient by (m + k).
RatPoly inverse_operator(int m, const RatPoly& g) {
  RatPoly r(g.size());
  for (size_t k = 0; k < g.size(); ++k) r[k] = g[k] / Rational(m + int(k));
  return r;
}

GradedPoly graded_add(const GradedPoly& a, const GradedPoly& b) {
  GradedPoly r = a;
  for (const auto& [g, p] : b.by_grade) r.by_grade[g] = add(r.by_grade[g], p);
  return r;
}

}  // namespace

Rational rat_from_double(double v) {
  // doubles are dyadic rationals; the conversion is exact
  return Rational(boost::multiprecision::cpp_rational(v));
}

double rat_to_double(const Rational& r) { return r.convert_to<double>(); }

Complex GradedPoly::eval(double u, double k0) const {
  Complex v{0.0, 0.0};
  const Complex ik = I / k0;
  for (const auto& [g, p] : by_grade) {
    double pv = 0.0;
    for (size_t i = p.size(); i-- > 0;) pv = pv * u + rat_to_double(p[i]);
    Complex f{1.0, 0.0};
    for (int j = 0; j < g; ++j) f *= ik;
    v += f * pv;
  }
  return v;
}

Complex GradedPoly::eval_grade(int grade, double u) const {
  auto it = by_grade.find(grade);
  if (it == by_grade.end()) return {0.0, 0.0};
  double pv = 0.0;
  for (size_t i = it->second.size(); i-- > 0;)
    pv = pv * u + rat_to_double(it->second[i]);
  return {pv, 0.0};
}

Complex LaurentSeries::eval_coeff(int m, double z, double k0) const {
  return coeff(m).eval(z - zprime, k0);
}

Complex LaurentSeries::eval_coeff_merom(int m, double z) const {
  return coeff(m).eval_grade(0, z - zprime);
}

LaurentSeries laurent_point_source(const std::vector<Rational>& n2poly,
                                   double zprime, double x_trans_sq, double k0,
                                   int order, int dim) {
  if (n2poly.empty()) throw NonPolynomialModel("empty n^2 polynomial");
  if (order < 1) throw std::invalid_argument("laurent: order must be >= 1");
  if (order > 64) throw std::invalid_argument("laurent: order overflow");

  LaurentSeries s;
  s.expansion_point = Complex{0.0, 0.0};
  s.codim = dim;
  s.order = order;
  s.zprime = zprime;
  s.x_trans_sq = rat_from_double(x_trans_sq);

  // n^2 as a polynomial in u = z - z'
  const Rational zp = rat_from_double(zprime);
  RatPoly n2u;
  {
    RatPoly shift{zp, Rational(1)};  // z = z' + u
    RatPoly pw{Rational(1)};
    n2u = RatPoly{Rational(0)};
    for (size_t k = 0; k < n2poly.size(); ++k) {
      RatPoly term = pw;
      for (auto& c : term) c *= n2poly[k];
      n2u = add(n2u, term);
      pw = mul(pw, shift);
    }
  }

  s.gamma.resize(size_t(order + 2));
  // gamma_{-1} = (x-x')^2/4 + u^2/4
  s.gamma[0].by_grade[0] = {s.x_trans_sq / 4, Rational(0), Rational(1) / 4};
  // gamma_0 = 0 about the universal pole
  s.gamma[1].by_grade.clear();
  // gamma_1 = (1 + u d/du)^{-1} n^2
  s.gamma[2].by_grade[0] = inverse_operator(1, n2u);

  for (int m = 2; m <= order; ++m) {
    GradedPoly rhs;
    // (i/k0) * gamma_{m-1}'' bumps the grade by one
    for (const auto& [g, p] : s.gamma[size_t(m)].by_grade) {
      RatPoly dd = deriv(deriv(p));
      if (!dd.empty()) rhs.by_grade[g + 1] = add(rhs.by_grade[g + 1], dd);
    }
    // minus sum of gamma_j' gamma_l' with j + l = m - 1, j,l >= 1
    for (int j = 1; j <= m - 2; ++j) {
      const int l = m - 1 - j;
      if (l < 1) continue;
      for (const auto& [gj, pj] : s.gamma[size_t(j + 1)].by_grade)
        for (const auto& [gl, pl] : s.gamma[size_t(l + 1)].by_grade) {
          RatPoly prod = mul(deriv(pj), deriv(pl));
          rhs.by_grade[gj + gl] = add(rhs.by_grade[gj + gl], neg(prod));
        }
    }
    GradedPoly gm;
    for (const auto& [g, p] : rhs.by_grade) {
      if (p.empty()) continue;
      gm.by_grade[g] = inverse_operator(m, p);
    }
    // the (i/k0)-grading must truncate at power m-1
    for (const auto& [g, p] : gm.by_grade)
      if (g > m - 1)
        throw std::logic_error("laurent: grading truncation violated");
    s.gamma[size_t(m + 1)] = std::move(gm);
  }
  return s;
}

LaurentSeries laurent_point_source(const std::vector<double>& n2poly,
                                   double zprime, double x_trans_sq, double k0,
                                   int order, int dim) {
  std::vector<Rational> r;
  r.reserve(n2poly.size());
  for (double c : n2poly) r.push_back(rat_from_double(c));
  return laurent_point_source(r, zprime, x_trans_sq, k0, order, dim);
}

LaurentSeries laurent_ghost_pole(const RefractionModel& model, long pole_index,
                                 const Eigen::VectorXd& xprime,
                                 const Eigen::VectorXd& x, double k0,
                                 int order) {
  if (model.kind != ModelKind::QuadraticZ)
    throw std::invalid_argument("ghost-pole series requires the channel model");
  if (pole_index == 0) throw InvalidPoleIndex("pole index must be non-zero");
  if (model.alpha <= 0.0)
    throw InvalidPoleIndex("alpha -> 0: ghost poles sit at infinity");

  const double sa = std::sqrt(model.alpha);
  const double P = pi * double(pole_index) / (2.0 * sa);
  const double z = x(1), zpv = xprime(1);
  const double sgn = (pole_index % 2 == 0) ? 1.0 : -1.0;
  const double dx = x(0) - xprime(0);

  LaurentSeries s;
  s.expansion_point = Complex{P, 0.0};
  s.codim = 1;
  s.order = order;
  s.zprime = zpv;
  s.x_trans_sq = rat_from_double(dx * dx);

  // channel about the pole: sqrt(a)/2 [ (z^2+z'^2) cot(phi) - 2 (-1)^n z z' csc(phi) ],
  // phi = 2 sqrt(a) lambda; plus Taylor of (x-x')^2/(4 Lambda) + n0^2 Lambda.
  const size_t n = size_t(order + 2);
  auto cotr = series::cot_regular(n);
  auto cscr = series::csc_regular(n);

  std::vector<double> c(size_t(order + 2), 0.0);  // c[m+1] = gamma_m
  const double xi = z - sgn * zpv;
  c[0] = xi * xi / 4.0;  // residue
  double phi_pow = 1.0;
  for (int m = 0; m <= order; ++m) {
    double v = 0.0;
    if (size_t(m) < cotr.size())
      v += sa / 2.0 *
           ((z * z + zpv * zpv) * cotr[size_t(m)].real() -
            2.0 * sgn * z * zpv * cscr[size_t(m)].real()) *
           phi_pow;
    // (x-x')^2/(4(P+lambda)) = (x-x')^2/(4P) sum (-1)^k (lambda/P)^k
    v += dx * dx / (4.0 * P) * std::pow(-1.0 / P, m);
    if (m == 1) v += model.n0sq;
    if (m == 0) v += model.n0sq * P;
    c[size_t(m + 1)] = v;
    phi_pow *= 2.0 * sa;
  }
  s.gamma.resize(size_t(order + 2));
  for (int m = -1; m <= order; ++m)
    s.gamma[size_t(m + 1)].by_grade[0] = {rat_from_double(c[size_t(m + 1)])};
  return s;
}

}  // namespace einbein
