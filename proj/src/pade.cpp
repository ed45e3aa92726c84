#include "einbein/pade.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace einbein {

namespace {

Complex horner(const std::vector<Complex>& c, Complex lam) {
  Complex v{0.0, 0.0};
  for (size_t i = c.size(); i-- > 0;) v = v * lam + c[i];
  return v;
}

std::vector<Complex> poly_deriv(const std::vector<Complex>& c) {
  std::vector<Complex> d;
  for (size_t i = 1; i < c.size(); ++i) d.push_back(double(i) * c[i]);
  return d;
}

}  // namespace

Complex RationalApproximant::eval(Complex lam) const {
  return horner(A, lam) / horner(B, lam);
}

Complex RationalApproximant::deriv(Complex lam) const {
  const Complex a = horner(A, lam), b = horner(B, lam);
  const Complex da = horner(poly_deriv(A), lam), db = horner(poly_deriv(B), lam);
  return (da * b - a * db) / (b * b);
}

std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs,
                                      double trim_tol) {
  std::vector<Complex> c = coeffs;
  double scale = 0.0;
  for (const auto& v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return {};
  while (c.size() > 1 && std::abs(c.back()) <= trim_tol * scale) c.pop_back();
  const size_t n = c.size() - 1;
  if (n == 0) return {};
  CMat comp = CMat::Zero(long(n), long(n));
  for (size_t i = 0; i + 1 < n; ++i) comp(long(i + 1), long(i)) = 1.0;
  for (size_t i = 0; i < n; ++i) comp(long(i), long(n - 1)) = -c[i] / c[n];
  Eigen::ComplexEigenSolver<CMat> es(comp, /*computeEigenvectors=*/false);
  std::vector<Complex> roots(es.eigenvalues().data(),
                             es.eigenvalues().data() + n);
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    return std::abs(a) < std::abs(b);
  });
  return roots;
}

RationalApproximant fit_rational(const LaurentSeries& series, double z, int N,
                                 int M) {
  if (N < 0 || M < 0) throw std::invalid_argument("pade: negative degree");
  const int p = N + 1, q = M;
  if (series.order < N + M)
    throw std::invalid_argument(
        "pade: series truncation must reach order N+M");

  // Taylor coefficients of T = Lambda * Sbar: t_{m+1} = gamma_m
  std::vector<Complex> t(size_t(p + q + 1));
  for (int j = 0; j <= p + q; ++j)
    t[size_t(j)] = series.eval_coeff_merom(j - 1, z);
  double scale = 0.0;
  for (const auto& v : t) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) throw IllConditioned("pade: zero input series");

  // denominator Q with Q(0)=1: sum_{j=0..q} Q_j t_{k-j} = 0, k = p+1..p+q
  std::vector<Complex> Q(size_t(q + 1), Complex{0.0, 0.0});
  Q[0] = 1.0;
  if (q > 0) {
    CMat Amat(q, q);
    CVec rhs(q);
    for (int r = 0; r < q; ++r) {
      const int k = p + 1 + r;
      for (int j = 1; j <= q; ++j)
        Amat(r, j - 1) = k - j >= 0 ? t[size_t(k - j)] : Complex{0.0, 0.0};
      rhs(r) = -t[size_t(k)];
    }
    // no rank thresholding: the system is graded (coefficients decay inside
    // the convergence disk) and legitimate leading unknowns can be tiny
    CVec sol = Eigen::PartialPivLU<CMat>(Amat).solve(rhs);
    auto residual = [&](const CVec& s) { return (Amat * s - rhs).norm(); };
    if (!sol.allFinite() || residual(sol) > 1e-10 * (rhs.norm() + scale)) {
      sol = Eigen::ColPivHouseholderQR<CMat>(Amat).solve(rhs);
      if (!sol.allFinite() || residual(sol) > 1e-10 * (rhs.norm() + scale))
        throw IllConditioned(
            "pade: denominator solve residual above tolerance");
    }
    for (int j = 1; j <= q; ++j) Q[size_t(j)] = sol(j - 1);
  }

  // numerator by convolution through order p
  std::vector<Complex> P(size_t(p + 1), Complex{0.0, 0.0});
  for (int i = 0; i <= p; ++i)
    for (int j = 0; j <= std::min(i, q); ++j) P[size_t(i)] += Q[size_t(j)] * t[size_t(i - j)];

  // defining property: re-expansion reproduces t through order p+q
  {
    std::vector<Complex> re(size_t(p + q + 1), Complex{0.0, 0.0});
    for (int i = 0; i <= p + q; ++i) {
      Complex s = i <= p ? P[size_t(i)] : Complex{0.0, 0.0};
      for (int j = 1; j <= std::min(i, q); ++j) s -= Q[size_t(j)] * re[size_t(i - j)];
      re[size_t(i)] = s / Q[0];
    }
    double res = 0.0;
    for (int i = 0; i <= p + q; ++i) res = std::max(res, std::abs(re[size_t(i)] - t[size_t(i)]));
    if (res > 1e-8 * scale)
      throw IllConditioned("pade: re-expansion residual above tolerance");
  }

  RationalApproximant ap;
  // Sbar = T/Lambda = P/(Lambda Q): fold the universal pole into B
  ap.A = P;
  ap.B.assign(size_t(q + 2), Complex{0.0, 0.0});
  for (int j = 0; j <= q; ++j) ap.B[size_t(j + 1)] = Q[size_t(j)];
  // normalize B monic. The leading coefficient may be legitimately tiny
  // (the input coefficients are graded by the pole distance); only an exact
  // collapse is degenerate.
  const Complex lead = ap.B.back();
  if (std::abs(lead) < 1e-300)
    throw DegenerateDenominator("pade: denominator degree collapsed");
  for (auto& c : ap.A) c /= lead;
  for (auto& c : ap.B) c /= lead;
  ap.N = int(ap.A.size()) - 1;
  ap.M = int(ap.B.size()) - 1;

  auto roots = polynomial_roots(ap.B, 0.0);
  // beyond the universal pole, a second denominator root at the origin means
  // the fit degenerated
  double rscale = 1.0;
  for (const auto& r : roots) rscale = std::max(rscale, std::abs(r));
  int at_origin = 0;
  for (const auto& r : roots)
    if (std::abs(r) < 1e-10 * rscale) ++at_origin;
  if (at_origin > 1)
    throw DegenerateDenominator("pade: denominator root at the origin");
  const auto dB = poly_deriv(ap.B);
  for (const auto& beta : roots) {
    GhostPoleEstimate g;
    g.beta = beta;
    g.residue = horner(ap.A, beta) / horner(dB, beta);
    g.codim = std::abs(beta) < 1e-10 ? series.codim : 1;
    g.spurious = std::abs(g.residue) < 1e-8 * scale;
    ap.ghost_poles.push_back(g);
  }
  return ap;
}

HurwitzCounts riemann_hurwitz_count(const RationalApproximant& approx) {
  HurwitzCounts c;
  c.m_inf = approx.N - approx.M;
  c.n_P = int(approx.ghost_poles.size());
  // simple-root requirement
  double scale = 1.0;
  for (const auto& g : approx.ghost_poles)
    scale = std::max(scale, std::abs(g.beta));
  for (size_t i = 0; i < approx.ghost_poles.size(); ++i)
    for (size_t j = i + 1; j < approx.ghost_poles.size(); ++j)
      if (std::abs(approx.ghost_poles[i].beta - approx.ghost_poles[j].beta) <
          1e-8 * scale)
        throw MultipleRoot("riemann-hurwitz: coalesced denominator roots");
  c.n_C = approx.N + approx.M - 1;
  if (c.n_C != c.m_inf + 2 * c.n_P - 1)
    throw MultipleRoot("riemann-hurwitz: count identity violated");
  c.n_total = c.m_inf + c.n_P;
  return c;
}

}  // namespace einbein
