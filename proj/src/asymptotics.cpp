#include "einbein/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Eigenvalues>

namespace einbein {

namespace {

using CL = std::complex<long double>;

constexpr long double kAi0 = 0.35502805388781723926L;        // Ai(0)
constexpr long double kAip0 = -0.25881940379280679840L;      // Ai'(0)
constexpr double kPi = 3.14159265358979323846;
const Complex kI{0.0, 1.0};

// Maclaurin solutions of w'' = u w: F = sum a_k u^{3k}, G = sum b_k u^{3k+1}.
void airy_series(CL u, CL& ai, CL& aip) {
  CL u3 = u * u * u;
  CL f = 1.0L, fp = 0.0L;        // F and F'
  CL g = u, gp = 1.0L;           // G and G'
  CL af = 1.0L, bg = u;          // running terms a_k u^{3k}, b_k u^{3k+1}
  for (int k = 1; k <= 80; ++k) {
    long double tk = 3.0L * k;
    af *= u3 / (tk * (tk - 1.0L));
    bg *= u3 / (tk * (tk + 1.0L));
    f += af;
    g += bg;
    fp += af * (tk / u);         // derivative term 3k a_k u^{3k-1}
    gp += bg * ((tk + 1.0L) / u);
    if (std::abs(af) < 1e-22L && std::abs(bg) < 1e-22L) break;
  }
  if (std::abs(u) < 1e-30L) { fp = 0.0L; gp = 1.0L; }
  ai = kAi0 * f + kAip0 * g;
  aip = kAi0 * fp + kAip0 * gp;
}

// DLMF 9.7 coefficients u_k and v_k.
void airy_uv(int kmax, std::vector<long double>& us,
             std::vector<long double>& vs) {
  us.assign(kmax + 1, 1.0L);
  vs.assign(kmax + 1, 1.0L);
  for (int k = 1; k <= kmax; ++k) {
    us[k] = us[k - 1] * (6.0L * k - 5.0L) * (6.0L * k - 3.0L) *
            (6.0L * k - 1.0L) / (216.0L * k * (2.0L * k - 1.0L));
    vs[k] = us[k] * (6.0L * k + 1.0L) / (1.0L - 6.0L * k);
  }
}

// Large positive real u.
void airy_asym_pos(long double x, CL& ai, CL& aip) {
  long double zeta = (2.0L / 3.0L) * x * std::sqrt(x);
  if (zeta > 690.0L)
    throw AiryOverflow("airy asymptotic exponent out of range");
  std::vector<long double> us, vs;
  airy_uv(20, us, vs);
  long double sa = 0.0L, sp = 0.0L, prev = 1e30L;
  for (int k = 0; k <= 20; ++k) {
    long double zk = std::pow(zeta, (long double)k);
    long double ta = us[k] / zk, tp = vs[k] / zk;
    if (std::abs(ta) > prev) break;  // truncate at smallest term
    long double sgn = (k % 2 == 0) ? 1.0L : -1.0L;
    sa += sgn * ta;
    sp += sgn * tp;
    prev = std::abs(ta);
    if (prev < 1e-20L) break;
  }
  long double pref = std::exp(-zeta) / (2.0L * std::sqrt((long double)kPi));
  long double q = std::pow(x, 0.25L);
  ai = pref / q * sa;
  aip = -pref * q * sp;
}

// Large negative real u (oscillatory, DLMF 9.7.9-9.7.10).
void airy_asym_neg(long double x, CL& ai, CL& aip) {
  long double zeta = (2.0L / 3.0L) * x * std::sqrt(x);
  std::vector<long double> us, vs;
  airy_uv(21, us, vs);
  long double ce = 0.0L, se = 0.0L, cp = 0.0L, sp = 0.0L;
  for (int k = 0; 2 * k + 1 <= 21; ++k) {
    long double sgn = (k % 2 == 0) ? 1.0L : -1.0L;
    long double z2k = std::pow(zeta, 2.0L * k);
    ce += sgn * us[2 * k] / z2k;
    se += sgn * us[2 * k + 1] / (z2k * zeta);
    cp += sgn * vs[2 * k] / z2k;
    sp += sgn * vs[2 * k + 1] / (z2k * zeta);
  }
  long double c = std::cos(zeta - (long double)kPi / 4.0L);
  long double s = std::sin(zeta - (long double)kPi / 4.0L);
  long double rp = 1.0L / std::sqrt((long double)kPi);
  long double q = std::pow(x, 0.25L);
  ai = rp / q * (c * ce + s * se);
  aip = q * rp * (s * cp - c * sp);
}

}  // namespace

Complex airy_ai(Complex u) {
  CL ai, aip;
  if (std::abs(u) <= 7.5) {
    airy_series(CL(u.real(), u.imag()), ai, aip);
  } else if (std::abs(u.imag()) < 1e-300) {
    if (u.real() > 0)
      airy_asym_pos((long double)u.real(), ai, aip);
    else
      airy_asym_neg((long double)-u.real(), ai, aip);
  } else {
    throw AiryOverflow("large complex airy argument not supported");
  }
  return Complex((double)ai.real(), (double)ai.imag());
}

Complex airy_ai_prime(Complex u) {
  CL ai, aip;
  if (std::abs(u) <= 7.5) {
    airy_series(CL(u.real(), u.imag()), ai, aip);
  } else if (std::abs(u.imag()) < 1e-300) {
    if (u.real() > 0)
      airy_asym_pos((long double)u.real(), ai, aip);
    else
      airy_asym_neg((long double)-u.real(), ai, aip);
  } else {
    throw AiryOverflow("large complex airy argument not supported");
  }
  return Complex((double)aip.real(), (double)aip.imag());
}

UniformExpansion uniform_expansion(double gm1, double g0, double g1,
                                   double g3, int codim) {
  if (std::abs(g3) < 1e-14 * (1.0 + std::abs(g1)))
    throw DegenerateCubic("vanishing cubic coefficient");
  double ratio = -gm1 / (3.0 * g3);
  if (!(ratio > 0.0))
    throw DegenerateCubic("no real zero-curvature point: -gm1/(3 g3) <= 0");
  UniformExpansion ue;
  ue.lambda_c = std::pow(ratio, 0.25);
  double lc = ue.lambda_c;
  ue.Gamma0 = g0 + gm1 / lc + g1 * lc + g3 * lc * lc * lc;
  ue.Gamma1 = g1 + 6.0 * g3 * lc * lc;
  // The pole adds -gm1/lc^4 = +3 g3 to the cubic coefficient.
  ue.Gamma3 = 4.0 * g3;
  ue.codim = codim;
  return ue;
}

Complex airy_uniform(double gm1, double g0, double g1, double g3, double k0,
                     int codim) {
  // Fold-uniform field from the exact saddle data of the truncated action
  // S(L) = gm1/L + g0 + g1 L + g3 L^3: map S onto the cubic normal form
  // A + t^3/3 - zeta t, interpolate the amplitude at the two merging
  // saddles (Ai term p, Ai' term q), and evaluate the two Airy integrals.
  UniformExpansion ue = uniform_expansion(gm1, g0, g1, g3, codim);
  const double d = (double)codim;
  auto sb = [&](Complex l) {
    return gm1 / l + g0 + g1 * l + g3 * l * l * l;
  };
  auto sb2 = [&](Complex l) {
    return 2.0 * gm1 / (l * l * l) + 6.0 * g3 * l;
  };
  auto amp = [&](Complex l) {
    return std::pow(k0 / (4.0 * kPi * kI), 0.5 * d) * std::pow(l, -0.5 * d);
  };
  const double nu = std::cbrt(3.0 * ue.Gamma3);  // affine map slope at merge

  // Saddles: S'(L) = 0 is a quadratic in L^2.
  const double disc = g1 * g1 + 12.0 * g3 * gm1;
  Complex rd = std::sqrt(Complex(disc, 0.0));
  Complex la = std::sqrt((-g1 + rd) / (6.0 * g3));
  Complex lb = std::sqrt((-g1 - rd) / (6.0 * g3));
  Complex sa = sb(la), sc = sb(lb);

  Complex lp, lm;  // saddles mapping to t = +sqrt(zeta), -sqrt(zeta)
  double zeta;
  Complex sqz;  // sqrt(zeta) on the fold branch
  if (disc >= 0.0) {
    // Illuminated: both saddles real, larger action at t = -sqrt(zeta).
    if (sa.real() <= sc.real()) { lp = la; lm = lb; }
    else { lp = lb; lm = la; }
    double ds = (sb(lm) - sb(lp)).real();
    zeta = std::pow(0.75 * std::max(ds, 0.0), 2.0 / 3.0);
    sqz = std::sqrt(zeta);
  } else {
    // Shadow: conjugate pair; the damped saddle (Im S > 0) carries t on the
    // positive imaginary axis.
    if (sa.imag() >= 0.0) { lp = la; lm = lb; }
    else { lp = lb; lm = la; }
    double ims = sb(lp).imag();
    zeta = -std::pow(1.5 * ims, 2.0 / 3.0);
    sqz = Complex(0.0, std::sqrt(-zeta));
  }
  Complex a_mid = 0.5 * (sb(lp) + sb(lm));

  // dL/dt at each saddle: branch continuous with the merge limit 1/nu.
  auto dldt = [&](Complex l, Complex t) {
    Complex v = std::sqrt(2.0 * t / sb2(l));
    if (std::abs(v - 1.0 / nu) > std::abs(v + 1.0 / nu)) v = -v;
    return v;
  };
  Complex p, q;
  if (std::abs(sqz) * std::abs(nu) > 1e-5 * (1.0 + std::abs(ue.lambda_c))) {
    Complex fp = amp(lp) * dldt(lp, sqz);
    Complex fm = amp(lm) * dldt(lm, -sqz);
    p = 0.5 * (fp + fm);
    q = 0.5 * (fp - fm) / sqz;
  } else {
    // Confluent limit: value and derivative of the mapped amplitude at the
    // merge point; the map curvature contributes f/(2 Lc).
    Complex lc(ue.lambda_c, 0.0);
    Complex f0 = amp(lc);
    Complex f1 = -0.5 * d * f0 / lc;  // d amp / dL
    p = f0 / nu;
    q = (f1 + f0 / (2.0 * lc)) / (nu * nu);
  }

  double u = -std::pow(k0, 2.0 / 3.0) * zeta;
  Complex bracket = std::pow(k0, -1.0 / 3.0) * p * airy_ai(u) -
                    kI * std::pow(k0, -2.0 / 3.0) * q * airy_ai_prime(u);
  // The integration contour runs opposite to the standard Airy orientation.
  Complex phi_contour = -2.0 * kPi * std::exp(kI * k0 * a_mid) * bracket;
  return (kI / k0) * phi_contour;
}

FoldSeries linear_fold_series(const RefractionModel& model,
                              const SourceSpec& source,
                              const Eigen::VectorXd& x) {
  FoldSeries fs;
  Eigen::VectorXd d = x - source.location;
  fs.gm1 = 0.25 * d.squaredNorm();
  fs.g0 = 0.0;
  double zmid = 0.5 * (x(x.size() - 1) + source.location(x.size() - 1));
  fs.g1 = model.n0sq - model.a * zmid;
  fs.g3 = -model.a * model.a / 12.0;
  return fs;
}

Complex stationary_phase(const Wavefunction& wf,
                         const std::vector<Thimble>& thimbles,
                         const std::vector<int>& coeff, double threshold) {
  // Caustic proximity: Gaussian width must be small against the gap to the
  // nearest other contributing saddle.
  std::vector<Complex> active;
  for (size_t i = 0; i < thimbles.size(); ++i)
    if (i < coeff.size() && coeff[i] != 0)
      active.push_back(thimbles[i].cp.lambda);
  for (size_t i = 0; i < active.size(); ++i) {
    double gap = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < active.size(); ++j)
      if (j != i) gap = std::min(gap, std::abs(active[i] - active[j]));
    if (!std::isfinite(gap)) continue;
    size_t idx = 0;
    for (size_t t = 0; t < thimbles.size(); ++t)
      if (t < coeff.size() && coeff[t] != 0 &&
          thimbles[t].cp.lambda == active[i]) { idx = t; break; }
    double curv = std::abs(thimbles[idx].cp.second_deriv);
    if (wf.k0 * curv * gap * gap < threshold)
      throw TooCloseToCaustic("saddles merge within a Gaussian width");
  }
  Complex total = 0.0;
  for (size_t i = 0; i < thimbles.size(); ++i) {
    if (i >= coeff.size() || coeff[i] == 0) continue;
    const Thimble& th = thimbles[i];
    double curv = std::abs(th.cp.second_deriv);
    Complex amp = wf.prefactor.eval(th.cp.lambda, 0) *
                  std::exp(kI * wf.k0 * th.cp.value);
    // Steepest-descent Gaussian with the branch set by the thimble tangent.
    Complex phase_dir = th.tangent / std::abs(th.tangent);
    total += (double)coeff[i] * amp * phase_dir *
             std::sqrt(2.0 * kPi / (wf.k0 * curv));
  }
  return (kI / wf.k0) * total;
}

LambdaMap lambda_map(double gm1, double g1, double g3) {
  LambdaMap lm;
  if (std::abs(gm1) < 1e-12 * (1.0 + std::abs(g1))) {
    lm.singular = true;  // ghost source: residue vanishes at the caustic tip
    return lm;
  }
  UniformExpansion ue = uniform_expansion(gm1, 0.0, g1, g3);
  lm.nu = std::cbrt(3.0 * ue.Gamma3);
  lm.lambda_tilde = ue.lambda_c;
  lm.zeta1 = ue.Gamma1 / lm.nu;
  return lm;
}

std::vector<Complex> cusp_generating_roots(double zeta1, double zeta2) {
  // Companion matrix of l^3 + zeta2 l + zeta1.
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  m(1, 0) = 1.0;
  m(2, 1) = 1.0;
  m(0, 2) = -zeta1;
  m(1, 2) = -zeta2;
  Eigen::EigenSolver<Eigen::Matrix3d> es(m);
  std::vector<Complex> roots;
  for (int i = 0; i < 3; ++i) roots.push_back(es.eigenvalues()(i));
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

std::vector<Arrival> arrival_times(const std::vector<Thimble>& thimbles,
                                   const std::vector<int>& coeff, double c0) {
  std::vector<Arrival> out;
  for (size_t i = 0; i < thimbles.size(); ++i) {
    if (i >= coeff.size() || coeff[i] == 0) continue;
    Arrival a;
    a.t = thimbles[i].cp.value.real() / c0;
    a.smear = thimbles[i].cp.value.imag();
    a.thimble = (int)i;
    out.push_back(a);
  }
  std::sort(out.begin(), out.end(),
            [](const Arrival& a, const Arrival& b) { return a.t < b.t; });
  return out;
}

std::vector<Arrival> cusp_axis_arrivals(double n0sq, double mu, double z,
                                        double c0) {
  double n0 = std::sqrt(n0sq);
  std::vector<Arrival> out;
  Arrival direct;
  direct.t = n0 * z / c0;
  direct.smear = 0.0;
  direct.thimble = 0;
  out.push_back(direct);
  Arrival wind;
  wind.t = (z * z / (4.0 * mu) + n0sq * mu) / c0;
  wind.smear = 0.0;
  wind.thimble = -1;  // reaches the detector after winding the branch point
  out.push_back(wind);
  std::sort(out.begin(), out.end(),
            [](const Arrival& a, const Arrival& b) { return a.t < b.t; });
  return out;
}

}  // namespace einbein
