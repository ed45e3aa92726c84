#include "einbein/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "einbein/critical.hpp"

namespace einbein {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

Complex psi_damped(const Wavefunction& wf, Complex lam, double delta,
                   int sheet) {
  wf.action.check_guard(lam);
  const Complex s = wf.action.eval(lam);
  return wf.prefactor.eval(lam, sheet) *
         std::exp(I * wf.k0 * (1.0 + I * delta) * s);
}

struct SegmentIntegral {
  Complex value;
  double error;
  double l1;
};

SegmentIntegral integrate_segment(const Wavefunction& wf, Complex a, Complex b,
                                  double delta, int sheet) {
  const Complex d = b - a;
  double err = 0.0, l1 = 0.0;
  auto f = [&](double t) { return psi_damped(wf, a + t * d, delta, sheet) * d; };
  const Complex v = GK::integrate(f, 0.0, 1.0, 12, 1e-11, &err, &l1);
  return {v, err, l1};
}

/// Geometric scale of the stationary region of the action: balances the
/// largest finite-pole residue against the growth at infinity.
double stationary_scale(const EinbeinAction& action) {
  double rho = 0.0;
  for (const auto& p : action.poles) rho = std::max(rho, p.residue);
  const double mu = std::abs(action.leading_coeff);
  double s = 1.0;
  if (mu > 0.0 && rho > 0.0)
    s = std::pow(rho / (action.infinity_order * mu),
                 1.0 / (action.infinity_order + 1));
  return s;
}

double default_cutoff(const EinbeinAction& action) {
  if (action.channel) return 2.5 * action.channel->pole_spacing();
  double outer = 0.0;
  for (const auto& p : action.poles)
    outer = std::max(outer, std::abs(p.location));
  return 12.0 * std::max({1.0, outer, stationary_scale(action)});
}

/// Real-axis contour pushed below the axis with a closure ray into the
/// convergence wedge nearest to theta = 0 (or 2 pi). Built once; shared by
/// all damping levels so the Richardson extrapolation acts on a fixed path.
struct OraclePath {
  std::vector<Complex> polyline;  // from near the origin to the cutoff
  Complex closure_start;
  Complex closure_dir;  // unit ray direction into the wedge
};

OraclePath build_oracle_path(const Wavefunction& wf, double cutoff) {
  const EinbeinAction& action = wf.action;
  const double R = cutoff > 0.0 ? cutoff : default_cutoff(action);

  // depth below the axis: a fraction of the smallest gap between
  // consecutive on-axis singular points in (0, R)
  std::vector<double> marks{0.0, R};
  for (const auto& p : action.finite_poles(R)) {
    if (std::abs(p.location.imag()) < 1e-12 && p.location.real() > 1e-12 &&
        p.location.real() < R)
      marks.push_back(p.location.real());
  }
  std::sort(marks.begin(), marks.end());
  double gap = R;
  for (size_t i = 0; i + 1 < marks.size(); ++i)
    gap = std::min(gap, marks[i + 1] - marks[i]);
  double eta = std::min(0.25 * gap, 0.5);
  // On the dipped leg Im Sbar(u - i eta) ~ -eta Re Sbar'(u), so wherever
  // Re Sbar' > 0 the integrand is amplified by exp(k0 eta Re Sbar'); cap the
  // exponent so cancellation cannot swamp double precision at large k0.
  double slope = 0.0;
  for (int j = 1; j <= 16; ++j) {
    double t = R * j / 16.0;
    bool near_mark = false;
    for (double mk : marks)
      if (std::abs(t - mk) < 0.05 * gap) near_mark = true;
    if (near_mark) continue;
    slope = std::max(slope, action.d1(Complex(t, 0.0)).real());
  }
  if (slope > 0.0) eta = std::min(eta, 4.0 / (wf.k0 * slope));

  // start depth: deep enough into the decaying sector of the pole at the
  // origin that the truncated piece is below double precision
  double rho0 = 0.0;
  for (const auto& p : action.poles)
    if (std::abs(p.location) < 1e-12) rho0 = p.residue;
  double eps0 = std::min(eta, std::max(wf.k0 * rho0 / 70.0, 1e-9));

  OraclePath path;
  path.polyline = {Complex(0.0, -eps0), Complex(0.7 * eta, -eta),
                   Complex(R, -eta), Complex(R, 0.0)};

  // closure wedge: the convergence wedge at infinity nearest to the positive
  // real direction
  auto ws = convergence_wedges(action, R);
  const Wedge* best = nullptr;
  double best_d = 1e300;
  for (const auto& w : ws.at_infinity) {
    double d = 0.0;
    if (!(0.0 >= w.theta1 && 0.0 <= w.theta2) &&
        !(2.0 * pi >= w.theta1 && 2.0 * pi <= w.theta2))
      d = std::min(std::abs(w.theta1), std::abs(2.0 * pi - w.theta2));
    if (d < best_d) {
      best_d = d;
      best = &w;
    }
  }
  const double theta = 0.5 * (best->theta1 + best->theta2);
  path.closure_start = Complex(R, 0.0);
  path.closure_dir = std::exp(I * theta);
  return path;
}

Complex integrate_oracle_once(const Wavefunction& wf, const OraclePath& path,
                              double delta) {
  Complex total{0.0, 0.0};
  double err = 0.0, l1 = 0.0;
  for (size_t i = 0; i + 1 < path.polyline.size(); ++i) {
    auto seg = integrate_segment(wf, path.polyline[i], path.polyline[i + 1],
                                 delta, 0);
    total += seg.value;
    err += seg.error;
    l1 += seg.l1;
  }
  // closure ray: geometrically growing segments until contributions die
  const double R = std::abs(path.closure_start);
  double t0 = 0.0;
  double len = 0.2 * std::max(1.0, 0.2 * R);
  int quiet = 0;
  for (int k = 0; k < 60 && quiet < 2; ++k) {
    const Complex a = path.closure_start + t0 * path.closure_dir;
    const Complex b = path.closure_start + (t0 + len) * path.closure_dir;
    auto seg = integrate_segment(wf, a, b, delta, 0);
    total += seg.value;
    err += seg.error;
    l1 += seg.l1;
    if (std::abs(seg.value) < 1e-16 * (std::abs(total) + 1e-300))
      ++quiet;
    else
      quiet = 0;
    t0 += len;
    len *= 2.0;
  }
  if (quiet < 2)
    throw NonConvergence("oracle: closure ray did not decay within budget");
  if (err > 1e-6 * std::max(std::abs(total), 1e-3 * l1))
    throw AccuracyNotReached("oracle: quadrature error estimate too large");
  return I / wf.k0 * total;
}

}  // namespace

Complex integrate_polyline(const Wavefunction& wf,
                           const std::vector<Complex>& path, double delta,
                           int sheet) {
  Complex total{0.0, 0.0};
  double err = 0.0, l1 = 0.0;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    if (std::abs(path[i + 1] - path[i]) == 0.0) continue;
    auto seg = integrate_segment(wf, path[i], path[i + 1], delta, sheet);
    total += seg.value;
    err += seg.error;
    l1 += seg.l1;
  }
  if (err > 1e-6 * std::max(std::abs(total), 1e-3 * l1))
    throw AccuracyNotReached("polyline: quadrature error estimate too large");
  return total;
}

namespace {

/// Parameters u in (0,1) where the segment a..b crosses the upward vertical
/// branch cut of a half-integer prefactor factor.
std::vector<double> cut_crossings(const Wavefunction& wf, Complex a,
                                  Complex b) {
  std::vector<double> us;
  for (const auto& f : wf.prefactor.factors) {
    if (std::lround(2.0 * f.exponent) % 2 == 0) continue;
    const double da = a.real() - f.location.real();
    const double db = b.real() - f.location.real();
    if (da * db >= 0.0) continue;
    const double u = da / (da - db);
    const double im = a.imag() + u * (b.imag() - a.imag());
    if (im > f.location.imag()) us.push_back(u);
  }
  if (wf.prefactor.channel_sinc) {
    const double s =
        pi / (2.0 * std::sqrt(wf.prefactor.channel_alpha));
    const long nlo = std::lround(std::floor(
        std::min(a.real(), b.real()) / s));
    const long nhi = std::lround(std::ceil(
        std::max(a.real(), b.real()) / s));
    for (long n = nlo; n <= nhi; ++n) {
      if (n == 0) continue;
      const double br = double(n) * s;
      const double da = a.real() - br, db = b.real() - br;
      if (da * db >= 0.0) continue;
      const double u = da / (da - db);
      if (a.imag() + u * (b.imag() - a.imag()) > 0.0) us.push_back(u);
    }
  }
  std::sort(us.begin(), us.end());
  return us;
}

}  // namespace

Complex integrate_thimble(const Wavefunction& wf, const Thimble& thimble) {
  const auto& path = thimble.path;
  if (path.size() < 2) return {0.0, 0.0};

  // analytic continuation of the prefactor branch along the path, anchored
  // at the critical point (sheet 0 there)
  const auto center =
      std::min_element(path.begin(), path.end(), [&](Complex a, Complex b) {
        return std::abs(a - thimble.cp.lambda) < std::abs(b - thimble.cp.lambda);
      });
  const size_t c = size_t(center - path.begin());
  std::vector<int> sheet(path.size(), 0);
  auto continue_from = [&](size_t from, size_t to) {
    const long step = from < to ? 1 : -1;
    for (long i = long(from); i != long(to); i += step) {
      const size_t j = size_t(i), k = size_t(i + step);
      sheet[k] = sheet[j];
      if (cut_crossings(wf, path[j], path[k]).size() % 2 != 0)
        sheet[k] = 1 - sheet[k];
    }
  };
  continue_from(c, path.size() - 1);
  continue_from(c, 0);

  Complex total{0.0, 0.0};
  double err = 0.0, l1 = 0.0;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    const Complex a = path[i], b = path[i + 1];
    if (std::abs(b - a) == 0.0) continue;
    auto us = cut_crossings(wf, a, b);
    double u0 = 0.0;
    int s = sheet[i];
    us.push_back(1.0);
    for (double u1 : us) {
      if (u1 - u0 > 1e-15) {
        auto seg = integrate_segment(wf, a + u0 * (b - a), a + u1 * (b - a),
                                     0.0, s);
        total += seg.value;
        err += seg.error;
        l1 += seg.l1;
      }
      u0 = u1;
      s = 1 - s;
    }
  }
  if (err > 1e-6 * std::max(std::abs(total), 1e-3 * l1))
    throw AccuracyNotReached("thimble: quadrature error estimate too large");
  return total;
}

Complex integrate_path_continued(const Wavefunction& wf,
                                 const std::vector<Complex>& path,
                                 int start_sheet) {
  Complex total{0.0, 0.0};
  double err = 0.0, l1 = 0.0;
  int sheet = start_sheet;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    const Complex a = path[i], b = path[i + 1];
    if (std::abs(b - a) == 0.0) continue;
    auto us = cut_crossings(wf, a, b);
    double u0 = 0.0;
    us.push_back(1.0);
    for (double u1 : us) {
      if (u1 - u0 > 1e-15) {
        auto seg = integrate_segment(wf, a + u0 * (b - a), a + u1 * (b - a),
                                     0.0, sheet);
        total += seg.value;
        err += seg.error;
        l1 += seg.l1;
      }
      u0 = u1;
      if (u1 < 1.0) sheet = 1 - sheet;
    }
  }
  if (err > 1e-6 * std::max(std::abs(total), 1e-3 * l1))
    throw AccuracyNotReached("continued path: quadrature error estimate too large");
  return total;
}

Complex oracle_real_axis(const Wavefunction& wf, double delta, double cutoff) {
  if (wf.k0 <= 0.0)
    throw std::invalid_argument("oracle: k0 must be positive");
  if (delta <= 0.0)
    throw std::invalid_argument("oracle: damping must be positive");
  // The damping enters as k0 * delta * Sbar, so shrink delta with k0 to keep
  // the extrapolation error k0-uniform; the deformed contour converges
  // absolutely even undamped.
  delta *= std::min(1.0, 10.0 / wf.k0);
  const auto path = build_oracle_path(wf, cutoff);
  const Complex v1 = integrate_oracle_once(wf, path, delta);
  const Complex v2 = integrate_oracle_once(wf, path, 0.5 * delta);
  const Complex v3 = integrate_oracle_once(wf, path, 0.25 * delta);
  const Complex e1 = 2.0 * v2 - v1;
  const Complex e2 = 2.0 * v3 - v2;
  const Complex result = (4.0 * e2 - e1) / 3.0;
  if (std::abs(e2 - e1) > 1e-4 * (std::abs(result) + 1e-300) + 1e-13)
    throw NonConvergence("oracle: damping extrapolation did not converge");
  return result;
}

FieldSample field_point(const RefractionModel& model, const SourceSpec& source,
                        const Eigen::VectorXd& x, double k0) {
  FieldSample out;
  out.x = x;
  auto wf = build_wavefunction(model, source, x, k0);

  try {
    Region region;
    int seeds = 25;
    if (wf.action.channel) {
      const double s = wf.action.channel->pole_spacing();
      region = {0.02 * s, 2.49 * s, -1.6 * s, 1.6 * s};
      seeds = 121;
    } else {
      const double R = default_cutoff(wf.action);
      region = {-R, R, -R, R};
    }
    auto cps = find_critical_points(wf.action, region, seeds);
    std::vector<Thimble> thimbles;
    for (const auto& cp : cps) {
      if (std::abs(cp.second_deriv) < 1e-6) continue;  // on-caustic
      try {
        thimbles.push_back(trace_thimble(wf.action, cp));
      } catch (const WrongSector&) {
      } catch (const FlowStall&) {
      }
    }
    auto coeff = decompose_real_axis(thimbles, model, source, x, k0);
    Complex value{0.0, 0.0};
    for (size_t i = 0; i < thimbles.size(); ++i) {
      const Complex v = I / k0 * integrate_thimble(wf, thimbles[i]);
      out.contributions.push_back(v);
      value += double(coeff[i]) * v;
    }
    out.decomposition = coeff;
    out.value = value;
    out.via_thimbles = true;
    return out;
  } catch (const std::runtime_error& e) {
    out.diagnostic = e.what();
  } catch (const std::invalid_argument& e) {
    out.diagnostic = e.what();
  }

  out.value = oracle_real_axis(wf);
  out.via_thimbles = false;
  return out;
}

std::vector<FieldSample> field_grid(const RefractionModel& model,
                                    const SourceSpec& source,
                                    const std::vector<double>& xs,
                                    const std::vector<double>& zs, double k0) {
  std::vector<FieldSample> out;
  out.reserve(xs.size() * zs.size());
  for (double z : zs)
    for (double xv : xs) {
      Eigen::VectorXd x(2);
      x << xv, z;
      out.push_back(field_point(model, source, x, k0));
    }
  return out;
}

double helmholtz_residual_at(const RefractionModel& model,
                             const SourceSpec& source,
                             const Eigen::VectorXd& x, double k0, double h) {
  auto phi = [&](const Eigen::VectorXd& p) {
    return oracle_real_axis(build_wavefunction(model, source, p, k0));
  };
  const Complex center = phi(x);
  Complex lap{0.0, 0.0};
  for (int i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    lap += (phi(xp) - 2.0 * center + phi(xm)) / (h * h);
  }
  const Complex res = lap + k0 * k0 * model.n2(x) * center;
  return std::abs(res) / (k0 * k0 * std::abs(center));
}

}  // namespace einbein
