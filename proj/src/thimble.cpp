#include "einbein/thimble.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "einbein/quadrature.hpp"

namespace einbein {

namespace {

double wrap_angle(double t) {
  t = std::fmod(t, 2.0 * pi);
  if (t < 0.0) t += 2.0 * pi;
  return t;
}

double residue_floor(const FinitePole& p) {
  return 1e-10 * (1.0 + std::abs(p.location) * std::abs(p.location));
}

}  // namespace

const Wedge* WedgeSet::infinity_wedge_containing(double theta) const {
  theta = wrap_angle(theta);
  for (const auto& w : at_infinity) {
    if (theta >= w.theta1 && theta <= w.theta2) return &w;
    if (theta + 2.0 * pi >= w.theta1 && theta + 2.0 * pi <= w.theta2)
      return &w;
  }
  return nullptr;
}

void ContourClass::reduce() {
  bool changed = true;
  auto inverse = [](const std::string& a, const std::string& b) {
    // wind(p,+1,s) cancels wind(p,-1,s)
    if (a.rfind("wind(", 0) != 0 || b.rfind("wind(", 0) != 0) return false;
    auto flip = [](std::string s) {
      auto pos = s.find(",+1,");
      if (pos != std::string::npos) return s.replace(pos, 4, ",-1,");
      pos = s.find(",-1,");
      if (pos != std::string::npos) return s.replace(pos, 4, ",+1,");
      return s;
    };
    return flip(a) == b;
  };
  while (changed) {
    changed = false;
    for (size_t i = 0; i + 1 < word.size(); ++i) {
      if (inverse(word[i], word[i + 1])) {
        word.erase(word.begin() + long(i), word.begin() + long(i + 2));
        changed = true;
        break;
      }
      if (word[i] == word[i + 1] && word[i].rfind("wedge", 0) == 0) {
        word.erase(word.begin() + long(i));
        changed = true;
        break;
      }
    }
  }
}

WedgeSet convergence_wedges(const EinbeinAction& action, double pole_window) {
  WedgeSet ws;
  const int m = action.infinity_order;
  if (m < 1) throw std::invalid_argument("wedges: infinity order must be >= 1");
  const double argmu = std::arg(action.leading_coeff);
  for (int k = 0; k < m; ++k) {
    Wedge w;
    w.at_infinity = true;
    w.index = k;
    w.theta1 = wrap_angle((2.0 * pi * k - argmu) / m);
    w.theta2 = w.theta1 + pi / m;
    ws.at_infinity.push_back(w);
  }
  std::sort(ws.at_infinity.begin(), ws.at_infinity.end(),
            [](const Wedge& a, const Wedge& b) { return a.theta1 < b.theta1; });
  for (size_t k = 0; k < ws.at_infinity.size(); ++k)
    ws.at_infinity[k].index = int(k);

  double window = pole_window;
  if (window <= 0.0)
    window = action.channel ? 3.5 * action.channel->pole_spacing() : 1e9;
  ws.poles = action.finite_poles(window);
  for (size_t i = 0; i < ws.poles.size(); ++i) {
    const auto& p = ws.poles[i];
    Wedge w;
    w.at_infinity = false;
    w.pole_id = int(i);
    w.pole_location = p.location;
    w.index = int(i);
    if (std::abs(p.residue) < residue_floor(p)) {
      w.branch_point_only = true;
    } else {
      // convergent approach: Im(rho/(Lambda-beta)) > 0
      const double argrho = p.residue > 0.0 ? 0.0 : pi;
      w.theta1 = wrap_angle(argrho - pi);
      w.theta2 = w.theta1 + pi;
    }
    ws.at_poles.push_back(w);
  }
  return ws;
}

namespace {

struct FlowResult {
  std::vector<Complex> samples;
  ThimbleEndpoint endpoint;
  double drift = 0.0;
};

FlowResult flow_branch(const EinbeinAction& action, const WedgeSet& ws,
                       Complex center, Complex start, double c_phase,
                       double r_max, double eps_pole, int max_steps) {
  FlowResult out;
  Complex lam = start;
  double h = std::max(0.2 * std::abs(start - center), 1e-12);
  const double scale_s = 1.0 + std::abs(c_phase);

  auto nearest_pole = [&](Complex l, double* dist) -> const FinitePole* {
    const FinitePole* best = nullptr;
    double bd = 1e300;
    for (const auto& p : ws.poles) {
      const double d = std::abs(l - p.location);
      if (d < bd) {
        bd = d;
        best = &p;
      }
    }
    *dist = bd;
    return best;
  };

  for (int step = 0; step < max_steps; ++step) {
    double dist = 1e300;
    const FinitePole* np = nearest_pole(lam, &dist);

    if (np && dist < eps_pole) {
      // terminal at a finite pole: must arrive inside the convergent sector
      const Wedge& w = ws.at_poles[size_t(np - ws.poles.data())];
      const double phi = wrap_angle(std::arg(lam - np->location));
      const bool in_sector =
          !w.branch_point_only &&
          ((phi >= w.theta1 && phi <= w.theta2) ||
           (phi + 2.0 * pi >= w.theta1 && phi + 2.0 * pi <= w.theta2));
      if (!in_sector)
        throw WrongSector("thimble: pole reached outside convergent sector");
      out.endpoint = {EndpointKind::Pole, w.pole_id};
      return out;
    }
    if (std::abs(lam) > r_max) {
      const Wedge* w = ws.infinity_wedge_containing(std::arg(lam));
      if (!w) {
        // on a wedge boundary within tolerance: pick the nearest wedge
        double best = 1e300;
        for (const auto& cand : ws.at_infinity) {
          for (double t : {cand.theta1, cand.theta2}) {
            double d = std::abs(wrap_angle(std::arg(lam)) - wrap_angle(t));
            d = std::min(d, 2.0 * pi - d);
            if (d < best) {
              best = d;
              w = &cand;
            }
          }
        }
        if (!w || best > 0.15)
          throw FlowStall("thimble: left region outside any wedge");
      }
      out.endpoint = {EndpointKind::InfinityWedge, w->index};
      return out;
    }

    Complex d1;
    try {
      d1 = action.d1(lam);
    } catch (const PoleEvaluation&) {
      throw FlowStall("thimble: flow entered a pole guard disk");
    }
    const double g = std::abs(d1);
    if (g < 1e-14) throw FlowStall("thimble: gradient vanished off-center");

    const Complex u = I * std::conj(d1) / g;
    double hmax = 0.04 * (1.0 + std::abs(lam));
    if (np) hmax = std::min(hmax, 0.25 * dist + 0.5 * eps_pole);
    // near the critical point the level line curves on the scale of the
    // distance from it; resolve that or the branch can slip onto its twin
    hmax = std::min(hmax, 0.3 * std::abs(lam - center) + 1e-9);
    h = std::min(h * 1.3, hmax);

    // midpoint step of the normalized ascent flow
    Complex lam_new;
    for (;;) {
      Complex umid = u;
      try {
        const Complex d1m = action.d1(lam + 0.5 * h * u);
        const double gm = std::abs(d1m);
        if (gm > 1e-300) umid = I * std::conj(d1m) / gm;
        lam_new = lam + h * umid;
        // project back onto the constant-Re(Sbar) level set
        for (int it = 0; it < 8; ++it) {
          const Complex d1n = action.d1(lam_new);
          const double gn = std::abs(d1n);
          if (gn < 1e-300) break;
          const double err = action.eval(lam_new).real() - c_phase;
          if (std::abs(err) < 1e-13 * scale_s) break;
          lam_new -= err * std::conj(d1n) / (gn * gn);
        }
        const double drift =
            std::abs(action.eval(lam_new).real() - c_phase);
        if (drift > 1e-10 * scale_s && h > 1e-10 * (1.0 + std::abs(lam))) {
          h *= 0.5;
          continue;
        }
        out.drift = std::max(out.drift, drift);
      } catch (const PoleEvaluation&) {
        if (h <= 1e-12)
          throw FlowStall("thimble: step collapsed at a pole guard disk");
        h *= 0.5;
        continue;
      }
      break;
    }
    if (std::abs(lam_new - lam) < 1e-15 * (1.0 + std::abs(lam)))
      throw FlowStall("thimble: step below minimum before a terminal");
    lam = lam_new;
    out.samples.push_back(lam);
  }
  throw FlowStall("thimble: step budget exhausted");
}

}  // namespace

Thimble trace_thimble(const EinbeinAction& action, const CriticalPoint& cp,
                      const TraceOptions& opt) {
  if (std::abs(cp.second_deriv) < 1e-6)
    throw std::invalid_argument(
        "thimble: degenerate critical point (on-caustic); perturb x");

  double outer = 1.0;
  for (const auto& p : action.poles)
    outer = std::max(outer, std::abs(p.location));
  double r_max = opt.r_max;
  if (r_max <= 0.0) {
    r_max = 10.0 * std::max({outer, 1.0, std::abs(cp.lambda)});
    if (action.channel)
      r_max = std::max({10.0, 4.0 * std::abs(cp.lambda),
                        6.0 * action.channel->pole_spacing()});
  }
  const double spacing = action.characteristic_pole_spacing();
  const double eps_pole =
      opt.eps_pole > 0.0 ? opt.eps_pole : 1e-4 * spacing;
  const double window =
      opt.pole_window > 0.0 ? opt.pole_window
                            : (action.channel ? r_max : 1e9);
  auto ws = convergence_wedges(action, window);

  const double theta0 = 0.5 * (pi / 2.0 - std::arg(cp.second_deriv));
  const double delta =
      opt.launch * std::sqrt(1.0 / std::abs(cp.second_deriv));

  auto fwd = flow_branch(action, ws, cp.lambda,
                         cp.lambda + delta * std::exp(I * theta0),
                         cp.value.real(), r_max, eps_pole, opt.max_steps);
  auto bwd = flow_branch(action, ws, cp.lambda,
                         cp.lambda + delta * std::exp(I * (theta0 + pi)),
                         cp.value.real(), r_max, eps_pole, opt.max_steps);

  Thimble t;
  t.cp = cp;
  t.re_phase = cp.value.real();
  t.phase_drift = std::max(fwd.drift, bwd.drift);
  t.start = bwd.endpoint;
  t.end = fwd.endpoint;
  t.tangent = std::exp(I * theta0);
  t.path.reserve(bwd.samples.size() + fwd.samples.size() + 1);
  for (auto it = bwd.samples.rbegin(); it != bwd.samples.rend(); ++it)
    t.path.push_back(*it);
  t.path.push_back(cp.lambda);
  for (const auto& s : fwd.samples) t.path.push_back(s);
  return t;
}

std::vector<int> decompose_real_axis(const std::vector<Thimble>& thimbles,
                                     const RefractionModel& model,
                                     const SourceSpec& source,
                                     const Eigen::VectorXd& x, double k0) {
  if (thimbles.empty())
    throw NonIntegerCoefficients("decompose: empty thimble set");
  const size_t n = thimbles.size();
  // enough distinct k0 samples to overdetermine the real coefficients
  std::vector<double> k0s;
  for (size_t j = 0; 2 * j < n + 2; ++j)
    k0s.push_back(k0 * std::pow(1.17, double(j)));

  Eigen::MatrixXd A(long(2 * k0s.size()), long(n));
  Eigen::VectorXd b(long(2 * k0s.size()));
  std::vector<std::vector<Complex>> integrals(k0s.size());
  for (size_t kk = 0; kk < k0s.size(); ++kk) {
    auto wf = build_wavefunction(model, source, x, k0s[kk]);
    const Complex target = oracle_real_axis(wf);
    b(long(2 * kk)) = target.real();
    b(long(2 * kk + 1)) = target.imag();
    for (size_t i = 0; i < n; ++i) {
      const Complex v =
          I / k0s[kk] * integrate_thimble(wf, thimbles[i]);
      integrals[kk].push_back(v);
      A(long(2 * kk), long(i)) = v.real();
      A(long(2 * kk + 1), long(i)) = v.imag();
    }
  }

  // suppress columns that are numerically irrelevant
  double colmax = 0.0;
  for (size_t i = 0; i < n; ++i)
    colmax = std::max(colmax, A.col(long(i)).norm());
  std::vector<bool> keep(n, true);
  for (size_t i = 0; i < n; ++i)
    if (A.col(long(i)).norm() < 1e-12 * colmax) {
      keep[i] = false;
      A.col(long(i)).setZero();
    }

  Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  std::vector<int> coeff(n, 0);
  for (size_t i = 0; i < n; ++i)
    coeff[i] = keep[i] ? int(std::lround(c(long(i)))) : 0;

  Eigen::VectorXd r = b;
  for (size_t i = 0; i < n; ++i) r -= double(coeff[i]) * A.col(long(i));
  if (r.norm() > 1e-6 * (b.norm() + 1e-300))
    throw NonIntegerCoefficients(
        "decompose: residual after rounding exceeds tolerance");
  return coeff;
}

}  // namespace einbein
