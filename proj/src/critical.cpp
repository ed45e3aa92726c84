#include "einbein/critical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "einbein/pade.hpp"

namespace einbein {

namespace {

using Poly = std::vector<Complex>;

Poly pmul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, Complex{0.0, 0.0});
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

void padd(Poly& a, const Poly& b, Complex w) {
  if (a.size() < b.size()) a.resize(b.size(), Complex{0.0, 0.0});
  for (size_t i = 0; i < b.size(); ++i) a[i] += w * b[i];
}

/// copy of the action with vanishing-residue poles removed, so evaluation at
/// a critical point sitting on such a pole does not trip the guard
EinbeinAction pruned(const EinbeinAction& action, double tol_res) {
  EinbeinAction a = action;
  a.poles.clear();
  for (const auto& p : action.poles)
    if (std::abs(p.residue) >= tol_res) a.poles.push_back(p);
  return a;
}

double length_scale(const EinbeinAction& action) {
  double L = 1.0;
  for (const auto& p : action.poles)
    L = std::max({L, std::abs(p.location), std::sqrt(std::abs(p.residue))});
  return L;
}

std::vector<CriticalPoint> classify_roots(const EinbeinAction& eval_action,
                                          std::vector<Complex> roots,
                                          const Region& region) {
  double scale = 1.0;
  for (const auto& r : roots) scale = std::max(scale, std::abs(r));

  // cluster coincident roots
  std::vector<CriticalPoint> out;
  std::vector<bool> used(roots.size(), false);
  for (size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    Complex sum = roots[i];
    int count = 1;
    used[i] = true;
    for (size_t j = i + 1; j < roots.size(); ++j)
      if (!used[j] && std::abs(roots[j] - roots[i]) < 1e-6 * scale) {
        sum += roots[j];
        ++count;
        used[j] = true;
      }
    CriticalPoint cp;
    cp.lambda = sum / double(count);
    if (!region.contains(cp.lambda)) continue;
    cp.value = eval_action.eval(cp.lambda);
    cp.second_deriv = eval_action.d2(cp.lambda);
    cp.real = std::abs(cp.lambda.imag()) < 1e-8 * (1.0 + std::abs(cp.lambda));
    cp.multiplicity = count;
    if (std::abs(cp.second_deriv) < 1e-6)
      cp.multiplicity = std::max(cp.multiplicity, 2);
    out.push_back(cp);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.lambda.real() != b.lambda.real()
               ? a.lambda.real() < b.lambda.real()
               : a.lambda.imag() < b.lambda.imag();
  });
  return out;
}

std::vector<CriticalPoint> critical_points_rational(
    const EinbeinAction& action, const Region& region) {
  const double L = length_scale(action);
  const double tol_res = 1e-10 * L * L;

  // numerator of Sbar' over prod (Lambda-beta)^2
  Poly dpoly;  // derivative of the polynomial part
  for (const auto& m : action.monomials) {
    Poly t(size_t(m.power), Complex{0.0, 0.0});
    t.back() = double(m.power) * m.coeff;
    padd(dpoly, t, Complex{1.0, 0.0});
  }
  Poly denom{Complex{1.0, 0.0}};
  for (const auto& p : action.poles) {
    Poly f{-p.location, Complex{1.0, 0.0}};
    denom = pmul(denom, pmul(f, f));
  }
  Poly num = pmul(dpoly, denom);
  for (size_t i = 0; i < action.poles.size(); ++i) {
    Poly others{Complex{1.0, 0.0}};
    for (size_t j = 0; j < action.poles.size(); ++j) {
      if (j == i) continue;
      Poly f{-action.poles[j].location, Complex{1.0, 0.0}};
      others = pmul(others, pmul(f, f));
    }
    padd(num, others, Complex{-action.poles[i].residue, 0.0});
  }

  auto roots = polynomial_roots(num);

  // clearing denominators manufactures a double root at every pole whose
  // residue vanishes; discard exactly those two copies
  for (const auto& p : action.poles) {
    if (std::abs(p.residue) >= tol_res) continue;
    for (int rep = 0; rep < 2 && !roots.empty(); ++rep) {
      size_t best = 0;
      for (size_t i = 1; i < roots.size(); ++i)
        if (std::abs(roots[i] - p.location) <
            std::abs(roots[best] - p.location))
          best = i;
      if (std::abs(roots[best] - p.location) < 1e-4 * (1.0 + std::abs(p.location)))
        roots.erase(roots.begin() + long(best));
    }
  }

  return classify_roots(pruned(action, tol_res), std::move(roots), region);
}

std::vector<CriticalPoint> critical_points_channel(const EinbeinAction& action,
                                                   const Region& region,
                                                   int seeds_per_cell) {
  const double spacing = action.channel->pole_spacing();
  const double guard = std::max(action.guard_radius, 1e-7 * spacing);

  bool any_seed = false;
  const int per_side = std::max(1, int(std::lround(std::sqrt(double(seeds_per_cell)))));
  const double h = spacing / per_side;
  std::vector<Complex> converged;
  for (double re = region.re_min + h / 2; re <= region.re_max; re += h)
    for (double im = region.im_min + h / 2; im <= region.im_max; im += h) {
      Complex lam{re, im};
      bool in_guard = false;
      for (long n = std::lround(re / spacing) - 1; n <= std::lround(re / spacing) + 1; ++n)
        if (std::abs(lam - Complex(double(n) * spacing, 0.0)) < guard)
          in_guard = true;
      if (in_guard) continue;
      any_seed = true;
      bool ok = false;
      for (int it = 0; it < 80; ++it) {
        Complex d1, d2;
        try {
          d1 = action.d1(lam);
          d2 = action.d2(lam);
        } catch (const PoleEvaluation&) {
          break;
        }
        if (std::abs(d2) < 1e-300) break;
        const Complex step = -d1 / d2;
        lam += step;
        if (std::abs(step) < 1e-13 * (1.0 + std::abs(lam))) {
          ok = true;
          break;
        }
        if (std::abs(lam) > 1e6 * (1.0 + spacing)) break;
      }
      if (!ok || !region.contains(lam)) continue;
      try {
        if (std::abs(action.d1(lam)) > 1e-8) continue;
      } catch (const PoleEvaluation&) {
        continue;
      }
      bool dup = false;
      for (const auto& c : converged)
        if (std::abs(c - lam) < 1e-6 * spacing) dup = true;
      if (!dup) converged.push_back(lam);
    }
  if (!any_seed)
    throw RegionContainsPole(
        "critical: region lies inside a pole guard disk");
  return classify_roots(action, std::move(converged), region);
}

int zone_threshold(const RefractionModel& model, const SourceSpec& source) {
  if (source.kind == SourceKind::PhaseSheet) return 3;
  switch (model.kind) {
    case ModelKind::LinearZ:
    case ModelKind::LinearXQuadraticZ:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

double CuspLaw::r2_of_r1(double r1) const {
  const double t = scale23 - std::pow(std::abs(r1), 2.0 / 3.0);
  if (t < 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::pow(t, 1.5);
}

std::vector<CriticalPoint> find_critical_points(const EinbeinAction& action,
                                                const Region& region,
                                                int seeds_per_cell) {
  if (action.channel)
    return critical_points_channel(action, region, seeds_per_cell);
  return critical_points_rational(action, region);
}

CausticClassification classify_point(const RefractionModel& model,
                                     const SourceSpec& source,
                                     const Eigen::VectorXd& x, double k0) {
  auto built = build_action(model, source, x, k0);
  const auto& action = built.action;
  const double L = length_scale(action);
  const double tol_res = 1e-10 * L * L;

  Region region;
  if (action.channel) {
    const double s = action.channel->pole_spacing();
    region = Region{-3.0 * s, 3.0 * s, -3.0 * s, 3.0 * s};
  } else {
    region = Region{-1e9, 1e9, -1e9, 1e9};
  }
  auto cps = find_critical_points(action, region);

  CausticClassification c;
  c.x = x;
  for (const auto& cp : cps)
    if (cp.real) c.real_critical_count += cp.multiplicity;

  for (const auto& p : action.poles)
    if (std::abs(p.residue) < tol_res) c.ghost_source = true;

  bool fold = false, cusp = false;
  for (const auto& cp : cps) {
    if (std::abs(cp.second_deriv) < 1e-6 && cp.multiplicity >= 2) fold = true;
    for (const auto& p : action.poles)
      if (std::abs(p.residue) < tol_res &&
          std::abs(cp.lambda - p.location) <
              1e-4 * (1.0 + std::abs(p.location)))
        cusp = true;
  }
  if (cusp) {
    c.zone = Zone::OnCaustic;
    c.type = CausticType::Cusp;
  } else if (fold) {
    c.zone = Zone::OnCaustic;
    c.type = CausticType::Fold;
  } else {
    const int thr = zone_threshold(model, source);
    const bool lit = c.real_critical_count >= thr ||
                     (c.ghost_source && c.real_critical_count >= 2);
    c.zone = lit ? Zone::Illuminated : Zone::Shadow;
  }
  return c;
}

CausticGrid caustic_locus(const RefractionModel& model,
                          const SourceSpec& source,
                          const std::vector<double>& xs,
                          const std::vector<double>& zs, double k0) {
  CausticGrid grid;
  auto count_at = [&](double x, double z) {
    Eigen::Vector2d p(x, z);
    return classify_point(model, source, p, k0).real_critical_count;
  };
  std::vector<std::vector<int>> counts(xs.size(),
                                       std::vector<int>(zs.size(), 0));
  for (size_t i = 0; i < xs.size(); ++i)
    for (size_t j = 0; j < zs.size(); ++j) {
      Eigen::Vector2d p(xs[i], zs[j]);
      auto c = classify_point(model, source, p, k0);
      counts[i][j] = c.real_critical_count;
      grid.points.push_back(std::move(c));
    }

  auto bisect = [&](Eigen::Vector2d a, Eigen::Vector2d b, int ca) {
    for (int it = 0; it < 64 && (b - a).norm() > 1e-9; ++it) {
      Eigen::Vector2d m = (a + b) / 2;
      if (count_at(m(0), m(1)) == ca)
        a = m;
      else
        b = m;
    }
    return Eigen::Vector2d((a + b) / 2);
  };
  for (size_t i = 0; i < xs.size(); ++i)
    for (size_t j = 0; j + 1 < zs.size(); ++j)
      if (counts[i][j] != counts[i][j + 1])
        grid.locus.push_back(bisect(Eigen::Vector2d(xs[i], zs[j]),
                                    Eigen::Vector2d(xs[i], zs[j + 1]),
                                    counts[i][j]));
  for (size_t j = 0; j < zs.size(); ++j)
    for (size_t i = 0; i + 1 < xs.size(); ++i)
      if (counts[i][j] != counts[i + 1][j])
        grid.locus.push_back(bisect(Eigen::Vector2d(xs[i], zs[j]),
                                    Eigen::Vector2d(xs[i + 1], zs[j]),
                                    counts[i][j]));
  return grid;
}

double closed_form_caustic(const RefractionModel& model,
                           const SourceSpec& source,
                           const Eigen::VectorXd& x) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (source.kind == SourceKind::PhaseSheet &&
      model.kind == ModelKind::Constant) {
    const double n0 = std::sqrt(model.n0sq);
    const double dx = x(0) - source.location(0);
    const double dz = x(1) - source.location(1);
    return std::pow(std::abs(dx), 2.0 / 3.0) +
           std::pow(std::abs(dz), 2.0 / 3.0) -
           std::pow(2.0 * n0 * source.mu, 2.0 / 3.0);
  }
  if (model.kind == ModelKind::LinearZ &&
      source.kind == SourceKind::PointDelta) {
    const double a = model.a;
    const double zbar = (x(1) + source.location(1)) / 2.0;
    const double c = model.n0sq - a * zbar;
    double rho = 0.0;
    for (int i = 0; i < x.size(); ++i)
      rho += (x(i) - source.location(i)) * (x(i) - source.location(i)) / 4.0;
    return c * c - a * a * rho;
  }
  return nan;
}

std::vector<GhostSourceLocus> ghost_source_locus(const RefractionModel& model,
                                                 const SourceSpec& source) {
  std::vector<GhostSourceLocus> out;
  if (source.kind == SourceKind::PhaseSheet) {
    out.push_back({Complex{0.0, 0.0}, "z = z'"});
    out.push_back({Complex{source.mu, 0.0}, "x = x'"});
    return out;
  }
  if (model.kind == ModelKind::QuadraticZ) {
    out.push_back({Complex{0.0, 0.0}, "x = x'"});
    const double s = pi / (2.0 * std::sqrt(model.alpha));
    for (long n = 1; n <= 3; ++n) {
      const char* d = (n % 2 == 0) ? "z = z'" : "z = -z'";
      out.push_back({Complex{double(n) * s, 0.0}, d});
      out.push_back({Complex{-double(n) * s, 0.0}, d});
    }
    return out;
  }
  out.push_back({Complex{0.0, 0.0}, "x = x'"});
  return out;
}

CuspLaw nearby_pole_cusp(double /*pole_center*/, double delta, double b) {
  if (delta <= 0.0 || b <= 0.0)
    throw NonPositiveParameters(
        "nearby_pole_cusp: separation and slope must be positive");
  CuspLaw law;
  law.scale23 = std::pow(2.0 * std::sqrt(b) * delta, 2.0 / 3.0);
  return law;
}

}  // namespace einbein
