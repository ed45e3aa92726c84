#include "einbein/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "einbein/quadrature.hpp"

namespace einbein {

namespace {

double wrap_angle(double a) {
  while (a > pi) a -= 2.0 * pi;
  while (a <= -pi) a += 2.0 * pi;
  return a;
}

/// sin of the angular distance of an infinity ray into its convergence
/// wedge: positive iff Im(mu_inf Lambda^m) > 0 along the ray.
double wedge_margin(const EinbeinAction& a, double lift) {
  return std::sin(double(a.infinity_order) * lift + std::arg(a.leading_coeff));
}

/// sin of the angular distance of a pole approach into its convergence
/// sector: positive iff exp(i k0 rho / (Lambda - p)) decays along the
/// approach.
double sector_margin(const EinbeinAction& a, int pid, double lift) {
  const Complex rho = a.poles.at(size_t(pid)).residue;
  return std::sin(std::arg(rho) - lift);
}

/// True when a half-integer prefactor branch point sits at the pole.
bool pole_is_branch_point(const Wavefunction& wf, Complex loc) {
  for (const auto& f : wf.prefactor.factors) {
    if (std::lround(2.0 * f.exponent) % 2 == 0) continue;
    if (std::abs(f.location - loc) < 1e-12 * (1.0 + std::abs(loc))) return true;
  }
  return false;
}

/// Number of times a point rotating from lift a to lift b around a branch
/// point crosses its upward vertical cut (direction pi/2 mod 2 pi).
long cut_passages(double a, double b) {
  const double lo = (std::min(a, b) - pi / 2.0) / (2.0 * pi);
  const double hi = (std::max(a, b) - pi / 2.0) / (2.0 * pi);
  return std::lround(std::floor(hi)) - std::lround(std::floor(lo));
}

struct Radii {
  double r_arc;   // arc radius around the pole
  double r_out;   // cutoff radius of infinity rays
};

Radii contour_radii(const Wavefunction& wf, int pid) {
  const auto& act = wf.action;
  const double m = double(act.infinity_order);
  const double mu = std::abs(act.leading_coeff);
  const double rho = std::abs(act.poles.at(size_t(pid)).residue);
  double r_arc = 1.0;
  if (mu > 0.0 && rho > 0.0) r_arc = std::pow(rho / (m * mu), 1.0 / (m + 1.0));
  // keep winding arcs clear of the other finite poles
  const Complex loc = act.poles[size_t(pid)].location;
  for (const auto& p : act.poles) {
    const double d = std::abs(p.location - loc);
    if (d > 1e-12) r_arc = std::min(r_arc, 0.45 * d);
  }
  double r_out = 2.0 * r_arc;
  if (mu > 0.0)
    r_out = std::max(r_out, std::pow(38.0 / (wf.k0 * mu), 1.0 / m));
  return {r_arc, r_out};
}

/// Radius at which the pole approach leg may stop: the integrand there is
/// below 1e-16 of its scale.
double approach_cutoff(const Wavefunction& wf, int pid, double margin,
                       double r_arc) {
  const double rho = std::abs(wf.action.poles.at(size_t(pid)).residue);
  double eps = wf.k0 * rho * margin / 38.0;
  return std::min(eps, 0.3 * r_arc);
}

void append_node(std::vector<Complex>& path, Complex z) {
  if (!path.empty() && std::abs(path.back() - z) < 1e-14) return;
  path.push_back(z);
}

/// Chord discretization of the arc center + r e^{i theta}, theta from a to b
/// (continuous lifts; |b - a| may exceed 2 pi for winding arcs).
void append_arc(std::vector<Complex>& path, Complex center, double r, double a,
                double b) {
  const int n = std::max(6, int(std::ceil(std::abs(b - a) / 0.12)));
  for (int j = 0; j <= n; ++j) {
    const double t = a + (b - a) * double(j) / double(n);
    append_node(path, center + r * std::exp(Complex(0.0, t)));
  }
}

void check_end(const Wavefunction& wf, const ContourEnd& e,
               const std::string& label) {
  if (e.kind == ContourEnd::Kind::Infinity) {
    if (wedge_margin(wf.action, e.lift) < 0.05)
      throw BasisNotClosed("contour '" + label +
                           "': infinity ray outside a convergence wedge");
  } else {
    if (e.pole_id < 0 || size_t(e.pole_id) >= wf.action.poles.size())
      throw BasisNotClosed("contour '" + label + "': unknown pole id");
    if (sector_margin(wf.action, e.pole_id, e.lift) < 0.05)
      throw BasisNotClosed("contour '" + label +
                           "': pole approach outside the convergence sector");
  }
}

}  // namespace

ContourClass BasisContour::word() const {
  ContourClass cc;
  char buf[64];
  const auto push_winds = [&](int pid, long n) {
    for (long j = 0; j < std::labs(n); ++j) {
      std::snprintf(buf, sizeof(buf), "wind(%d,%+d,%d)", pid, n > 0 ? 1 : -1,
                    start_sheet);
      cc.word.push_back(buf);
    }
  };
  const auto end_token = [&](const ContourEnd& e) {
    if (e.kind == ContourEnd::Kind::Pole)
      std::snprintf(buf, sizeof(buf), "pole(%d)", e.pole_id);
    else
      std::snprintf(buf, sizeof(buf), "wedge@%.3f", wrap_angle(e.lift));
    cc.word.push_back(buf);
  };
  for (size_t i = 0; i < ends.size(); ++i) {
    const ContourEnd& e = ends[i];
    if (e.kind == ContourEnd::Kind::Pole && i + 1 < ends.size() &&
        ends[i + 1].kind == ContourEnd::Kind::Pole &&
        ends[i + 1].pole_id == e.pole_id) {
      // pass-through or closed loop: one token plus the net relative winding,
      // which is invariant under transport (the in- and out-windings cancel)
      end_token(e);
      push_winds(e.pole_id,
                 std::lround((ends[i + 1].lift - e.lift) / (2.0 * pi)));
      ++i;
      continue;
    }
    long nw = std::lround((e.lift - wrap_angle(e.lift)) / (2.0 * pi));
    const int pid = e.kind == ContourEnd::Kind::Pole ? e.pole_id : 0;
    if (i == 0) {
      // a departing end winds with the opposite orientation of an arrival
      end_token(e);
      push_winds(pid, -nw);
    } else {
      push_winds(pid, nw);
      end_token(e);
    }
  }
  cc.reduce();
  return cc;
}

std::vector<BasisContour> transport_endpoints(
    const Wavefunction& wf, const std::vector<BasisContour>& basis,
    const ParameterLoop& loop) {
  const double m = double(wf.action.infinity_order);
  // accumulate the rotation over the discretized loop (the increments are
  // uniform for a pure coefficient-argument loop)
  double d_inf = 0.0, d_pole = 0.0;
  for (int s = 0; s < loop.steps; ++s) {
    const double dth = loop.delta_arg / double(loop.steps);
    if (loop.kind == ParameterLoop::Kind::InfinityCoeff) d_inf += -dth / m;
    if (loop.kind == ParameterLoop::Kind::PoleResidue) d_pole += dth;
  }
  std::vector<BasisContour> out = basis;
  for (auto& c : out) {
    bool first = true;
    for (auto& e : c.ends) {
      double shift = 0.0;
      if (e.kind == ContourEnd::Kind::Infinity &&
          loop.kind == ParameterLoop::Kind::InfinityCoeff)
        shift = d_inf;
      if (e.kind == ContourEnd::Kind::Pole &&
          loop.kind == ParameterLoop::Kind::PoleResidue &&
          e.pole_id == loop.pole_id)
        shift = d_pole;
      if (first && shift != 0.0) {
        // continue the starting branch along the motion of the first
        // endpoint: every passage over an upward cut toggles the sheet
        long toggles = 0;
        if (e.kind == ContourEnd::Kind::Pole) {
          const Complex loc = wf.action.poles[size_t(e.pole_id)].location;
          if (pole_is_branch_point(wf, loc))
            toggles = cut_passages(e.lift, e.lift + shift);
        } else {
          toggles = cut_passages(e.lift, e.lift + shift) *
                    wf.prefactor.half_integer_count();
        }
        if (toggles % 2 != 0) c.start_sheet = 1 - c.start_sheet;
      }
      e.lift += shift;
      first = false;
    }
  }
  return out;
}

std::vector<Complex> realize_contour(const Wavefunction& wf,
                                     const BasisContour& contour) {
  if (contour.ends.size() < 2)
    throw BasisNotClosed("contour '" + contour.label + "': fewer than 2 ends");
  for (const auto& e : contour.ends) check_end(wf, e, contour.label);

  std::vector<Complex> path;
  for (size_t i = 0; i + 1 < contour.ends.size(); ++i) {
    const ContourEnd& e1 = contour.ends[i];
    const ContourEnd& e2 = contour.ends[i + 1];
    const bool p1 = e1.kind == ContourEnd::Kind::Pole;
    const bool p2 = e2.kind == ContourEnd::Kind::Pole;
    if (p1 && p2) {
      if (e1.pole_id != e2.pole_id)
        throw BasisNotClosed("contour '" + contour.label +
                             "': consecutive ends at different poles");
      if (std::abs(e1.lift - e2.lift) < 1e-12) continue;  // pass-through
      const Complex loc = wf.action.poles[size_t(e1.pole_id)].location;
      const Radii rr = contour_radii(wf, e1.pole_id);
      const double m1 = sector_margin(wf.action, e1.pole_id, e1.lift);
      const double m2 = sector_margin(wf.action, e2.pole_id, e2.lift);
      append_node(path, loc + approach_cutoff(wf, e1.pole_id, m1, rr.r_arc) *
                             std::exp(Complex(0.0, e1.lift)));
      append_node(path, loc + rr.r_arc * std::exp(Complex(0.0, e1.lift)));
      append_arc(path, loc, rr.r_arc, e1.lift, e2.lift);
      append_node(path, loc + approach_cutoff(wf, e2.pole_id, m2, rr.r_arc) *
                             std::exp(Complex(0.0, e2.lift)));
    } else if (p1 || p2) {
      const ContourEnd& pe = p1 ? e1 : e2;
      const ContourEnd& ie = p1 ? e2 : e1;
      const Complex loc = wf.action.poles[size_t(pe.pole_id)].location;
      const Radii rr = contour_radii(wf, pe.pole_id);
      const double mp = sector_margin(wf.action, pe.pole_id, pe.lift);
      std::vector<Complex> leg;
      append_node(leg, loc + approach_cutoff(wf, pe.pole_id, mp, rr.r_arc) *
                            std::exp(Complex(0.0, pe.lift)));
      append_node(leg, loc + rr.r_arc * std::exp(Complex(0.0, pe.lift)));
      append_arc(leg, loc, rr.r_arc, pe.lift, ie.lift);
      append_node(leg, rr.r_out * std::exp(Complex(0.0, ie.lift)));
      if (p1) {
        for (Complex z : leg) append_node(path, z);
      } else {
        for (size_t j = leg.size(); j-- > 0;) append_node(path, leg[j]);
      }
    } else {
      // wedge-to-wedge: one arc around the origin outside all finite poles
      if (wf.action.poles.empty())
        throw BasisNotClosed("contour '" + contour.label +
                             "': wedge-to-wedge contour needs a finite pole");
      double far = 0.0;
      for (const auto& p : wf.action.poles)
        far = std::max(far, std::abs(p.location));
      const Radii rr = contour_radii(wf, 0);
      const double r = std::max(rr.r_arc, 1.6 * far + 0.2);
      append_node(path, rr.r_out * std::exp(Complex(0.0, e1.lift)));
      append_node(path, r * std::exp(Complex(0.0, e1.lift)));
      append_arc(path, Complex{0.0, 0.0}, r, e1.lift, e2.lift);
      append_node(path, rr.r_out * std::exp(Complex(0.0, e2.lift)));
    }
  }
  if (path.size() < 2)
    throw BasisNotClosed("contour '" + contour.label +
                         "': degenerate realization");
  return path;
}

MonodromyMatrix transport(const RefractionModel& model,
                          const SourceSpec& source, const Eigen::VectorXd& x,
                          const std::vector<BasisContour>& basis,
                          const ParameterLoop& loop,
                          std::vector<double> k0s) {
  if (basis.empty()) throw BasisNotClosed("empty contour basis");
  if (k0s.empty()) k0s = {0.7, 0.95, 1.3, 1.7};
  const int n = int(basis.size());
  const int K = int(k0s.size());

  Eigen::MatrixXcd B(K, n), V(K, n);
  for (int k = 0; k < K; ++k) {
    const Wavefunction wf = build_wavefunction(model, source, x, k0s[size_t(k)]);
    const auto moved = transport_endpoints(wf, basis, loop);
    for (int j = 0; j < n; ++j) {
      B(k, j) = integrate_path_continued(wf, realize_contour(wf, basis[size_t(j)]),
                                         basis[size_t(j)].start_sheet);
      V(k, j) = integrate_path_continued(wf, realize_contour(wf, moved[size_t(j)]),
                                         moved[size_t(j)].start_sheet);
    }
  }

  const double scale = B.cwiseAbs().maxCoeff();
  if (!(scale > 0.0))
    throw BasisNotClosed("all basis integrals vanish");

  // stack Re/Im so the integer coefficients are fitted over the reals
  Eigen::MatrixXd A(2 * K, n);
  for (int k = 0; k < K; ++k)
    for (int j = 0; j < n; ++j) {
      A(2 * k, j) = B(k, j).real();
      A(2 * k + 1, j) = B(k, j).imag();
    }

  MonodromyMatrix result;
  result.m.resize(n, n);
  result.loop = loop.name;
  for (const auto& c : basis) result.labels.push_back(c.label);

  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd v(2 * K);
    for (int k = 0; k < K; ++k) {
      v(2 * k) = V(k, i).real();
      v(2 * k + 1) = V(k, i).imag();
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(v);
    Eigen::VectorXd ci(n);
    for (int j = 0; j < n; ++j) {
      ci(j) = std::round(c(j));
      if (std::abs(c(j) - ci(j)) > 0.2)
        throw IntegerRoundingFailure(
            "row '" + basis[size_t(i)].label + "': coefficient " +
            std::to_string(c(j)) + " is not close to an integer");
      result.m(i, j) = int(ci(j));
    }
    const double resid = (A * ci - v).norm() /
                         std::max(v.norm(), 1e-3 * scale);
    worst = std::max(worst, resid);
    if (resid > 1e-6)
      throw BasisNotClosed("row '" + basis[size_t(i)].label +
                           "': transported contour is not an integer " +
                           "combination of the basis (residual " +
                           std::to_string(resid) + ")");
  }
  result.residual = worst;

  const double det = result.m.cast<double>().determinant();
  if (std::abs(std::abs(det) - 1.0) > 1e-9)
    throw BasisNotClosed("monodromy matrix is not unimodular");
  return result;
}

std::vector<BasisContour> monodromy_basis(const RefractionModel& model,
                                          const SourceSpec& source,
                                          const Eigen::VectorXd& x) {
  const Wavefunction wf = build_wavefunction(model, source, x, 1.0);
  // locate the pole at Lambda = 0 (present for the whole catalog)
  int p0 = -1, pg = -1;
  for (size_t i = 0; i < wf.action.poles.size(); ++i) {
    if (std::abs(wf.action.poles[i].location) < 1e-12)
      p0 = int(i);
    else
      pg = int(i);
  }
  if (p0 < 0) throw BasisNotClosed("no finite pole at Lambda = 0");

  std::vector<BasisContour> basis;
  if (source.kind == SourceKind::PhaseSheet && pg >= 0) {
    // sheet source inside the cusp: direct contour plus the contour running
    // through the ghost pole between the two halves of the wedge
    basis.push_back({"Gamma_A",
                     {ContourEnd::pole(p0, -pi / 2.0),
                      ContourEnd::infinity(pi / 2.0)},
                     0});
    basis.push_back({"Gamma_G",
                     {ContourEnd::infinity(2.6),
                      ContourEnd::pole(pg, -pi / 2.0),
                      ContourEnd::pole(pg, -pi / 2.0),
                      ContourEnd::infinity(0.5)},
                     0});
    return basis;
  }

  switch (model.kind) {
    case ModelKind::Constant: {
      basis.push_back({"Gamma_A",
                       {ContourEnd::pole(p0, -pi / 2.0),
                        ContourEnd::infinity(pi / 2.0)},
                       0});
      basis.push_back({"Gamma_D",
                       {ContourEnd::pole(p0, -pi / 2.0),
                        ContourEnd::pole(p0, -pi / 2.0 + 2.0 * pi)},
                       0});
      return basis;
    }
    case ModelKind::LinearZ: {
      // wedge centers for arg(mu_inf) = pi, m = 3
      const double w0 = pi / 2.0;
      const double w1 = 7.0 * pi / 6.0;
      const double w2 = -pi / 6.0;
      basis.push_back({"Gamma_A",
                       {ContourEnd::pole(p0, -pi / 2.0),
                        ContourEnd::infinity(w0)},
                       0});
      basis.push_back({"Gamma_B",
                       {ContourEnd::infinity(w0), ContourEnd::infinity(w2)},
                       0});
      basis.push_back({"Gamma_C",
                       {ContourEnd::infinity(w0), ContourEnd::infinity(w1)},
                       0});
      basis.push_back({"Gamma_D",
                       {ContourEnd::pole(p0, -pi / 2.0),
                        ContourEnd::pole(p0, -pi / 2.0 + 2.0 * pi)},
                       0});
      return basis;
    }
    default:
      throw BasisNotClosed("no standard monodromy basis for this model");
  }
}

}  // namespace einbein
