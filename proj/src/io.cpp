#include "einbein/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace einbein {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

nlohmann::json cnum(Complex z) {
  return nlohmann::json::array({z.real(), z.imag()});
}

Complex cnum_from(const nlohmann::json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

const char* kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::Constant: return "constant";
    case ModelKind::LinearZ: return "linear_z";
    case ModelKind::QuadraticZ: return "quadratic_z";
    case ModelKind::LinearXQuadraticZ: return "linear_x_quadratic_z";
    case ModelKind::PolynomialZ: return "polynomial_z";
  }
  return "constant";
}

ModelKind kind_from_name(const std::string& s) {
  if (s == "constant") return ModelKind::Constant;
  if (s == "linear_z") return ModelKind::LinearZ;
  if (s == "quadratic_z") return ModelKind::QuadraticZ;
  if (s == "linear_x_quadratic_z") return ModelKind::LinearXQuadraticZ;
  if (s == "polynomial_z") return ModelKind::PolynomialZ;
  throw ConfigError("unknown model kind '" + s + "'");
}

const char* zone_name(Zone z) {
  switch (z) {
    case Zone::Illuminated: return "illuminated";
    case Zone::Shadow: return "shadow";
    case Zone::OnCaustic: return "caustic";
  }
  return "illuminated";
}

const char* caustic_name(CausticType t) {
  switch (t) {
    case CausticType::None: return "none";
    case CausticType::Fold: return "fold";
    case CausticType::Cusp: return "cusp";
  }
  return "none";
}

}  // namespace

nlohmann::json model_to_json(const RefractionModel& m) {
  nlohmann::json j;
  j["kind"] = kind_name(m.kind);
  j["dim"] = m.dim;
  j["n0sq"] = m.n0sq;
  if (m.kind == ModelKind::LinearZ) j["a"] = m.a;
  if (m.kind == ModelKind::QuadraticZ ||
      m.kind == ModelKind::LinearXQuadraticZ)
    j["alpha"] = m.alpha;
  if (m.kind == ModelKind::LinearXQuadraticZ) j["beta"] = m.beta;
  if (m.kind == ModelKind::PolynomialZ) j["poly"] = m.poly;
  return j;
}

RefractionModel model_from_json(const nlohmann::json& j) {
  RefractionModel m;
  try {
    m.kind = kind_from_name(j.at("kind").get<std::string>());
    m.dim = j.value("dim", 2);
    m.n0sq = j.value("n0sq", 1.0);
    m.a = j.value("a", 0.0);
    m.alpha = j.value("alpha", 0.0);
    m.beta = j.value("beta", 0.0);
    if (j.contains("poly")) m.poly = j["poly"].get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  try {
    m.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  return m;
}

nlohmann::json source_to_json(const SourceSpec& s) {
  nlohmann::json j;
  j["kind"] = s.kind == SourceKind::PointDelta ? "point" : "phase_sheet";
  j["location"] = std::vector<double>(s.location.data(),
                                      s.location.data() + s.location.size());
  if (s.kind == SourceKind::PhaseSheet) j["mu"] = s.mu;
  return j;
}

SourceSpec source_from_json(const nlohmann::json& j, int dim) {
  SourceSpec s;
  try {
    const std::string k = j.value("kind", std::string("point"));
    if (k == "point")
      s.kind = SourceKind::PointDelta;
    else if (k == "phase_sheet")
      s.kind = SourceKind::PhaseSheet;
    else
      throw ConfigError("unknown source kind '" + k + "'");
    std::vector<double> loc =
        j.value("location", std::vector<double>(size_t(dim), 0.0));
    s.location = Eigen::Map<Eigen::VectorXd>(loc.data(), long(loc.size()));
    s.mu = j.value("mu", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("source: ") + e.what());
  }
  try {
    s.validate(dim);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("source: ") + e.what());
  }
  return s;
}

nlohmann::json laurent_to_json(const LaurentSeries& s) {
  nlohmann::json j;
  j["pole"] = cnum(s.expansion_point);
  j["codim"] = s.codim;
  j["order"] = s.order;
  j["zprime"] = s.zprime;
  nlohmann::json coeffs = nlohmann::json::array();
  for (int m = -1; m <= s.order; ++m) {
    const GradedPoly& g = s.coeff(m);
    for (const auto& [grade, poly] : g.by_grade) {
      nlohmann::json entry;
      entry["m"] = m;
      entry["grade"] = grade;
      std::vector<std::string> cs;
      for (const auto& r : poly) cs.push_back(r.str());
      entry["poly_coeffs"] = cs;
      coeffs.push_back(entry);
    }
  }
  j["coefficients"] = coeffs;
  return j;
}

nlohmann::json pade_to_json(const RationalApproximant& a) {
  nlohmann::json j;
  j["N"] = a.N;
  j["M"] = a.M;
  nlohmann::json A = nlohmann::json::array(), B = nlohmann::json::array();
  for (Complex c : a.A) A.push_back(cnum(c));
  for (Complex c : a.B) B.push_back(cnum(c));
  j["A"] = A;
  j["B"] = B;
  j["fit_residual"] = a.fit_residual;
  nlohmann::json gp = nlohmann::json::array();
  for (const auto& g : a.ghost_poles) {
    nlohmann::json e;
    e["beta"] = cnum(g.beta);
    e["residue"] = cnum(g.residue);
    e["codim"] = g.codim;
    e["spurious"] = g.spurious;
    gp.push_back(e);
  }
  j["ghost_poles"] = gp;
  return j;
}

nlohmann::json monodromy_to_json(const MonodromyMatrix& m) {
  nlohmann::json j;
  j["loop"] = m.loop;
  j["labels"] = m.labels;
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < m.m.cols(); ++c) row.push_back(m.m(i, c));
    rows.push_back(row);
  }
  j["matrix"] = rows;
  j["residual"] = m.residual;
  return j;
}

nlohmann::json field_to_json(const std::vector<FieldSample>& samples) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : samples) {
    nlohmann::json e;
    e["x"] = std::vector<double>(s.x.data(), s.x.data() + s.x.size());
    e["phi"] = cnum(s.value);
    e["abs"] = std::abs(s.value);
    e["decomposition"] = s.decomposition;
    e["via_thimbles"] = s.via_thimbles;
    if (!s.diagnostic.empty()) e["diagnostic"] = s.diagnostic;
    arr.push_back(e);
  }
  return nlohmann::json{{"samples", arr}};
}

std::string field_csv(const RefractionModel& model, const SourceSpec& source,
                      const std::vector<FieldSample>& samples) {
  std::ostringstream out;
  out << "x,z,re_phi,im_phi,abs_phi,zone\n";
  for (const auto& s : samples) {
    const auto cls = classify_point(model, source, s.x, 1.0);
    out << fmt(s.x(0)) << ',' << fmt(s.x(s.x.size() - 1)) << ','
        << fmt(s.value.real()) << ',' << fmt(s.value.imag()) << ','
        << fmt(std::abs(s.value)) << ',' << zone_name(cls.zone) << '\n';
  }
  return out.str();
}

std::string caustic_csv(const CausticGrid& grid) {
  std::ostringstream out;
  out << "x,z,zone,type\n";
  for (const auto& p : grid.points)
    out << fmt(p.x(0)) << ',' << fmt(p.x(p.x.size() - 1)) << ','
        << zone_name(p.zone) << ',' << caustic_name(p.type) << '\n';
  return out.str();
}

std::string thimble_csv(const EinbeinAction& action,
                        const std::vector<Thimble>& thimbles) {
  std::ostringstream out;
  out << "thimble,tau,re_lambda,im_lambda,re_sbar,im_sbar\n";
  for (size_t t = 0; t < thimbles.size(); ++t) {
    const auto& path = thimbles[t].path;
    // arclength parameter, zero at the node nearest the critical point
    size_t c = 0;
    for (size_t i = 1; i < path.size(); ++i)
      if (std::abs(path[i] - thimbles[t].cp.lambda) <
          std::abs(path[c] - thimbles[t].cp.lambda))
        c = i;
    std::vector<double> tau(path.size(), 0.0);
    for (size_t i = c + 1; i < path.size(); ++i)
      tau[i] = tau[i - 1] + std::abs(path[i] - path[i - 1]);
    for (size_t i = c; i-- > 0;)
      tau[i] = tau[i + 1] - std::abs(path[i + 1] - path[i]);
    for (size_t i = 0; i < path.size(); ++i) {
      const Complex s = action.eval(path[i]);
      out << t << ',' << fmt(tau[i]) << ',' << fmt(path[i].real()) << ','
          << fmt(path[i].imag()) << ',' << fmt(s.real()) << ','
          << fmt(s.imag()) << '\n';
    }
  }
  return out.str();
}

std::string arrivals_csv(
    const std::vector<std::pair<Eigen::VectorXd, std::vector<Arrival>>>& rows) {
  std::ostringstream out;
  out << "x,z,t,smear,thimble\n";
  for (const auto& [x, arr] : rows)
    for (const auto& a : arr)
      out << fmt(x(0)) << ',' << fmt(x(x.size() - 1)) << ',' << fmt(a.t) << ','
          << fmt(a.smear) << ',' << a.thimble << '\n';
  return out.str();
}

namespace {

/// Simple blue -> yellow color ramp on [0, 1].
std::string ramp(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = int(std::lround(20.0 + 235.0 * t));
  const int g = int(std::lround(30.0 + 200.0 * t));
  const int b = int(std::lround(90.0 + 120.0 * (1.0 - t)));
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::string field_svg(const std::vector<FieldSample>& samples,
                      const std::vector<double>& xs,
                      const std::vector<double>& zs,
                      const std::vector<Eigen::Vector2d>& caustic) {
  const size_t nx = xs.size(), nz = zs.size();
  const double W = 640.0, H = 480.0, m = 40.0;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\">\n";
  if (nx >= 2 && nz >= 2 && samples.size() == nx * nz) {
    const double x0 = xs.front(), x1 = xs.back();
    const double z0 = zs.front(), z1 = zs.back();
    const auto px = [&](double x) {
      return m + (x - x0) / (x1 - x0) * (W - 2.0 * m);
    };
    const auto pz = [&](double z) {
      return H - m - (z - z0) / (z1 - z0) * (H - 2.0 * m);
    };
    double lo = 1e300, hi = -1e300;
    for (const auto& s : samples) {
      const double v = std::log10(std::abs(s.value) + 1e-300);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    lo = std::max(lo, hi - 6.0);  // clip 6 decades below the peak
    const double cw = (W - 2.0 * m) / double(nx - 1);
    const double ch = (H - 2.0 * m) / double(nz - 1);
    for (size_t iz = 0; iz < nz; ++iz)
      for (size_t ix = 0; ix < nx; ++ix) {
        const auto& s = samples[iz * nx + ix];
        const double v = std::log10(std::abs(s.value) + 1e-300);
        const double t = hi > lo ? (v - lo) / (hi - lo) : 0.5;
        out << "<rect x=\"" << fmt(px(xs[ix]) - cw / 2.0) << "\" y=\""
            << fmt(pz(zs[iz]) - ch / 2.0) << "\" width=\"" << fmt(cw)
            << "\" height=\"" << fmt(ch) << "\" fill=\"" << ramp(t)
            << "\"/>\n";
      }
    for (const auto& p : caustic)
      out << "<circle cx=\"" << fmt(px(p(0))) << "\" cy=\"" << fmt(pz(p(1)))
          << "\" r=\"1.6\" fill=\"#d01010\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string thimble_svg(const EinbeinAction& action,
                        const std::vector<Thimble>& thimbles) {
  double lo_r = -1.0, hi_r = 1.0, lo_i = -1.0, hi_i = 1.0;
  for (const auto& t : thimbles)
    for (Complex z : t.path) {
      lo_r = std::min(lo_r, z.real());
      hi_r = std::max(hi_r, z.real());
      lo_i = std::min(lo_i, z.imag());
      hi_i = std::max(hi_i, z.imag());
    }
  const double W = 640.0, H = 480.0, m = 40.0;
  const auto px = [&](double x) {
    return m + (x - lo_r) / (hi_r - lo_r) * (W - 2.0 * m);
  };
  const auto py = [&](double y) {
    return H - m - (y - lo_i) / (hi_i - lo_i) * (H - 2.0 * m);
  };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\">\n";
  const char* colors[] = {"#1050c0", "#10a050", "#c07010", "#a010a0"};
  for (size_t t = 0; t < thimbles.size(); ++t) {
    out << "<polyline fill=\"none\" stroke=\"" << colors[t % 4]
        << "\" stroke-width=\"1.4\" points=\"";
    for (Complex z : thimbles[t].path)
      out << fmt(px(z.real())) << ',' << fmt(py(z.imag())) << ' ';
    out << "\"/>\n";
    const Complex cp = thimbles[t].cp.lambda;
    out << "<circle cx=\"" << fmt(px(cp.real())) << "\" cy=\""
        << fmt(py(cp.imag())) << "\" r=\"3\" fill=\"#000\"/>\n";
  }
  for (const auto& p : action.poles) {
    const double cx = px(p.location.real()), cy = py(p.location.imag());
    out << "<path d=\"M" << fmt(cx - 4) << ' ' << fmt(cy - 4) << " L"
        << fmt(cx + 4) << ' ' << fmt(cy + 4) << " M" << fmt(cx - 4) << ' '
        << fmt(cy + 4) << " L" << fmt(cx + 4) << ' ' << fmt(cy - 4)
        << "\" stroke=\"#d01010\" stroke-width=\"1.6\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace einbein
