// Command-line surface for the einbein Helmholtz solver: reproducible
// experiments driven by a JSON config, emitting CSV/JSON data of record and
// schematic SVG figures.  Exit codes: 0 success, 2 config error, 3 numerical
// failure.
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "einbein/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace einbein;

namespace {

struct GridSpec {
  double x_min = -1.0, x_max = 1.0;
  double z_min = 0.1, z_max = 2.0;
  int nx = 41, nz = 41;
};

struct RunConfig {
  RefractionModel model;
  SourceSpec source;
  std::vector<double> k0 = {20.0};
  GridSpec grid;
  fs::path out = "out";
};

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse: ") + e.what());
  }
  RunConfig c;
  try {
    c.model = model_from_json(j.at("model"));
    c.source = source_from_json(j.value("source", json::object()), c.model.dim);
    if (j.contains("k0")) {
      if (j["k0"].is_array())
        c.k0 = j["k0"].get<std::vector<double>>();
      else
        c.k0 = {j["k0"].get<double>()};
    }
    if (j.contains("grid")) {
      const json& g = j["grid"];
      c.grid.x_min = g.value("x_min", c.grid.x_min);
      c.grid.x_max = g.value("x_max", c.grid.x_max);
      c.grid.z_min = g.value("z_min", c.grid.z_min);
      c.grid.z_max = g.value("z_max", c.grid.z_max);
      c.grid.nx = g.value("nx", c.grid.nx);
      c.grid.nz = g.value("nz", c.grid.nz);
    }
    if (j.contains("out")) c.out = j["out"].get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (c.grid.nx < 2 || c.grid.nz < 2)
    throw ConfigError("grid resolution must be >= 2 per axis");
  if (!(c.grid.x_max > c.grid.x_min) || !(c.grid.z_max > c.grid.z_min) ||
      !std::isfinite(c.grid.x_max - c.grid.x_min) ||
      !std::isfinite(c.grid.z_max - c.grid.z_min))
    throw ConfigError("grid ranges must be finite and increasing");
  if (c.k0.empty()) throw ConfigError("k0 list must be non-empty");
  return c;
}

std::vector<double> axis(double lo, double hi, int n) {
  std::vector<double> v(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    v[size_t(i)] = lo + (hi - lo) * double(i) / double(n - 1);
  return v;
}

void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

std::string tag(double k0) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "k0_%g", k0);
  return buf;
}

int cmd_field(const RunConfig& c) {
  const auto xs = axis(c.grid.x_min, c.grid.x_max, c.grid.nx);
  const auto zs = axis(c.grid.z_min, c.grid.z_max, c.grid.nz);
  for (double k0 : c.k0) {
    const auto samples = field_grid(c.model, c.source, xs, zs, k0);
    std::ostringstream log;
    for (const auto& s : samples)
      if (!s.diagnostic.empty())
        log << s.x(0) << ',' << s.x(s.x.size() - 1) << ": " << s.diagnostic
            << '\n';
    const auto locus = caustic_locus(c.model, c.source, xs, zs, k0).locus;
    write_file(c.out / ("field_" + tag(k0) + ".csv"),
               field_csv(c.model, c.source, samples));
    write_file(c.out / ("field_" + tag(k0) + ".json"),
               field_to_json(samples).dump(1) + "\n");
    write_file(c.out / ("field_" + tag(k0) + ".svg"),
               field_svg(samples, xs, zs, locus));
    write_file(c.out / ("field_" + tag(k0) + ".log"), log.str());
  }
  return 0;
}

int cmd_thimbles(const RunConfig& c, double px, double pz) {
  Eigen::VectorXd x(2);
  x << px, pz;
  for (double k0 : c.k0) {
    const auto wf = build_wavefunction(c.model, c.source, x, k0);
    const auto cps = find_critical_points(wf.action, {-1e6, 1e6, -1e6, 1e6});
    std::vector<Thimble> thimbles;
    for (const auto& cp : cps) thimbles.push_back(trace_thimble(wf.action, cp));
    write_file(c.out / ("thimbles_" + tag(k0) + ".csv"),
               thimble_csv(wf.action, thimbles));
    write_file(c.out / ("thimbles_" + tag(k0) + ".svg"),
               thimble_svg(wf.action, thimbles));
  }
  return 0;
}

int cmd_caustics(const RunConfig& c) {
  const auto xs = axis(c.grid.x_min, c.grid.x_max, c.grid.nx);
  const auto zs = axis(c.grid.z_min, c.grid.z_max, c.grid.nz);
  const auto grid = caustic_locus(c.model, c.source, xs, zs, c.k0.front());
  write_file(c.out / "caustics.csv", caustic_csv(grid));
  // closed-form overlay: signed indicator on the same grid
  std::ostringstream cf;
  cf << "x,z,indicator\n";
  for (double z : zs)
    for (double xv : xs) {
      Eigen::VectorXd p(2);
      p << xv, z;
      cf << xv << ',' << z << ','
         << closed_form_caustic(c.model, c.source, p) << '\n';
    }
  write_file(c.out / "caustics_closed_form.csv", cf.str());
  return 0;
}

int cmd_laurent(const RunConfig& c, int order) {
  std::vector<double> n2poly;
  switch (c.model.kind) {
    case ModelKind::Constant: n2poly = {c.model.n0sq}; break;
    case ModelKind::LinearZ: n2poly = {c.model.n0sq, -c.model.a}; break;
    case ModelKind::QuadraticZ:
      n2poly = {c.model.n0sq, 0.0, -c.model.alpha};
      break;
    case ModelKind::PolynomialZ: n2poly = c.model.poly; break;
    default:
      throw ConfigError("laurent: model must have polynomial n^2(z)");
  }
  const double zp = c.source.location(c.source.location.size() - 1);
  const double xts = c.source.location.size() > 1
                         ? c.source.location(0) * c.source.location(0)
                         : 0.0;
  const auto series = laurent_point_source(n2poly, zp, xts, c.k0.front(),
                                           order, c.model.dim);
  write_file(c.out / "laurent.json", laurent_to_json(series).dump(1) + "\n");
  return 0;
}

int cmd_pade(const RunConfig& c, int N, int M, double z) {
  std::vector<double> n2poly;
  switch (c.model.kind) {
    case ModelKind::Constant: n2poly = {c.model.n0sq}; break;
    case ModelKind::LinearZ: n2poly = {c.model.n0sq, -c.model.a}; break;
    case ModelKind::QuadraticZ:
      n2poly = {c.model.n0sq, 0.0, -c.model.alpha};
      break;
    case ModelKind::PolynomialZ: n2poly = c.model.poly; break;
    default:
      throw ConfigError("pade: model must have polynomial n^2(z)");
  }
  const double zp = c.source.location(c.source.location.size() - 1);
  const auto series = laurent_point_source(n2poly, zp, 1.0, c.k0.front(),
                                           N + M + 1, c.model.dim);
  const auto fit = fit_rational(series, z, N, M);
  write_file(c.out / "pade.json", pade_to_json(fit).dump(1) + "\n");
  return 0;
}

int cmd_monodromy(const RunConfig& c, const std::string& loop_name,
                  double px, double pz) {
  Eigen::VectorXd x(2);
  x << px, pz;
  if (c.model.dim == 3) {
    x.resize(3);
    x << px, 0.0, pz;
  }
  const auto basis = monodromy_basis(c.model, c.source, x);
  ParameterLoop loop;
  if (loop_name == "coefficient")
    loop = ParameterLoop::infinity_coeff(
        c.model.kind == ModelKind::LinearZ ? 2.0 * pi : -2.0 * pi);
  else if (loop_name == "coordinate")
    loop = ParameterLoop::pole_residue(0, -2.0 * pi);
  else if (loop_name == "ghost")
    loop = ParameterLoop::pole_residue(1, 2.0 * pi);
  else if (loop_name == "trivial")
    loop = ParameterLoop::trivial();
  else
    throw ConfigError("unknown loop '" + loop_name + "'");
  const auto M = transport(c.model, c.source, x, basis, loop);
  json j = monodromy_to_json(M);
  // transported-contour snapshots: realized polylines at the first k0
  const auto wf = build_wavefunction(c.model, c.source, x, 1.0);
  const auto moved = transport_endpoints(wf, basis, loop);
  json snaps = json::array();
  for (const auto& bc : moved) {
    json s;
    s["label"] = bc.label;
    json pts = json::array();
    for (Complex zv : realize_contour(wf, bc))
      pts.push_back(json::array({zv.real(), zv.imag()}));
    s["path"] = pts;
    snaps.push_back(s);
  }
  j["transported"] = snaps;
  write_file(c.out / ("monodromy_" + loop_name + ".json"), j.dump(1) + "\n");
  return 0;
}

int cmd_arrivals(const RunConfig& c, double c0) {
  const auto xs = axis(c.grid.x_min, c.grid.x_max, c.grid.nx);
  const auto zs = axis(c.grid.z_min, c.grid.z_max, c.grid.nz);
  std::vector<std::pair<Eigen::VectorXd, std::vector<Arrival>>> rows;
  for (double z : zs)
    for (double xv : xs) {
      Eigen::VectorXd x(2);
      x << xv, z;
      if (c.source.kind == SourceKind::PhaseSheet && std::abs(xv) < 1e-12) {
        rows.push_back(
            {x, cusp_axis_arrivals(c.model.n0sq, c.source.mu, z, c0)});
        continue;
      }
      const auto wf = build_wavefunction(c.model, c.source, x, c.k0.front());
      const auto cps = find_critical_points(wf.action, {-1e6, 1e6, -1e6, 1e6});
      std::vector<Thimble> thimbles;
      for (const auto& cp : cps)
        thimbles.push_back(trace_thimble(wf.action, cp));
      const auto coeff =
          decompose_real_axis(thimbles, c.model, c.source, x, c.k0.front());
      rows.push_back({x, arrival_times(thimbles, coeff, c0)});
    }
  write_file(c.out / "arrivals.csv", arrivals_csv(rows));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "einbein: Helmholtz fields from complex proper-time contour integrals\n"
      "exit codes: 0 success, 2 config error, 3 numerical failure"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::vector<double> k0_override;
  std::vector<int> grid_override;
  app.add_option("--config", config_path, "JSON run configuration")
      ->required();
  app.add_option("--out", out_override, "output directory override");
  app.add_option("--k0", k0_override, "wavenumber list override");
  app.add_option("--grid", grid_override, "grid resolution override NX,NZ")
      ->expected(2);

  auto* sf = app.add_subcommand("field", "field grid: CSV/JSON + heat map");
  auto* st = app.add_subcommand("thimbles", "thimble polylines + contour SVG");
  double px = 0.0, pz = 1.0;
  st->add_option("--x", px, "field point x");
  st->add_option("--z", pz, "field point z");
  auto* sc = app.add_subcommand("caustics", "zone grid + closed-form overlay");
  auto* sl = app.add_subcommand("laurent", "series coefficient table");
  int order = 6;
  sl->add_option("--order", order, "series order");
  auto* sp = app.add_subcommand("pade", "rational approximant + ghost poles");
  int N = 6, M = 6;
  double pade_z = 1.0;
  sp->add_option("--N", N, "numerator degree");
  sp->add_option("--M", M, "denominator degree");
  sp->add_option("--z", pade_z, "evaluation height z");
  auto* sm = app.add_subcommand("monodromy", "transport matrix + snapshots");
  std::string loop_name = "coefficient";
  double mx = 0.4, mz = 0.9;
  sm->add_option("--loop", loop_name,
                 "loop: coefficient | coordinate | ghost | trivial");
  sm->add_option("--x", mx, "field point x");
  sm->add_option("--z", mz, "field point z");
  auto* sa = app.add_subcommand("arrivals", "arrival-time table");
  double c0 = 1.0;
  sa->add_option("--c0", c0, "reference wave speed");

  CLI11_PARSE(app, argc, argv);

  RunConfig cfg;
  try {
    cfg = load_config(config_path);
    if (!out_override.empty()) cfg.out = out_override;
    if (!k0_override.empty()) cfg.k0 = k0_override;
    if (grid_override.size() == 2) {
      cfg.grid.nx = grid_override[0];
      cfg.grid.nz = grid_override[1];
      if (cfg.grid.nx < 2 || cfg.grid.nz < 2)
        throw ConfigError("grid resolution must be >= 2 per axis");
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (sf->parsed()) return cmd_field(cfg);
    if (st->parsed()) return cmd_thimbles(cfg, px, pz);
    if (sc->parsed()) return cmd_caustics(cfg);
    if (sl->parsed()) return cmd_laurent(cfg, order);
    if (sp->parsed()) return cmd_pade(cfg, N, M, pade_z);
    if (sm->parsed()) return cmd_monodromy(cfg, loop_name, mx, mz);
    if (sa->parsed()) return cmd_arrivals(cfg, c0);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
