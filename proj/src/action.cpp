#include "einbein/action.hpp"

#include <algorithm>
#include <cmath>

namespace einbein {

namespace {

Complex pow_int(Complex z, int p) {
  Complex r{1.0, 0.0};
  for (int i = 0; i < p; ++i) r *= z;
  return r;
}

}  // namespace

double RefractionModel::n2(const Eigen::VectorXd& x) const {
  switch (kind) {
    case ModelKind::Constant:
      return n0sq;
    case ModelKind::LinearZ:
      return n0sq - a * x(1);
    case ModelKind::QuadraticZ:
      return n0sq - alpha * x(1) * x(1);
    case ModelKind::LinearXQuadraticZ:
      return n0sq - beta * x(0) - alpha * x(1) * x(1);
    case ModelKind::PolynomialZ: {
      double v = 0.0, zp = 1.0;
      for (double c : poly) {
        v += c * zp;
        zp *= x(1);
      }
      return v;
    }
  }
  return n0sq;
}

void RefractionModel::validate() const {
  if (n0sq <= 0.0) throw std::invalid_argument("RefractionModel: n0sq must be > 0");
  if (kind == ModelKind::PolynomialZ && poly.empty())
    throw std::invalid_argument("RefractionModel: empty polynomial");
  if (dim != 2 && dim != 3) throw DimensionMismatch("RefractionModel: dim must be 2 or 3");
  if (dim == 3 && kind != ModelKind::Constant)
    throw DimensionMismatch("RefractionModel: 3D supported for Constant only");
}

void SourceSpec::validate(int dim) const {
  if (kind == SourceKind::PhaseSheet && mu <= 0.0)
    throw std::invalid_argument("SourceSpec: PhaseSheet requires mu > 0");
  if (location.size() != dim)
    throw DimensionMismatch("SourceSpec: location dimension mismatch");
}

Complex ChannelTerm::eval(Complex lam) const {
  const double sa = std::sqrt(alpha);
  const Complex th = 2.0 * sa * lam;
  return sa * ((zp * zp + z * z) * std::cos(th) - 2.0 * zp * z) /
         (2.0 * std::sin(th));
}

Complex ChannelTerm::d1(Complex lam) const {
  const double sa = std::sqrt(alpha);
  const Complex th = 2.0 * sa * lam;
  const Complex s = std::sin(th);
  return alpha * (2.0 * z * zp * std::cos(th) - (z * z + zp * zp)) / (s * s);
}

Complex ChannelTerm::d2(Complex lam) const {
  const double sa = std::sqrt(alpha);
  const Complex th = 2.0 * sa * lam;
  const Complex s = std::sin(th), c = std::cos(th);
  const Complex num =
      -2.0 * z * zp * s * s - 2.0 * c * (2.0 * z * zp * c - (z * z + zp * zp));
  return 2.0 * sa * alpha * num / (s * s * s);
}

Complex ChannelTerm::grad_z(Complex lam) const {
  const double sa = std::sqrt(alpha);
  const Complex th = 2.0 * sa * lam;
  return sa * (z * std::cos(th) - zp) / std::sin(th);
}

double ChannelTerm::residue(long n) const {
  const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
  const double xi = z - sgn * zp;
  return xi * xi / 4.0;
}

Complex EinbeinAction::eval(Complex lam) const {
  check_guard(lam);
  Complex v{0.0, 0.0};
  for (const auto& p : poles) v += p.residue / (lam - p.location);
  for (const auto& m : monomials) v += m.coeff * pow_int(lam, m.power);
  if (channel) v += channel->eval(lam);
  return v;
}

Complex EinbeinAction::d1(Complex lam) const {
  check_guard(lam);
  Complex v{0.0, 0.0};
  for (const auto& p : poles) {
    const Complex d = lam - p.location;
    v += -p.residue / (d * d);
  }
  for (const auto& m : monomials)
    v += double(m.power) * m.coeff * pow_int(lam, m.power - 1);
  if (channel) v += channel->d1(lam);
  return v;
}

Complex EinbeinAction::d2(Complex lam) const {
  check_guard(lam);
  Complex v{0.0, 0.0};
  for (const auto& p : poles) {
    const Complex d = lam - p.location;
    v += 2.0 * p.residue / (d * d * d);
  }
  for (const auto& m : monomials)
    if (m.power >= 2)
      v += double(m.power) * double(m.power - 1) * m.coeff *
           pow_int(lam, m.power - 2);
  if (channel) v += channel->d2(lam);
  return v;
}

Eigen::VectorXcd EinbeinAction::grad_x(Complex lam) const {
  check_guard(lam);
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(dim);
  for (const auto& p : poles)
    g += p.residue_grad.cast<Complex>() / (lam - p.location);
  for (const auto& m : monomials)
    g += m.coeff_grad.cast<Complex>() * pow_int(lam, m.power);
  if (channel) g(1) += channel->grad_z(lam);
  return g;
}

std::vector<FinitePole> EinbeinAction::finite_poles(double window) const {
  std::vector<FinitePole> out;
  for (const auto& p : poles) out.push_back({p.location, p.residue});
  if (channel) {
    const double spacing = channel->pole_spacing();
    const long nmax = static_cast<long>(window / spacing);
    for (long n = -nmax; n <= nmax; ++n) {
      if (n == 0) continue;
      out.push_back({Complex(double(n) * spacing, 0.0), channel->residue(n)});
    }
  }
  std::sort(out.begin(), out.end(), [](const FinitePole& a, const FinitePole& b) {
    return a.location.real() < b.location.real();
  });
  return out;
}

double EinbeinAction::characteristic_pole_spacing() const {
  if (channel) return channel->pole_spacing();
  double spacing = 1.0;
  // nearest pair of finite poles, or unit scale when there is only one
  for (size_t i = 0; i < poles.size(); ++i)
    for (size_t j = i + 1; j < poles.size(); ++j)
      spacing = std::min(spacing, std::abs(poles[i].location - poles[j].location));
  return spacing;
}

void EinbeinAction::check_guard(Complex lam) const {
  const double guard =
      guard_radius > 0.0 ? guard_radius : 1e-9 * characteristic_pole_spacing();
  for (const auto& p : poles)
    if (std::abs(lam - p.location) < guard)
      throw PoleEvaluation("einbein action evaluated inside pole guard disk");
  if (channel) {
    const double spacing = channel->pole_spacing();
    const double n = std::round(lam.real() / spacing);
    if (n != 0.0 && std::abs(lam - Complex(n * spacing, 0.0)) < guard)
      throw PoleEvaluation("einbein action evaluated at a channel pole");
  }
}

Complex Prefactor::eval(Complex lam, int sheet) const {
  Complex v = constant;
  for (const auto& f : factors) {
    const Complex w = lam - f.location;
    if (std::lround(2.0 * f.exponent) % 2 == 0) {
      v *= std::pow(w, f.exponent);
    } else {
      // half-integer factor: branch cut along the upward vertical ray from
      // the branch point, so the real axis to the right, the lower half
      // plane, and the thimble asymptotes are all on one continuous branch
      double phi = std::arg(w);
      if (phi > pi / 2.0) phi -= 2.0 * pi;
      v *= std::pow(std::abs(w), f.exponent) *
           std::exp(I * f.exponent * phi);
    }
  }
  if (channel_sinc) {
    // sinc^{-1/2} has square-root branch points at every channel pole; take
    // the branch continued from Lambda = 0 along a path dipping below all of
    // them (cuts run vertically upward, as for the explicit factors above)
    const Complex w = 2.0 * std::sqrt(channel_alpha) * lam;
    auto sinc = [](Complex u) {
      return std::abs(u) < 1e-30 ? Complex{1.0, 0.0} : std::sin(u) / u;
    };
    const double depth = std::abs(w.imag()) + 2.0;
    const Complex way[4] = {Complex{0.0, 0.0}, Complex{0.0, -depth},
                            Complex{w.real(), -depth}, w};
    double phi = 0.0;
    Complex prev = sinc(way[0]);
    for (int leg = 0; leg < 3; ++leg) {
      const Complex a = way[leg], b = way[leg + 1];
      const int n0 = std::max(1, int(std::ceil(std::abs(b - a) / 0.4)));
      int n = n0;
      for (;;) {  // refine until the unwrapped steps are unambiguous
        double acc = 0.0;
        Complex p = prev;
        bool ok = true;
        for (int k = 1; k <= n; ++k) {
          const Complex q = sinc(a + (b - a) * (double(k) / n));
          const double d = std::arg(q / p);
          if (std::abs(d) > 1.0 && n < (1 << 22)) {
            ok = false;
            break;
          }
          acc += d;
          p = q;
        }
        if (ok) {
          phi += acc;
          prev = p;
          break;
        }
        n *= 2;
      }
    }
    const Complex sw = sinc(w);
    v *= std::exp(-0.5 * Complex{std::log(std::abs(sw)), phi});
  }
  // A sheet step crosses one branch cut; any half-integer factor then flips
  // the sign of the product.
  if (sheet % 2 != 0 && (half_integer_count() > 0 || channel_sinc)) v = -v;
  return v;
}

int Prefactor::half_integer_count() const {
  int n = 0;
  for (const auto& f : factors) {
    const double e2 = 2.0 * f.exponent;
    if (std::abs(e2 - std::round(e2)) > 1e-12)
      throw std::invalid_argument("Prefactor: exponent must be half-integer");
    if (std::lround(e2) % 2 != 0) ++n;
  }
  return n;
}

std::vector<Complex> Prefactor::branch_points() const {
  std::vector<Complex> out;
  for (const auto& f : factors) out.push_back(f.location);
  return out;
}

Complex Wavefunction::psi(Complex lam, int sheet) const {
  return prefactor.eval(lam, sheet) * std::exp(I * k0 * action.eval(lam));
}

BuiltAction build_action(const RefractionModel& model, const SourceSpec& source,
                         const Eigen::VectorXd& x, double k0) {
  model.validate();
  source.validate(model.dim);
  if (x.size() != model.dim)
    throw DimensionMismatch("build_action: point dimension mismatch");
  if (model.kind == ModelKind::PolynomialZ)
    throw UnsupportedCombination(
        "PolynomialZ has no closed-form action; use the laurent module");
  if (source.kind == SourceKind::PhaseSheet &&
      model.kind != ModelKind::Constant)
    throw UnsupportedCombination(
        "PhaseSheet source is supported for the Constant model only");

  const int D = model.dim;
  EinbeinAction act;
  act.dim = D;
  Prefactor pre;
  const Complex c4pi = k0 / (4.0 * pi * I);

  if (source.kind == SourceKind::PointDelta) {
    const Eigen::VectorXd dx = x - source.location;
    // universal pole at Lambda = 0 with residue (x-x')^2/4
    double res0;
    Eigen::VectorXd grad0;
    if (model.kind == ModelKind::QuadraticZ ||
        model.kind == ModelKind::LinearXQuadraticZ) {
      // z enters through the channel term; the Lambda=0 pole carries x only
      res0 = dx(0) * dx(0) / 4.0;
      grad0 = Eigen::VectorXd::Zero(D);
      grad0(0) = dx(0) / 2.0;
    } else {
      res0 = dx.squaredNorm() / 4.0;
      grad0 = dx / 2.0;
    }
    act.poles.push_back({Complex(0.0, 0.0), res0, grad0});
    pre.constant = std::pow(c4pi, D / 2.0);
    pre.factors.push_back({Complex(0.0, 0.0), -D / 2.0});

    switch (model.kind) {
      case ModelKind::Constant: {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(D);
        act.monomials.push_back({1, model.n0sq, g});
        act.infinity_order = 1;
        act.leading_coeff = model.n0sq;
        break;
      }
      case ModelKind::LinearZ: {
        const double zp = source.location(1);
        Eigen::VectorXd g1 = Eigen::VectorXd::Zero(D);
        g1(1) = -model.a / 2.0;
        act.monomials.push_back(
            {1, model.n0sq - model.a * (x(1) + zp) / 2.0, g1});
        act.monomials.push_back(
            {3, -model.a * model.a / 12.0, Eigen::VectorXd::Zero(D)});
        act.infinity_order = 3;
        act.leading_coeff = -model.a * model.a / 12.0;
        break;
      }
      case ModelKind::QuadraticZ: {
        act.monomials.push_back({1, model.n0sq, Eigen::VectorXd::Zero(D)});
        act.channel = ChannelTerm{model.alpha, x(1), source.location(1)};
        act.infinity_order = 1;
        act.leading_coeff = model.n0sq;
        pre.channel_sinc = true;
        pre.channel_alpha = model.alpha;
        break;
      }
      case ModelKind::LinearXQuadraticZ: {
        const double xp = source.location(0);
        Eigen::VectorXd g1 = Eigen::VectorXd::Zero(D);
        g1(0) = -model.beta / 2.0;
        act.monomials.push_back(
            {1, model.n0sq - model.beta * (x(0) + xp) / 2.0, g1});
        act.monomials.push_back(
            {3, -model.beta * model.beta / 12.0, Eigen::VectorXd::Zero(D)});
        act.channel = ChannelTerm{model.alpha, x(1), source.location(1)};
        act.infinity_order = 3;
        act.leading_coeff = -model.beta * model.beta / 12.0;
        pre.channel_sinc = true;
        pre.channel_alpha = model.alpha;
        break;
      }
      default:
        break;
    }
  } else {
    // PhaseSheet on constant n^2: the Lambda=0 pole splits into poles at 0
    // (residue z^2/4) and mu (residue x^2/4).
    const double mu = source.mu;
    const double xr = x(0) - source.location(0);
    const double zr = x(1) - source.location(1);
    Eigen::VectorXd g0 = Eigen::VectorXd::Zero(D);
    g0(1) = zr / 2.0;
    act.poles.push_back({Complex(0.0, 0.0), zr * zr / 4.0, g0});
    Eigen::VectorXd gm = Eigen::VectorXd::Zero(D);
    gm(0) = xr / 2.0;
    act.poles.push_back({Complex(mu, 0.0), xr * xr / 4.0, gm});
    act.monomials.push_back({1, model.n0sq, Eigen::VectorXd::Zero(D)});
    act.infinity_order = 1;
    act.leading_coeff = model.n0sq;
    pre.constant = std::sqrt(I * mu / (4.0 * pi * k0));
    pre.factors.push_back({Complex(0.0, 0.0), -0.5});
    pre.factors.push_back({Complex(mu, 0.0), -0.5});
  }
  return {std::move(act), std::move(pre)};
}

Wavefunction build_wavefunction(const RefractionModel& model,
                                const SourceSpec& source,
                                const Eigen::VectorXd& x, double k0) {
  auto built = build_action(model, source, x, k0);
  return Wavefunction{std::move(built.action), std::move(built.prefactor), k0};
}

Complex schrodinger_residual(const RefractionModel& model,
                             const SourceSpec& source,
                             const Eigen::VectorXd& x, double k0, Complex lam,
                             double h, double h_lam) {
  if (h <= 0.0 || h_lam <= 0.0)
    throw std::invalid_argument("schrodinger_residual: steps must be positive");
  auto psi_at = [&](const Eigen::VectorXd& pt, Complex l) {
    return build_wavefunction(model, source, pt, k0).psi(l);
  };
  const Complex psi0 = psi_at(x, lam);
  const Complex dpsi_dlam =
      (psi_at(x, lam + h_lam) - psi_at(x, lam - h_lam)) / (2.0 * h_lam);
  Complex lap{0.0, 0.0};
  for (int i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    lap += (psi_at(xp, lam) - 2.0 * psi0 + psi_at(xm, lam)) / (h * h);
  }
  const Complex r =
      (I / k0) * dpsi_dlam + lap / (k0 * k0) + model.n2(x) * psi0;
  return r / std::abs(psi0);
}

Complex hamilton_jacobi_defect(const RefractionModel& model,
                               const SourceSpec& source,
                               const Eigen::VectorXd& x, double k0,
                               Complex lam) {
  const auto built = build_action(model, source, x, k0);
  const Eigen::VectorXcd g = built.action.grad_x(lam);
  Complex gsq{0.0, 0.0};
  for (int i = 0; i < g.size(); ++i) gsq += g(i) * g(i);
  return gsq - model.n2(x) + built.action.d1(lam);
}

}  // namespace einbein
