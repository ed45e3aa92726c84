#pragma once

#include <optional>
#include <vector>

#include "einbein/types.hpp"

namespace einbein {

enum class ModelKind { Constant, LinearZ, QuadraticZ, LinearXQuadraticZ, PolynomialZ };

/// Squared index of refraction n^2(x). Parameters that do not apply to the
/// active variant are ignored. Coordinates are (x, z) in 2D; the Constant
/// model also supports 3D.
struct RefractionModel {
  ModelKind kind = ModelKind::Constant;
  int dim = 2;
  double n0sq = 1.0;   // constant part, dimensionless
  double a = 0.0;      // linear-z slope, 1/length
  double alpha = 0.0;  // quadratic-z curvature, 1/length^2
  double beta = 0.0;   // linear-x slope, 1/length
  std::vector<double> poly;  // n^2(z) coefficients, ascending in z

  double n2(const Eigen::VectorXd& x) const;
  void validate() const;
};

enum class SourceKind { PointDelta, PhaseSheet };

/// PhaseSheet is the z=z' sheet source delta(z-z') exp(-i k0 (x-x')^2 / 4 mu).
struct SourceSpec {
  SourceKind kind = SourceKind::PointDelta;
  Eigen::VectorXd location;  // x' for PointDelta; (x', z') reference for PhaseSheet
  double mu = 0.0;           // smearing length for PhaseSheet

  void validate(int dim) const;
};

/// c / (Lambda - location); the coefficient is the pole residue, equal to a
/// quarter of the squared transverse distance to the (ghost) source locus.
struct PoleTerm {
  Complex location;
  double residue;
  Eigen::VectorXd residue_grad;  // d residue / d x
};

struct MonomialTerm {
  int power;  // >= 1
  double coeff;
  Eigen::VectorXd coeff_grad;
};

/// sqrt(alpha) [ (z'^2+z^2) cos(2 sqrt(alpha) Lambda) - 2 z' z ]
///   / ( 2 sin(2 sqrt(alpha) Lambda) ), with simple poles at pi n / (2 sqrt(alpha)).
struct ChannelTerm {
  double alpha;
  double z;
  double zp;

  Complex eval(Complex lam) const;
  Complex d1(Complex lam) const;
  Complex d2(Complex lam) const;
  Complex grad_z(Complex lam) const;
  double pole_spacing() const { return pi / (2.0 * std::sqrt(alpha)); }
  double residue(long n) const;  // (z - (-1)^n z')^2 / 4
};

struct FinitePole {
  Complex location;
  double residue;
};

/// Meromorphic part S-bar of the einbein action: a sum of closed-form terms.
struct EinbeinAction {
  std::vector<PoleTerm> poles;
  std::vector<MonomialTerm> monomials;
  std::optional<ChannelTerm> channel;
  int infinity_order = 1;    // m_inf: degree of the pole at Lambda = infinity
  Complex leading_coeff;     // mu_inf: coefficient of Lambda^{m_inf}
  double guard_radius = 0.0; // evaluation guard around finite poles
  int dim = 2;

  Complex eval(Complex lam) const;
  Complex d1(Complex lam) const;
  Complex d2(Complex lam) const;
  Eigen::VectorXcd grad_x(Complex lam) const;

  /// Finite poles with their residues; channel poles are enumerated within
  /// |Re Lambda| <= window (they are infinite in number).
  std::vector<FinitePole> finite_poles(double window) const;
  double characteristic_pole_spacing() const;
  void check_guard(Complex lam) const;
};

struct PrefactorFactor {
  Complex location;
  double exponent;  // half-integer, -D_m/2
};

/// f(Lambda): overall constant times a product of (Lambda-beta)^{e} factors,
/// with a Riemann-sheet index flipping the sign of every half-integer factor.
struct Prefactor {
  Complex constant{1.0, 0.0};
  std::vector<PrefactorFactor> factors;
  bool channel_sinc = false;  // sinc(2 sqrt(alpha) Lambda)^{-1/2}
  double channel_alpha = 0.0;

  Complex eval(Complex lam, int sheet = 0) const;
  int half_integer_count() const;
  std::vector<Complex> branch_points() const;
};

struct Wavefunction {
  EinbeinAction action;
  Prefactor prefactor;
  double k0 = 1.0;

  /// f(Lambda) exp(i k0 Sbar(Lambda)) on the requested sheet.
  Complex psi(Complex lam, int sheet = 0) const;
};

struct BuiltAction {
  EinbeinAction action;
  Prefactor prefactor;
};

/// Closed-form einbein action and prefactor for the exactly soluble catalog.
/// PolynomialZ has no closed form and raises UnsupportedCombination; use the
/// laurent module instead.
BuiltAction build_action(const RefractionModel& model, const SourceSpec& source,
                         const Eigen::VectorXd& x, double k0);

Wavefunction build_wavefunction(const RefractionModel& model,
                                const SourceSpec& source,
                                const Eigen::VectorXd& x, double k0);

/// Finite-difference residual of (i/k0) dPsi/dLambda + (1/k0^2 Lap + n^2) Psi,
/// normalized by |Psi|. Rebuilds the action at spatially displaced points.
Complex schrodinger_residual(const RefractionModel& model,
                             const SourceSpec& source,
                             const Eigen::VectorXd& x, double k0, Complex lam,
                             double h, double h_lam);

/// (grad_x Sbar)^2 - n^2 + dSbar/dLambda, which vanishes identically on the
/// catalog (checked analytically term by term in the tests).
Complex hamilton_jacobi_defect(const RefractionModel& model,
                               const SourceSpec& source,
                               const Eigen::VectorXd& x, double k0,
                               Complex lam);

}  // namespace einbein
