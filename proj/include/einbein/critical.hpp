#pragma once

#include <string>
#include <vector>

#include "einbein/action.hpp"
#include "einbein/types.hpp"

namespace einbein {

struct Region {
  double re_min = -1.0, re_max = 1.0, im_min = -1.0, im_max = 1.0;

  bool contains(Complex lam) const {
    return lam.real() >= re_min && lam.real() <= re_max &&
           lam.imag() >= im_min && lam.imag() <= im_max;
  }
};

enum class Zone { Illuminated, Shadow, OnCaustic };
enum class CausticType { None, Fold, Cusp };

struct CriticalPoint {
  Complex lambda{0.0, 0.0};
  Complex value{0.0, 0.0};        // Sbar at the critical point
  Complex second_deriv{0.0, 0.0}; // Sbar'' there
  bool real = false;
  int multiplicity = 1;
};

struct CausticClassification {
  Eigen::VectorXd x;
  Zone zone = Zone::Illuminated;
  CausticType type = CausticType::None;
  bool ghost_source = false;
  int real_critical_count = 0;
};

struct GhostSourceLocus {
  Complex pole{0.0, 0.0};
  std::string description;  // spatial zero set of the residue
};

struct CuspLaw {
  double scale23 = 0.0;  // (2 sqrt(b) Delta)^{2/3}

  /// caustic branch r2(r1) for 0 <= r1 <= scale23^{3/2}
  double r2_of_r1(double r1) const;
};

struct CausticGrid {
  std::vector<CausticClassification> points;
  std::vector<Eigen::Vector2d> locus;  // refined caustic crossings
};

struct RegionContainsPole : std::runtime_error {
  explicit RegionContainsPole(const std::string& w) : std::runtime_error(w) {}
};

struct NonPositiveParameters : std::invalid_argument {
  explicit NonPositiveParameters(const std::string& w)
      : std::invalid_argument(w) {}
};

/// All critical points of Sbar inside the region. Rational actions go through
/// the companion matrix of the cleared-denominator numerator of Sbar', with
/// the two roots manufactured at any vanishing-residue pole discarded;
/// channel actions use damped Newton from a seed grid (seeds_per_cell seeds
/// per pole-spacing cell).
std::vector<CriticalPoint> find_critical_points(const EinbeinAction& action,
                                                const Region& region,
                                                int seeds_per_cell = 25);

/// Zone/caustic classification at one spatial point, from the full critical
/// set of the catalog action.
CausticClassification classify_point(const RefractionModel& model,
                                     const SourceSpec& source,
                                     const Eigen::VectorXd& x, double k0);

/// Grid classification plus caustic crossings refined by bisection on the
/// real-critical-point count (to 1e-8 in position).
CausticGrid caustic_locus(const RefractionModel& model,
                          const SourceSpec& source,
                          const std::vector<double>& xs,
                          const std::vector<double>& zs, double k0);

/// Signed closed-form caustic indicator (zero on the caustic) for catalog
/// models that have one; NaN when the model has no caustic.
double closed_form_caustic(const RefractionModel& model,
                           const SourceSpec& source,
                           const Eigen::VectorXd& x);

std::vector<GhostSourceLocus> ghost_source_locus(const RefractionModel& model,
                                                 const SourceSpec& source);

/// Cusp caustic law r1^{2/3} + r2^{2/3} = (2 sqrt(b) Delta)^{2/3} produced by
/// a pole pair separated by Delta with quadratic-form slope b.
CuspLaw nearby_pole_cusp(double pole_center, double delta, double b);

}  // namespace einbein
