#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "einbein/action.hpp"
#include "einbein/thimble.hpp"
#include "einbein/types.hpp"

namespace einbein {

/// The supplied contours do not span their own images under the loop, or the
/// fitted transformation is not an invertible integer matrix.
struct BasisNotClosed : std::runtime_error {
  explicit BasisNotClosed(const std::string& w) : std::runtime_error(w) {}
};

/// The least-squares coefficients of the transported contours are not close
/// enough to integers to round with confidence.
struct IntegerRoundingFailure : std::runtime_error {
  explicit IntegerRoundingFailure(const std::string& w)
      : std::runtime_error(w) {}
};

/// One end of an admissible integration contour: a ray to infinity inside a
/// convergence wedge, or an approach into a finite pole of the action inside
/// its convergence sector.  `lift` is the continuous (unwrapped) direction
/// angle of the ray or approach; values outside a single 2 pi period encode
/// windings accumulated around the singularity, so the pair of lifts of a
/// contour determines its homology class.
struct ContourEnd {
  enum class Kind { Infinity, Pole };
  Kind kind = Kind::Infinity;
  int pole_id = 0;
  double lift = 0.0;

  static ContourEnd infinity(double lift) {
    return {Kind::Infinity, 0, lift};
  }
  static ContourEnd pole(int id, double lift) {
    return {Kind::Pole, id, lift};
  }
};

/// Homology-class representative of an integration contour, given by the
/// ordered sequence of its ends.  Consecutive ends are joined by a canonical
/// realization (radial legs plus circular arcs around the singularities); a
/// contour that runs through a pole lists that pole twice, with the incoming
/// and outgoing approach lifts.  start_sheet fixes the prefactor branch at
/// the first node of the realization.
struct BasisContour {
  std::string label;
  std::vector<ContourEnd> ends;
  int start_sheet = 0;

  /// Token word of the contour (endpoint and winding tokens); transported
  /// words reduce against the originals via ContourClass::reduce().
  ContourClass word() const;
};

/// A closed loop in parameter space along which the contours are
/// transported: rotating the argument of the coefficient of the leading
/// power of the action at infinity, rotating the argument of the residue of
/// one finite pole, or the trivial loop.  delta_arg is the total signed
/// change of the argument over one traversal (+2 pi is counterclockwise).
struct ParameterLoop {
  enum class Kind { Trivial, InfinityCoeff, PoleResidue };
  Kind kind = Kind::Trivial;
  int pole_id = 0;
  double delta_arg = 0.0;
  int steps = 720;
  std::string name = "trivial";

  static ParameterLoop trivial() { return {}; }
  static ParameterLoop infinity_coeff(double delta_arg) {
    return {Kind::InfinityCoeff, 0, delta_arg, 720, "infinity-coefficient"};
  }
  static ParameterLoop pole_residue(int id, double delta_arg) {
    return {Kind::PoleResidue, id, delta_arg, 720, "pole-residue"};
  }
};

/// Integer matrix M with transported(Gamma_i) = sum_j M(i,j) Gamma_j,
/// confirmed numerically by contour integration at several wavenumbers.
struct MonodromyMatrix {
  Eigen::MatrixXi m;
  std::vector<std::string> labels;
  std::string loop;
  double residual = 0.0;  ///< relative fit residual after integer rounding
};

/// Endpoint data of the basis contours after one traversal of the loop:
/// infinity lifts rotate by -delta_arg / m, approach lifts at the matching
/// pole rotate by delta_arg, accumulated over the discretized loop.  The
/// start sheet is continued along the motion of the first endpoint.
std::vector<BasisContour> transport_endpoints(
    const Wavefunction& wf, const std::vector<BasisContour>& basis,
    const ParameterLoop& loop);

/// Concrete polyline realization of a contour for numerical integration:
/// each end becomes a radial leg (cut off where the integrand is negligible)
/// joined to circular arcs whose swept angles carry the winding content of
/// the lifts.
std::vector<Complex> realize_contour(const Wavefunction& wf,
                                     const BasisContour& contour);

/// Monodromy matrix of the basis under the loop.  The transported endpoint
/// data is realized and integrated at each wavenumber in k0s and the integer
/// expansion in the original basis is fitted by least squares; throws
/// IntegerRoundingFailure or BasisNotClosed when the expansion is not a
/// clean invertible integer matrix.
MonodromyMatrix transport(const RefractionModel& model,
                          const SourceSpec& source, const Eigen::VectorXd& x,
                          const std::vector<BasisContour>& basis,
                          const ParameterLoop& loop,
                          std::vector<double> k0s = {});

/// Standard labelled contour basis for the catalog model at the field point:
/// Gamma_A (direct ray), Gamma_D (closed standing-wave contour around the
/// essential singularity) and, for the linear profile, Gamma_B and Gamma_C
/// connecting the convergence wedges pairwise.
std::vector<BasisContour> monodromy_basis(const RefractionModel& model,
                                          const SourceSpec& source,
                                          const Eigen::VectorXd& x);

}  // namespace einbein
