#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "einbein/action.hpp"
#include "einbein/thimble.hpp"
#include "einbein/types.hpp"

namespace einbein {

struct TooCloseToCaustic : std::runtime_error {
  explicit TooCloseToCaustic(const std::string& w) : std::runtime_error(w) {}
};
struct DegenerateCubic : std::runtime_error {
  explicit DegenerateCubic(const std::string& w) : std::runtime_error(w) {}
};
struct UnclassifiedCaustic : std::runtime_error {
  explicit UnclassifiedCaustic(const std::string& w) : std::runtime_error(w) {}
};
struct AiryOverflow : std::runtime_error {
  explicit AiryOverflow(const std::string& w) : std::runtime_error(w) {}
};

/// Ai(u): Maclaurin series for moderate |u|, asymptotic expansions beyond
/// (real u); absolute accuracy 1e-10 on the real axis.
Complex airy_ai(Complex u);
Complex airy_ai_prime(Complex u);

/// Cubic Taylor data of the einbein action about the zero-curvature point
/// Lambda_c near a pole: Sbar ~ Gamma0 + Gamma1 l + Gamma3 l^3,
/// l = (Lambda - P) - Lambda_c.
struct UniformExpansion {
  double Gamma0 = 0.0, Gamma1 = 0.0, Gamma3 = 0.0;
  double lambda_c = 0.0;  // Lambda_c relative to the pole
  int codim = 2;          // source codimension d
};

/// From the truncated Laurent data (gm1/l + g0 + g1 l + g3 l^3) about a
/// pole; Lambda_c = (-gm1 / (3 g3))^{1/4}, positive real root. Note the
/// pole itself feeds the cubic: Gamma3 = 4 g3, not g3.
UniformExpansion uniform_expansion(double gm1, double g0, double g1,
                                   double g3, int codim = 2);

/// Uniform fold-caustic field for a codimension-2 source: Airy function plus
/// first derivative correction, valid on both sides of the caustic.
Complex airy_uniform(double gm1, double g0, double g1, double g3, double k0,
                     int codim = 2);

/// Closed-form Laurent coefficients about the source pole for the linear
/// profile n^2 = n0^2 - a z.
struct FoldSeries {
  double gm1 = 0.0, g0 = 0.0, g1 = 0.0, g3 = 0.0;
};
FoldSeries linear_fold_series(const RefractionModel& model,
                              const SourceSpec& source,
                              const Eigen::VectorXd& x);

/// Gaussian stationary-phase sum over the decomposition's thimbles, square
/// root branch fixed by each thimble's tangent direction. Throws
/// TooCloseToCaustic when k0 |Sbar''| dist^2 < threshold for a contributing
/// critical point (dist = separation from its nearest neighbor).
Complex stationary_phase(const Wavefunction& wf,
                         const std::vector<Thimble>& thimbles,
                         const std::vector<int>& coeff,
                         double threshold = 10.0);

/// Affine map l -> t = nu (l - 0) matching the fold normal form
/// t^3/3 + zeta1 t; singular at a ghost source (vanishing residue).
struct LambdaMap {
  double nu = 0.0;
  double lambda_tilde = 0.0;  // expansion center relative to the pole
  double zeta1 = 0.0;
  bool singular = false;
};
LambdaMap lambda_map(double gm1, double g1, double g3);

/// Critical points of the cusp generating polynomial l^3 + zeta2 l + zeta1.
std::vector<Complex> cusp_generating_roots(double zeta1, double zeta2);

struct Arrival {
  double t = 0.0;      // Re Sbar(Lambda*) / c0
  double smear = 0.0;  // Im Sbar(Lambda*)
  int thimble = -1;    // index into the decomposition, -1 for winding
};

/// One arrival per thimble with nonzero coefficient, sorted by time.
std::vector<Arrival> arrival_times(const std::vector<Thimble>& thimbles,
                                   const std::vector<int>& coeff, double c0);

/// On the symmetry axis of the sheet-source model the two arrivals are
/// closed-form: n0 z (direct) and z^2/(4 mu) + n0^2 mu (branch-point
/// winding).
std::vector<Arrival> cusp_axis_arrivals(double n0sq, double mu, double z,
                                        double c0);

}  // namespace einbein
