#pragma once

#include <functional>
#include <vector>

#include "einbein/action.hpp"
#include "einbein/thimble.hpp"
#include "einbein/types.hpp"

namespace einbein {

struct AccuracyNotReached : std::runtime_error {
  explicit AccuracyNotReached(const std::string& w) : std::runtime_error(w) {}
};
struct NonConvergence : std::runtime_error {
  explicit NonConvergence(const std::string& w) : std::runtime_error(w) {}
};

/// Adaptive Gauss-Kronrod integral of Psi along a polyline, with optional
/// damping factor applied to the exponent: integrand
/// f(Lambda) exp(i k0 (1 + i delta) Sbar(Lambda)) on the given sheet.
Complex integrate_polyline(const Wavefunction& wf,
                           const std::vector<Complex>& path, double delta = 0.0,
                           int sheet = 0);

/// Integral of Psi along a traced thimble (its endpoints already reach
/// regions of negligible |Psi|).
Complex integrate_thimble(const Wavefunction& wf, const Thimble& thimble);

/// Integral of Psi along an arbitrary polyline with the prefactor sheet
/// continued analytically along the path: the first node is evaluated on
/// start_sheet and every branch-cut crossing toggles the sheet.  Use this
/// for contours that wind around branch points (monodromy representatives).
Complex integrate_path_continued(const Wavefunction& wf,
                                 const std::vector<Complex>& path,
                                 int start_sheet = 0);

/// Ground-truth value of (i/k0) Int_0^R dLambda Psi along the damped real
/// axis, k0 -> k0 (1 + i delta), Richardson-extrapolated over delta, delta/2,
/// delta/4. The contour is pushed slightly below the axis (all catalog pole
/// sectors and branch cuts are convergent from below) and closed from R into
/// the nearest convergence wedge at infinity so the cutoff error is
/// negligible.
Complex oracle_real_axis(const Wavefunction& wf, double delta = 1e-4,
                         double cutoff = 0.0);

struct FieldSample {
  Eigen::VectorXd x;
  Complex value{0.0, 0.0};
  std::vector<int> decomposition;
  std::vector<Complex> contributions;  // per-thimble integrals
  bool via_thimbles = false;           // false: oracle fallback
  std::string diagnostic;
};

/// Field at one point: thimble pipeline (critical points -> thimbles ->
/// decomposition -> integrals) with oracle fallback on any failure.
FieldSample field_point(const RefractionModel& model, const SourceSpec& source,
                        const Eigen::VectorXd& x, double k0);

std::vector<FieldSample> field_grid(const RefractionModel& model,
                                    const SourceSpec& source,
                                    const std::vector<double>& xs,
                                    const std::vector<double>& zs, double k0);

/// |(Lap_h + k0^2 n^2) phi| / (k0^2 |phi|) by central differences, with phi
/// evaluated through the oracle (5-point stencil in 2D, 7-point in 3D).
double helmholtz_residual_at(const RefractionModel& model,
                             const SourceSpec& source,
                             const Eigen::VectorXd& x, double k0, double h);

}  // namespace einbein
