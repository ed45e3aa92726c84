#pragma once

#include <string>
#include <vector>

#include "einbein/action.hpp"
#include "einbein/critical.hpp"
#include "einbein/types.hpp"

namespace einbein {

struct ZeroResidue : std::runtime_error {
  explicit ZeroResidue(const std::string& w) : std::runtime_error(w) {}
};
struct FlowStall : std::runtime_error {
  explicit FlowStall(const std::string& w) : std::runtime_error(w) {}
};
struct WrongSector : std::runtime_error {
  explicit WrongSector(const std::string& w) : std::runtime_error(w) {}
};
struct NonIntegerCoefficients : std::runtime_error {
  explicit NonIntegerCoefficients(const std::string& w)
      : std::runtime_error(w) {}
};

/// Angular interval of convergent approach, either at infinity or at a
/// finite pole. Angles are in [0, 2 pi) with theta2 > theta1 (theta2 may
/// exceed 2 pi for intervals wrapping zero).
struct Wedge {
  bool at_infinity = true;
  int pole_id = -1;                // index into the finite-pole list
  Complex pole_location{0.0, 0.0};
  double theta1 = 0.0, theta2 = 0.0;
  int index = 0;
  bool branch_point_only = false;  // vanishing residue: no sector, only a cut
};

struct WedgeSet {
  std::vector<Wedge> at_infinity;
  std::vector<Wedge> at_poles;
  std::vector<FinitePole> poles;  // the enumerated finite poles

  const Wedge* infinity_wedge_containing(double theta) const;
};

enum class EndpointKind { InfinityWedge, Pole, Unterminated };

struct ThimbleEndpoint {
  EndpointKind kind = EndpointKind::Unterminated;
  int index = -1;  // wedge index or pole id
};

struct Thimble {
  CriticalPoint cp;
  std::vector<Complex> path;  // oriented through the critical point
  ThimbleEndpoint start, end;
  double re_phase = 0.0;      // Re Sbar(Lambda*), constant along the path
  double phase_drift = 0.0;   // max |Re Sbar - re_phase| observed
  Complex tangent{0.0, 0.0};  // unit descent direction at Lambda* (toward end)
};

/// Symbolic homology word: endpoint/winding tokens. Tokens of the form
/// "wind(p,+1,s)" cancel against "wind(p,-1,s)" when adjacent.
struct ContourClass {
  std::vector<std::string> word;
  void reduce();
};

struct TraceOptions {
  double r_max = 0.0;       // 0: auto (10 x outermost pole radius)
  double eps_pole = 0.0;    // 0: auto (1e-4 x pole spacing)
  double launch = 1e-6;     // offset in units of sqrt(1/|Sbar''|)
  int max_steps = 200000;
  double pole_window = 0.0; // channel pole enumeration window; 0: auto
};

WedgeSet convergence_wedges(const EinbeinAction& action,
                            double pole_window = 0.0);

Thimble trace_thimble(const EinbeinAction& action, const CriticalPoint& cp,
                      const TraceOptions& opt = {});

/// Integer coefficients c_i with oracle = sum c_i * thimble integral, fitted
/// at two k0 values and rounded; relative residual after rounding must be
/// below 1e-6.
std::vector<int> decompose_real_axis(const std::vector<Thimble>& thimbles,
                                     const RefractionModel& model,
                                     const SourceSpec& source,
                                     const Eigen::VectorXd& x, double k0);

}  // namespace einbein
