#pragma once

#include <vector>

#include "einbein/laurent.hpp"
#include "einbein/types.hpp"

namespace einbein {

struct IllConditioned : std::runtime_error {
  explicit IllConditioned(const std::string& w) : std::runtime_error(w) {}
};

struct DegenerateDenominator : std::runtime_error {
  explicit DegenerateDenominator(const std::string& w)
      : std::runtime_error(w) {}
};

struct MultipleRoot : std::runtime_error {
  explicit MultipleRoot(const std::string& w) : std::runtime_error(w) {}
};

struct GhostPoleEstimate {
  Complex beta{0.0, 0.0};
  Complex residue{0.0, 0.0};
  int codim = 1;
  bool spurious = false;  // Froissart doublet: negligible residue
};

/// Meromorphic approximation Sbar ~ A(Lambda)/B(Lambda) with B monic.
/// The universal pole at Lambda = 0 is part of B.
struct RationalApproximant {
  std::vector<Complex> A;  // ascending, degree N
  std::vector<Complex> B;  // ascending, degree M, monic
  int N = 0;
  int M = 0;
  std::vector<GhostPoleEstimate> ghost_poles;  // roots of B
  double fit_residual = 0.0;

  Complex eval(Complex lam) const;
  Complex deriv(Complex lam) const;
};

struct HurwitzCounts {
  int m_inf = 0;   // order of growth at infinity
  int n_P = 0;     // finite poles
  int n_C = 0;     // critical points = N+M-1
  int n_total = 0; // m_inf + n_P
};

/// Roots of a complex polynomial (ascending coefficients) via the companion
/// matrix. Trailing coefficients below a relative floor are trimmed.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs,
                                      double trim_tol = 1e-13);

/// Pade recovery of the meromorphic part of Sbar from its Laurent series
/// about Lambda = 0. Forms T = Lambda * Sbar (regular at 0), computes the
/// [N+1/M] Pade approximant of T from the k0->infinity grade evaluated at z,
/// and returns Sbar ~ A/B with B = Lambda * denominator. The stored degrees
/// are deg A = N+1, deg B = M+1.
RationalApproximant fit_rational(const LaurentSeries& series, double z, int N,
                                 int M);

HurwitzCounts riemann_hurwitz_count(const RationalApproximant& approx);

}  // namespace einbein
