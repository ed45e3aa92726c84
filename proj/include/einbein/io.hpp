#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "einbein/action.hpp"
#include "einbein/asymptotics.hpp"
#include "einbein/critical.hpp"
#include "einbein/laurent.hpp"
#include "einbein/monodromy.hpp"
#include "einbein/pade.hpp"
#include "einbein/quadrature.hpp"
#include "einbein/thimble.hpp"

namespace einbein {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& w) : std::runtime_error(w) {}
};

// ---- model / source serialization (used by the CLI config loader) ----

nlohmann::json model_to_json(const RefractionModel& model);
RefractionModel model_from_json(const nlohmann::json& j);

nlohmann::json source_to_json(const SourceSpec& source);
SourceSpec source_from_json(const nlohmann::json& j, int dim);

// ---- result serialization ----

/// {pole, codim, coefficients: [{m, grade, poly-coeffs}]} with the exact
/// rational polynomial coefficients rendered as "p/q" strings.
nlohmann::json laurent_to_json(const LaurentSeries& series);

/// {N, M, A, B, ghost_poles: [{beta, residue, codim, spurious}]}; complex
/// numbers as [re, im] pairs.
nlohmann::json pade_to_json(const RationalApproximant& approx);

/// {loop, labels, matrix, residual}.
nlohmann::json monodromy_to_json(const MonodromyMatrix& m);

/// Grid samples with values, decompositions and diagnostics.
nlohmann::json field_to_json(const std::vector<FieldSample>& samples);

// ---- CSV (data of record; deterministic fixed-precision formatting) ----

/// x, z, Re phi, Im phi, |phi|, zone  (zone from the caustic classifier).
std::string field_csv(const RefractionModel& model, const SourceSpec& source,
                      const std::vector<FieldSample>& samples);

/// x, z, zone, type for each classified grid point.
std::string caustic_csv(const CausticGrid& grid);

/// tau, Re Lambda, Im Lambda, Re Sbar, Im Sbar along each traced thimble
/// (tau is the cumulative arclength, negative before the critical point).
std::string thimble_csv(const EinbeinAction& action,
                        const std::vector<Thimble>& thimbles);

/// x, z, t, smear, thimble id (-1 marks the branch-point-winding arrival).
std::string arrivals_csv(
    const std::vector<std::pair<Eigen::VectorXd, std::vector<Arrival>>>& rows);

// ---- schematic SVG ----

/// |phi| heat map over the sample grid with the caustic locus overlaid.
std::string field_svg(const std::vector<FieldSample>& samples,
                      const std::vector<double>& xs,
                      const std::vector<double>& zs,
                      const std::vector<Eigen::Vector2d>& caustic = {});

/// Thimble polylines in the Lambda plane with poles and critical points
/// marked.
std::string thimble_svg(const EinbeinAction& action,
                        const std::vector<Thimble>& thimbles);

}  // namespace einbein
