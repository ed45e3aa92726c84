#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace einbein {

using Complex = std::complex<double>;
using Vec = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr Complex I{0.0, 1.0};

/// Errors raised when an evaluation point sits inside the guard disk of a
/// pole or branch point of the einbein action.
struct PoleEvaluation : std::runtime_error {
  explicit PoleEvaluation(const std::string& what) : std::runtime_error(what) {}
};

struct BranchPointEvaluation : std::runtime_error {
  explicit BranchPointEvaluation(const std::string& what)
      : std::runtime_error(what) {}
};

struct UnsupportedCombination : std::invalid_argument {
  explicit UnsupportedCombination(const std::string& what)
      : std::invalid_argument(what) {}
};

struct DimensionMismatch : std::invalid_argument {
  explicit DimensionMismatch(const std::string& what)
      : std::invalid_argument(what) {}
};

}  // namespace einbein
