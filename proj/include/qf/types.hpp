#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qf {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr cplx I_UNIT{0.0, 1.0};

// Error hierarchy. Config/validation errors and numerical failures are kept
// apart so the CLI can map them to distinct exit codes.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : ConfigError {
  using ConfigError::ConfigError;
};

struct NotProjector : NumericalError {
  using NumericalError::NumericalError;
};

struct NotPure : NumericalError {
  using NumericalError::NumericalError;
};

struct NotBosonicQuasifree : NumericalError {
  using NumericalError::NumericalError;
};

struct StepRejected : NumericalError {
  using NumericalError::NumericalError;
};

struct NonFinite : NumericalError {
  using NumericalError::NumericalError;
};

struct NoContraction : NumericalError {
  using NumericalError::NumericalError;
};

struct TooManyModes : ConfigError {
  using ConfigError::ConfigError;
};

struct DegenerateGroundState : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace qf
