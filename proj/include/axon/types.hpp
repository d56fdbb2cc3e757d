#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace axon {

using Scalar = double;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using RowVec4 = Eigen::Matrix<double, 1, 4>;
using VecX = Eigen::VectorXd;

enum class ErrorKind {
  InvalidParams,
  ConfigError,
  GridMismatch,
  RangeError,
  Overflow,
  NonFinite,
  DomainCollapse,
  LinearSolveFailure,
  GainConditionViolated,
  MatrixExponentialFailure,
  EventCapExceeded,
  IoError,
};

class SimulationError : public std::runtime_error {
 public:
  SimulationError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw SimulationError(kind, msg);
}

}  // namespace axon
