#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace polyred {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

/// Error categories shared by the C++ core and the C API status codes.
enum class ErrorCode {
  kInput = 1,
  kDimension = 2,
  kPrecondition = 3,
  kNoSolution = 4,
  kDivergence = 5,
  kUnsupportedAction = 6,
  kInconsistentSnapshot = 7,
  kUnknownModel = 8,
  kIo = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorCode::kInput, what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(ErrorCode::kDimension, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(ErrorCode::kPrecondition, what) {}
};

class NoSolutionError : public Error {
 public:
  explicit NoSolutionError(const std::string& what) : Error(ErrorCode::kNoSolution, what) {}
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, long step)
      : Error(ErrorCode::kDivergence, what + " (step " + std::to_string(step) + ")"), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

class UnsupportedActionError : public Error {
 public:
  explicit UnsupportedActionError(const std::string& what) : Error(ErrorCode::kUnsupportedAction, what) {}
};

class InconsistentSnapshotError : public Error {
 public:
  explicit InconsistentSnapshotError(const std::string& what)
      : Error(ErrorCode::kInconsistentSnapshot, what) {}
};

class UnknownModelError : public Error {
 public:
  explicit UnknownModelError(const std::string& what) : Error(ErrorCode::kUnknownModel, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::kIo, what) {}
};

inline void require_dims(bool ok, const std::string& what) {
  if (!ok) throw DimensionError(what);
}

}  // namespace polyred
