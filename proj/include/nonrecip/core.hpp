#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nonrecip {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using SparseCMatrix = Eigen::SparseMatrix<cplx>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

enum class ErrorKind {
  InvalidModel,
  InvalidArgument,
  InvalidCoupling,
  PreconditionViolation,
  NoSolution,
  NumericalSingularity,
  StepSize,
  IntegrationFailure,
  NonUniqueSteadyState,
  CutoffTooSmall,
  InvalidConfig,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// True for failures of a numerical method on valid input (CLI exit code 3).
bool is_numerical(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Maps an angle onto the canonical branch (-pi, pi].
double wrap_phase(double angle) noexcept;

/// Largest singular value.
double spectral_norm(const CMatrix& m);

/// Max-abs entry of m - m^dagger.
double hermiticity_defect(const CMatrix& m);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Column-stacked vectorization and its inverse.
CVector vec(const CMatrix& m);
CMatrix unvec(const CVector& v, Eigen::Index dim);

}  // namespace nonrecip
