#include "nonrecip/core.hpp"

#include <cmath>

namespace nonrecip {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidModel: return "invalid_model";
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::InvalidCoupling: return "invalid_coupling";
    case ErrorKind::PreconditionViolation: return "precondition_violation";
    case ErrorKind::NoSolution: return "no_solution";
    case ErrorKind::NumericalSingularity: return "numerical_singularity";
    case ErrorKind::StepSize: return "step_size";
    case ErrorKind::IntegrationFailure: return "integration_failure";
    case ErrorKind::NonUniqueSteadyState: return "non_unique_steady_state";
    case ErrorKind::CutoffTooSmall: return "cutoff_too_small";
    case ErrorKind::InvalidConfig: return "invalid_config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

bool is_numerical(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NoSolution:
    case ErrorKind::NumericalSingularity:
    case ErrorKind::StepSize:
    case ErrorKind::IntegrationFailure:
    case ErrorKind::NonUniqueSteadyState:
    case ErrorKind::CutoffTooSmall:
    case ErrorKind::Io:
      return true;
    default:
      return false;
  }
}

double wrap_phase(double angle) noexcept {
  double r = std::remainder(angle, 2.0 * pi);
  if (r <= -pi) r += 2.0 * pi;
  return r;
}

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double hermiticity_defect(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector vec(const CMatrix& m) {
  return Eigen::Map<const CVector>(m.data(), m.size());
}

CMatrix unvec(const CVector& v, Eigen::Index dim) {
  if (v.size() != dim * dim)
    throw Error(ErrorKind::InvalidArgument, "unvec: size is not dim^2");
  return Eigen::Map<const CMatrix>(v.data(), dim, dim);
}

}  // namespace nonrecip
