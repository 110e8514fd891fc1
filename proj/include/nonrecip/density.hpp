#pragma once

#include "nonrecip/fock.hpp"

namespace nonrecip {

class DensityMatrix {
 public:
  DensityMatrix() = default;
  /// Validates trace, Hermiticity and eigenvalue floor.
  DensityMatrix(FockSpace space, CMatrix matrix, double tol = 1e-10);

  const FockSpace& space() const { return space_; }
  const CMatrix& matrix() const { return matrix_; }

  static DensityMatrix pure(const FockSpace& space, const CVector& psi);
  static DensityMatrix basis(const FockSpace& space, const std::vector<int>& occupations);
  static DensityMatrix vacuum(const FockSpace& space);

 private:
  FockSpace space_;
  CMatrix matrix_;
};

/// Throws InvalidArgument describing the first violated density-matrix invariant.
void validate_density(const CMatrix& rho, double tol = 1e-10, double eig_floor = -1e-8);

cplx expectation(const FockOperator& op, const CMatrix& rho);
inline cplx expectation(const FockOperator& op, const DensityMatrix& rho) { return expectation(op, rho.matrix()); }

/// Reduced state on `keep` (modes in ascending order).
DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep);
CMatrix partial_trace(const FockSpace& space, const CMatrix& rho, std::vector<int> keep);

/// Transpose of the S2 tensor factors.
CMatrix partial_transpose(const FockSpace& space, const CMatrix& rho, const Bipartition& cut);

double trace_norm_hermitian(const CMatrix& m);
double trace_distance(const CMatrix& a, const CMatrix& b);

}  // namespace nonrecip
