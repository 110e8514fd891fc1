#include "nonrecip/density.hpp"

#include <algorithm>
#include <sstream>

namespace nonrecip {

void validate_density(const CMatrix& rho, double tol, double eig_floor) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw Error(ErrorKind::InvalidArgument, "density matrix not square");
  std::ostringstream msg;
  cplx tr = rho.trace();
  if (std::abs(tr - 1.0) > tol) {
    msg << "density matrix trace " << tr.real() << "+" << tr.imag() << "i is not 1";
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
  double herm = hermiticity_defect(rho);
  if (herm > tol) {
    msg << "density matrix not Hermitian (defect " << herm << ")";
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
  CMatrix h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < eig_floor) {
    msg << "density matrix has eigenvalue " << es.eigenvalues().minCoeff();
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
}

DensityMatrix::DensityMatrix(FockSpace space, CMatrix matrix, double tol)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != space_.dimension() || matrix_.cols() != space_.dimension())
    throw Error(ErrorKind::InvalidArgument, "density matrix does not match the space dimension");
  validate_density(matrix_, tol);
}

DensityMatrix DensityMatrix::pure(const FockSpace& space, const CVector& psi) {
  double n = psi.norm();
  if (n == 0.0) throw Error(ErrorKind::InvalidArgument, "zero state vector");
  CVector v = psi / n;
  return DensityMatrix(space, v * v.adjoint());
}

DensityMatrix DensityMatrix::basis(const FockSpace& space, const std::vector<int>& occupations) {
  CVector psi = CVector::Zero(space.dimension());
  psi(space.index(occupations)) = 1.0;
  return pure(space, psi);
}

DensityMatrix DensityMatrix::vacuum(const FockSpace& space) {
  return basis(space, std::vector<int>(space.num_modes(), 0));
}

cplx expectation(const FockOperator& op, const CMatrix& rho) {
  return (op.matrix().cwiseProduct(rho.transpose())).sum();
}

CMatrix partial_trace(const FockSpace& space, const CMatrix& rho, std::vector<int> keep) {
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (keep.empty()) throw Error(ErrorKind::InvalidArgument, "partial trace must keep at least one mode");
  FockSpace sub = space.subspace(keep);
  std::vector<bool> kept(space.num_modes() + 1, false);
  for (int m : keep) kept[m] = true;
  const auto d = space.dimension();
  CMatrix out = CMatrix::Zero(sub.dimension(), sub.dimension());
  std::vector<Eigen::Index> sub_index(d);
  std::vector<Eigen::Index> env_index(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    auto occ = space.occupations(i);
    std::vector<int> s;
    Eigen::Index env = 0;
    for (int m = 1; m <= space.num_modes(); ++m) {
      if (kept[m])
        s.push_back(occ[m - 1]);
      else
        env = env * (space.cutoff(m) + 1) + occ[m - 1];
    }
    sub_index[i] = sub.index(s);
    env_index[i] = env;
  }
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if (env_index[i] == env_index[j]) out(sub_index[i], sub_index[j]) += rho(i, j);
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep) {
  std::sort(keep.begin(), keep.end());
  FockSpace sub = rho.space().subspace(keep);
  return DensityMatrix(sub, partial_trace(rho.space(), rho.matrix(), keep), 1e-8);
}

CMatrix partial_transpose(const FockSpace& space, const CMatrix& rho, const Bipartition& cut) {
  cut.validate(space);
  const auto d = space.dimension();
  CMatrix out(d, d);
  std::vector<std::vector<int>> occ(d);
  for (Eigen::Index i = 0; i < d; ++i) occ[i] = space.occupations(i);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      auto oi = occ[i], oj = occ[j];
      for (int m : cut.s2) std::swap(oi[m - 1], oj[m - 1]);
      out(space.index(oi), space.index(oj)) = rho(i, j);
    }
  return out;
}

double trace_norm_hermitian(const CMatrix& m) {
  CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const CMatrix& a, const CMatrix& b) { return 0.5 * trace_norm_hermitian(a - b); }

}  // namespace nonrecip
