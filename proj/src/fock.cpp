#include "nonrecip/fock.hpp"

#include <cmath>

namespace nonrecip {

FockSpace::FockSpace(int num_modes, int cutoff) : FockSpace(std::vector<int>(std::max(num_modes, 0), cutoff)) {
  if (num_modes < 1) throw Error(ErrorKind::InvalidArgument, "FockSpace needs at least one mode");
}

FockSpace::FockSpace(std::vector<int> cutoffs) : cutoffs_(std::move(cutoffs)) {
  if (cutoffs_.empty()) throw Error(ErrorKind::InvalidArgument, "FockSpace needs at least one mode");
  dim_ = 1;
  for (int c : cutoffs_) {
    if (c < 1) throw Error(ErrorKind::InvalidArgument, "per-mode cutoff must be >= 1");
    dim_ *= (c + 1);
  }
  if (dim_ > 4096) throw Error(ErrorKind::InvalidArgument, "Fock space dimension above 4096 is not supported");
}

int FockSpace::cutoff(int mode) const {
  if (mode < 1 || mode > num_modes()) throw Error(ErrorKind::InvalidArgument, "mode index out of range");
  return cutoffs_[mode - 1];
}

Eigen::Index FockSpace::index(const std::vector<int>& occ) const {
  if (occ.size() != cutoffs_.size()) throw Error(ErrorKind::InvalidArgument, "occupation vector has wrong length");
  Eigen::Index idx = 0;
  for (std::size_t m = 0; m < cutoffs_.size(); ++m) {
    if (occ[m] < 0 || occ[m] > cutoffs_[m]) throw Error(ErrorKind::InvalidArgument, "occupation above cutoff");
    idx = idx * (cutoffs_[m] + 1) + occ[m];
  }
  return idx;
}

std::vector<int> FockSpace::occupations(Eigen::Index index) const {
  std::vector<int> occ(cutoffs_.size());
  for (int m = num_modes() - 1; m >= 0; --m) {
    occ[m] = static_cast<int>(index % (cutoffs_[m] + 1));
    index /= (cutoffs_[m] + 1);
  }
  return occ;
}

FockSpace FockSpace::subspace(const std::vector<int>& modes) const {
  std::vector<int> c;
  for (int m : modes) c.push_back(cutoff(m));
  return FockSpace(c);
}

FockOperator::FockOperator(FockSpace space, CMatrix matrix, std::string label)
    : space_(std::move(space)), matrix_(std::move(matrix)), label_(std::move(label)) {
  if (matrix_.rows() != space_.dimension() || matrix_.cols() != space_.dimension())
    throw Error(ErrorKind::InvalidArgument, "operator matrix does not match the space dimension");
}

void FockOperator::require_same_space(const FockOperator& o) const {
  if (space_ != o.space_) throw Error(ErrorKind::InvalidArgument, "operators live on different Fock spaces");
}

FockOperator FockOperator::adjoint() const {
  std::string l = label_;
  if (l.size() > 9 && l.rfind("adjoint(", 0) == 0 && l.back() == ')')
    l = l.substr(8, l.size() - 9);
  else
    l = "adjoint(" + l + ")";
  return {space_, matrix_.adjoint(), l};
}

bool FockOperator::is_hermitian(double tol) const { return hermiticity_defect(matrix_) < tol; }

FockOperator FockOperator::operator+(const FockOperator& o) const {
  require_same_space(o);
  return {space_, matrix_ + o.matrix_, "(" + label_ + " + " + o.label_ + ")"};
}

FockOperator FockOperator::operator-(const FockOperator& o) const {
  require_same_space(o);
  return {space_, matrix_ - o.matrix_, "(" + label_ + " - " + o.label_ + ")"};
}

FockOperator FockOperator::operator*(const FockOperator& o) const {
  require_same_space(o);
  return {space_, matrix_ * o.matrix_, label_ + "*" + o.label_};
}

FockOperator FockOperator::operator-() const { return {space_, -matrix_, "-" + label_}; }

FockOperator operator*(cplx s, const FockOperator& op) {
  std::string tag = s.imag() == 0.0 ? std::to_string(s.real())
                                    : "(" + std::to_string(s.real()) + (s.imag() < 0 ? "" : "+") +
                                          std::to_string(s.imag()) + "i)";
  return {op.space_, s * op.matrix_, tag + "*" + op.label_};
}

FockOperator embed_block(const FockSpace& space, int first, int last, const CMatrix& local, const std::string& label) {
  if (first < 1 || last > space.num_modes() || first > last)
    throw Error(ErrorKind::InvalidArgument, "mode block out of range");
  Eigen::Index before = 1, block = 1, after = 1;
  for (int m = 1; m <= space.num_modes(); ++m) {
    Eigen::Index d = space.cutoff(m) + 1;
    if (m < first)
      before *= d;
    else if (m <= last)
      block *= d;
    else
      after *= d;
  }
  if (local.rows() != block || local.cols() != block)
    throw Error(ErrorKind::InvalidArgument, "local matrix does not match the mode block");
  CMatrix full = kron(kron(CMatrix::Identity(before, before), local), CMatrix::Identity(after, after));
  return {space, full, label};
}

FockOperator embed_local(const FockSpace& space, int mode, const CMatrix& local, const std::string& label) {
  return embed_block(space, mode, mode, local, label);
}

FockOperator mode_annihilation(const FockSpace& space, int mode) {
  if (mode < 1 || mode > space.num_modes())
    throw Error(ErrorKind::InvalidArgument, "mode " + std::to_string(mode) + " out of range");
  int c = space.cutoff(mode);
  CMatrix a = CMatrix::Zero(c + 1, c + 1);
  for (int n = 1; n <= c; ++n) a(n - 1, n) = std::sqrt(double(n));
  return embed_local(space, mode, a, "a_" + std::to_string(mode));
}

FockOperator mode_creation(const FockSpace& space, int mode) { return mode_annihilation(space, mode).adjoint(); }

FockOperator number_operator(const FockSpace& space, int mode) {
  auto a = mode_annihilation(space, mode);
  return (a.adjoint() * a).relabeled("n_" + std::to_string(mode));
}

FockOperator identity_operator(const FockSpace& space) {
  return {space, CMatrix::Identity(space.dimension(), space.dimension()), "id"};
}

FockOperator zero_operator(const FockSpace& space) {
  return {space, CMatrix::Zero(space.dimension(), space.dimension()), "0"};
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

void Bipartition::validate(const FockSpace& space) const {
  std::vector<int> seen(space.num_modes() + 1, 0);
  for (const auto* set : {&s1, &s2})
    for (int m : *set) {
      if (m < 1 || m > space.num_modes()) throw Error(ErrorKind::InvalidArgument, "bipartition mode out of range");
      if (seen[m]++) throw Error(ErrorKind::InvalidArgument, "bipartition sets overlap");
    }
  for (int m = 1; m <= space.num_modes(); ++m)
    if (!seen[m]) throw Error(ErrorKind::InvalidArgument, "bipartition does not cover mode " + std::to_string(m));
  if (s1.empty() || s2.empty()) throw Error(ErrorKind::InvalidArgument, "bipartition sides must be non-empty");
}

Bipartition Bipartition::first_mode(const FockSpace& space) {
  Bipartition b;
  b.s1 = {1};
  for (int m = 2; m <= space.num_modes(); ++m) b.s2.push_back(m);
  return b;
}

bool acts_trivially_on(const FockOperator& op, const std::vector<int>& modes, double tol) {
  for (int m : modes) {
    const CMatrix a = mode_annihilation(op.space(), m).matrix();
    if (commutator(op.matrix(), a).cwiseAbs().maxCoeff() > tol) return false;
    if (commutator(op.matrix(), a.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

}  // namespace nonrecip
