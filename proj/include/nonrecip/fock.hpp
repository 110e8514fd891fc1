#pragma once

#include "nonrecip/core.hpp"

#include <string>
#include <vector>

namespace nonrecip {

class FockSpace {
 public:
  FockSpace() = default;
  FockSpace(int num_modes, int cutoff);
  explicit FockSpace(std::vector<int> cutoffs);

  int num_modes() const { return static_cast<int>(cutoffs_.size()); }
  int cutoff(int mode) const;  // 1-based
  const std::vector<int>& cutoffs() const { return cutoffs_; }
  Eigen::Index dimension() const { return dim_; }

  /// Mode 1 varies slowest.
  Eigen::Index index(const std::vector<int>& occupations) const;
  std::vector<int> occupations(Eigen::Index index) const;
  /// Space of the listed modes, in the order given.
  FockSpace subspace(const std::vector<int>& modes) const;

  bool operator==(const FockSpace& o) const { return cutoffs_ == o.cutoffs_; }
  bool operator!=(const FockSpace& o) const { return !(*this == o); }

 private:
  std::vector<int> cutoffs_;
  Eigen::Index dim_ = 1;
};

class FockOperator {
 public:
  FockOperator() = default;
  FockOperator(FockSpace space, CMatrix matrix, std::string label);

  const FockSpace& space() const { return space_; }
  const CMatrix& matrix() const { return matrix_; }
  const std::string& label() const { return label_; }

  FockOperator adjoint() const;
  bool is_hermitian(double tol = 1e-12) const;
  FockOperator relabeled(std::string label) const { return {space_, matrix_, std::move(label)}; }

  FockOperator operator+(const FockOperator& o) const;
  FockOperator operator-(const FockOperator& o) const;
  FockOperator operator*(const FockOperator& o) const;
  FockOperator operator-() const;
  friend FockOperator operator*(cplx s, const FockOperator& op);
  friend FockOperator operator*(const FockOperator& op, cplx s) { return s * op; }

 private:
  void require_same_space(const FockOperator& o) const;

  FockSpace space_;
  CMatrix matrix_;
  std::string label_;
};

FockOperator mode_annihilation(const FockSpace& space, int mode);
FockOperator mode_creation(const FockSpace& space, int mode);
FockOperator number_operator(const FockSpace& space, int mode);
FockOperator identity_operator(const FockSpace& space);
FockOperator zero_operator(const FockSpace& space);
/// Places a matrix acting on a single mode into the full space.
FockOperator embed_local(const FockSpace& space, int mode, const CMatrix& local, const std::string& label);
/// Places a matrix acting on a contiguous block of modes [first, last] into the full space.
FockOperator embed_block(const FockSpace& space, int first, int last, const CMatrix& local, const std::string& label);

CMatrix commutator(const CMatrix& a, const CMatrix& b);

struct Bipartition {
  std::vector<int> s1;
  std::vector<int> s2;

  void validate(const FockSpace& space) const;
  /// {1} | {2..n}
  static Bipartition first_mode(const FockSpace& space);
};

/// True when op commutes exactly (tol) with a_j and a_j^dagger for every listed mode.
bool acts_trivially_on(const FockOperator& op, const std::vector<int>& modes, double tol = 1e-12);

/// Parses expressions such as "a_1 - i*adjoint(a_2)" or "0.5*(a1 + a1^dag)".
/// Grammar: sums and products, unary minus, parentheses, reals, i, a_j, a_j^dag,
/// n_j, id, adjoint(...), dag(...).
FockOperator parse_operator(const FockSpace& space, const std::string& expr);

}  // namespace nonrecip
