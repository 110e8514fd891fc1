#pragma once

#include "nonrecip/density.hpp"
#include "nonrecip/fock.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace nonrecip {

struct Jump {
  double rate = 0.0;
  FockOperator op;
};

struct LindbladModel {
  FockSpace space;
  FockOperator hamiltonian;
  std::vector<Jump> jumps;

  void validate() const;
};

CMatrix dissipator(const FockOperator& l, const CMatrix& rho);
CMatrix dissipator(const FockOperator& l, const DensityMatrix& rho);

/// Dense action of the generator on rho.
CMatrix apply_liouvillian(const LindbladModel& model, const CMatrix& rho);
/// d^2 x d^2 generator on column-stacked rho.
SparseCMatrix liouvillian(const LindbladModel& model);
SparseCMatrix dissipator_superoperator(const FockOperator& l);

struct EffectiveCouplings {
  cplx lambda12;  // seen by system 1
  cplx lambda21;  // seen by system 2

  bool directional(double tol = 1e-12) const { return std::abs(std::abs(lambda12) - std::abs(lambda21)) > tol; }
};

EffectiveCouplings effective_couplings(double lambda, double gamma, double theta);

struct Pretuned {
  double gamma = 0.0;
  double theta = 0.0;
};
/// sign = +1 picks the upper sign of the jump (system 1 drives system 2).
struct Directional {
  double eta = 1.0;
  int sign = 1;
};
struct Conjugated {
  double eta = 1.0;
  int sign = 1;
};
using NonreciprocalVariant = std::variant<Pretuned, Directional, Conjugated>;

struct NonreciprocalModel {
  LindbladModel model;
  FockOperator o1, o2;
  double lambda = 0.0;
  Bipartition cut;
  // interaction jump is model.jumps[0] = rate * D[p + q]
  double rate = 0.0;
  FockOperator p, q;
  EffectiveCouplings couplings;
};

/// Complex lambda is canonicalized real-positive by absorbing its phase into O1.
NonreciprocalModel build_nonreciprocal(const FockOperator& o1, const FockOperator& o2, cplx lambda,
                                       const NonreciprocalVariant& variant,
                                       std::optional<Bipartition> cut = std::nullopt);

struct Evolution {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  double max_trace_drift = 0.0;
};

/// dt * (|H| + sum rate |L|^2) = safety.
double stable_dt(const LindbladModel& model, double safety = 0.05);

/// Classical RK4 on the generator; samples every `sample_every` steps plus the last step.
Evolution evolve(const LindbladModel& model, const DensityMatrix& rho0, double t_final, double dt,
                 int sample_every = 1);

struct SteadyStateInfo {
  double sigma_min = 0.0;  // smallest singular value (or eigenvalue modulus) of the bordered generator
  double residual = 0.0;
  bool iterative = false;
};

DensityMatrix steady_state(const LindbladModel& model, SteadyStateInfo* info = nullptr);

FockOperator nonhermitian_part(const LindbladModel& model);

/// Matrix elements <1_j| op |1_k> in the one-excitation sector.
CMatrix single_excitation_matrix(const FockOperator& op);

LindbladModel ring_master_equation(double t, double flux, double kappa_tilde, const FockSpace& space);

enum class Adiabaticity { ok, marginal, violated };

struct AdiabaticElimination {
  double kappa_tilde = 0.0;
  cplx t12, t21;
  LindbladModel model;
  double guard_ratio = 0.0;
  Adiabaticity level = Adiabaticity::ok;
  std::string warning;
};

AdiabaticElimination adiabatic_eliminate(double t, double t_prime, double phi, double kappa1, double kappa2,
                                         double kappa3, const FockSpace& space = FockSpace(2, 1));

/// Three-mode ring with the lossy third mode kept explicitly.
LindbladModel three_mode_model(double t, double t_prime, double phi, double kappa1, double kappa2, double kappa3,
                               const FockSpace& space = FockSpace(3, 1));

struct AdiabaticComparison {
  double rel_err_a1 = 0.0;
  double rel_err_a2 = 0.0;
  double max_rel_err = 0.0;
  AdiabaticElimination elimination;
  std::vector<double> times;
  std::vector<cplx> full_a1, full_a2, reduced_a1, reduced_a2;
};

/// Integrates both models from (|0> + alpha|1_1> + beta|1_2>)/N on cutoff-1 spaces and compares
/// <a1>, <a2>. Relative error is max_t |diff| / max_t |full| per mode.
AdiabaticComparison compare_adiabatic(double t, double t_prime, double phi, double kappa1, double kappa2,
                                      double kappa3, double t_final, cplx alpha = 0.6, cplx beta = 0.3);

/// |tr(X L rho) - decomposition| for a probe local to one subsystem.
double mean_value_eom_check(const NonreciprocalModel& nr, const FockOperator& probe, const CMatrix& rho);

}  // namespace nonrecip
