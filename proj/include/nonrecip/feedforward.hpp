#pragma once

#include "nonrecip/lindblad.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nonrecip {

struct FeedforwardSpec {
  FockOperator a1;  // measured, Hermitian, system 1
  FockOperator f2;  // feedforward force, Hermitian, system 2
  double k = 1.0;
  double gamma = 1.0;
  double dt = 1e-3;
  std::uint64_t seed = 0;

  void validate(const Bipartition& cut) const;
};

/// One measurement update followed by the feedforward kick for Wiener increment dW.
CMatrix conditional_step(const CMatrix& rho, const FeedforwardSpec& spec, double dw);
DensityMatrix conditional_step(const DensityMatrix& rho, const FeedforwardSpec& spec, double dw);

struct TrajectoryRecord {
  std::vector<double> times;  // n + 1 entries
  std::vector<double> dw;     // n entries
  std::vector<double> di;     // n entries
  std::vector<double> mean_a1;  // n + 1 entries
  std::vector<double> mean_f2;
  std::vector<std::vector<double>> observables;  // [observable][sample]
  CMatrix final_rho;
};

/// Euler-Maruyama chain. dW_n is drawn from Philox(seed, counter = (n, trajectory)).
TrajectoryRecord simulate_trajectory(const FeedforwardSpec& spec, const DensityMatrix& rho0, double t_final,
                                     std::uint64_t trajectory = 0,
                                     const std::vector<FockOperator>& observables = {}, int sample_every = 1);

/// The unconditional map applied literally, <A1> terms included.
CMatrix unconditional_rhs(const FeedforwardSpec& spec, const CMatrix& rho);
/// Superoperator built column by column from unconditional_rhs on matrix units.
SparseCMatrix unconditional_generator(const FeedforwardSpec& spec);

struct EquivalenceParameters {
  double lambda = 0.0;
  double eta = 0.0;
};

EquivalenceParameters equivalence_parameters(double k, double gamma);
/// Inverse map: k = 4 lambda eta, gamma = lambda / eta.
std::pair<double, double> feedforward_rates(double lambda, double eta);

/// Directional Lindblad model (upper sign, O1 = A1, O2 = F2) with the identified lambda, eta.
NonreciprocalModel equivalent_directional_model(const FeedforwardSpec& spec,
                                                std::optional<Bipartition> cut = std::nullopt);

struct ObservableSeries {
  std::string name;
  std::vector<double> times;
  std::vector<double> mean;
  std::vector<double> stderr_;
};

struct EnsembleReport {
  int num_trajectories = 0;
  double dt = 0.0;
  std::vector<ObservableSeries> observables;
};

/// Runs trajectories in parallel; means and variances use pairwise summation in trajectory order.
EnsembleReport run_ensemble(const FeedforwardSpec& spec, const DensityMatrix& rho0, double t_final,
                            int num_trajectories, const std::vector<FockOperator>& observables,
                            const std::vector<std::string>& names, int sample_every = 1);

struct EnsembleComparison {
  double max_z = 0.0;  // max |mean - deterministic| / stderr over checkpoints and observables
  std::vector<double> deterministic_final;
  bool within(double sigmas) const { return max_z < sigmas; }
};

/// Compares the ensemble with deterministic evolution under the unconditional generator at
/// each recorded time that is a multiple of `checkpoint` (0 = every sample).
EnsembleComparison compare_with_deterministic(const FeedforwardSpec& spec, const DensityMatrix& rho0,
                                              const EnsembleReport& report,
                                              const std::vector<FockOperator>& observables, double checkpoint);

}  // namespace nonrecip
