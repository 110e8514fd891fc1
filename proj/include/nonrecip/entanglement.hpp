#pragma once

#include "nonrecip/lindblad.hpp"

#include <cstdint>
#include <vector>

namespace nonrecip {

double negativity(const FockSpace& space, const CMatrix& rho, const Bipartition& cut);
inline double negativity(const DensityMatrix& rho, const Bipartition& cut) {
  return negativity(rho.space(), rho.matrix(), cut);
}

struct LoccCase {
  std::uint64_t seed = 0;
  double max_negativity = 0.0;
  bool pass = false;
};

struct LoccReport {
  std::vector<LoccCase> cases;
  double max_negativity = 0.0;
  bool all_pass = true;
  double control_negativity = 0.0;  // non-Hermitian cascaded control, should be > 0
};

/// Random Hermitian local couplings in a directional model never entangle product states.
LoccReport locc_suite(int num_cases, std::uint64_t seed, bool with_control = true);

/// Max negativity along an evolution of the driven cascaded pair from vacuum.
double cascaded_control_negativity(double lambda, cplx drive, int cutoff, double t_final);

struct CascadedScenario {
  LindbladModel model;
  DensityMatrix rho_ss;
  double negativity = 0.0;
  double top_population = 0.0;
};

inline constexpr cplx default_two_photon_drive{0.0, 0.08};

/// Directional cascaded pair (O1 = a1, O2 = a2^dagger) plus (d_j a_j^dagger^2 + h.c.)/2.
LindbladModel cascaded_model(double lambda, cplx drive1, cplx drive2, int cutoff);
CascadedScenario cascaded_entanglement_scenario(double lambda, cplx drive1, cplx drive2, int cutoff);

}  // namespace nonrecip
