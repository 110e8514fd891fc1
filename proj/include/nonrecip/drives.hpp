#pragma once

#include "nonrecip/core.hpp"

#include <array>
#include <functional>
#include <vector>

namespace nonrecip {

struct CouplingModSpec {
  double omega1 = 0.0;
  double omega2 = 1.0;
  double t_tilde = 0.01;
  double omega_d = 1.0;
  double phi = 0.0;

  double rwa_ratio() const { return t_tilde / std::abs(omega2 - omega1); }
};

struct FreqModSpec {
  double omega1 = 0.0;
  double omega2 = 1.0;
  double a1 = 0.0;
  double big_omega1 = 1.0;
  double phi = 0.0;
  double t = 0.01;
};

struct ParametricDriveSpec {
  double g = 1.0;
  cplx f_d = 1.0;
  double omega_d = 0.0;
  double omega_b = 0.0;
  double kappa_b = 1.0;
};

struct ParametricAmplitude {
  cplx b_bar;
  double t_tilde;
  double phi;
};

ParametricAmplitude parametric_drive_amplitude(const ParametricDriveSpec& spec);

/// Coefficient of a2^dagger a1 in the rotating-frame RWA Hamiltonian.
cplx rwa_effective_coupling(const CouplingModSpec& spec);
cplx rwa_effective_coupling(const FreqModSpec& spec);

/// Lab-frame single-excitation Hamiltonians (2x2).
CMatrix coupling_mod_hamiltonian(const CouplingModSpec& spec, double time);
CMatrix freq_mod_hamiltonian(const FreqModSpec& spec, double time);

/// Lab-frame amplitudes mapped into the rotating frame of the RWA Hamiltonian.
CVector coupling_mod_rotating(const CouplingModSpec& spec, double time, const CVector& psi);
CVector freq_mod_rotating(const FreqModSpec& spec, double time, const CVector& psi);

struct SingleExcitationRun {
  std::vector<double> times;
  std::vector<CVector> states;
  double max_norm_error = 0.0;
};

using HamiltonianSource = std::function<CMatrix(double)>;

/// Fourth-order Magnus propagation with exact exponentials of each step generator.
SingleExcitationRun simulate_single_excitation(const HamiltonianSource& h_of_t, const CVector& psi0,
                                               double t_final, double dt, int sample_every = 1);

struct TransferFit {
  double time_of_max = 0.0;
  double max_population = 0.0;
  double rate = 0.0;  // pi / (2 time_of_max)
};

/// Locates the first population-transfer maximum of |psi_2|^2.
TransferFit first_transfer_maximum(const SingleExcitationRun& run);

struct CouplingModCheck {
  double max_deviation = 0.0;  // max |P2 - sin^2(t~ t)| over [0, pi/(2 t~)]
  double final_population = 0.0;
  double extracted_phase = 0.0;
  double expected_phase = 0.0;
  double max_norm_error = 0.0;
  SingleExcitationRun run;
};

/// Simulates the coupling-modulation spec from mode 1 over one transfer and compares with the RWA.
CouplingModCheck check_coupling_modulation(const CouplingModSpec& spec, double dt = 0.0);

struct FreqModCheck {
  double fitted_rate = 0.0;
  double expected_rate = 0.0;
  double relative_error = 0.0;
  double max_norm_error = 0.0;
};

FreqModCheck check_frequency_modulation(const FreqModSpec& spec, double dt = 0.0);

enum class ModulationScheme { coupling, frequency };

struct ModulationFlux {
  double flux = 0.0;
  double max_translation_drift = 0.0;
};

/// Loop flux of three modulation phases, plus the drift of the flux when the time origin
/// shifts over a grid of tau values. omegas are the three mode frequencies.
ModulationFlux modulation_loop_flux(ModulationScheme scheme, const std::array<double, 3>& phases,
                                    const std::array<double, 3>& omegas = {1.0, 1.37, 2.11});

}  // namespace nonrecip
