#pragma once

#include "nonrecip/lattice.hpp"

#include <vector>

namespace nonrecip {

struct NonHermitianMatrix {
  CMatrix hermitian;
  RVector kappa;

  CMatrix anti_hermitian() const;  // -i diag(kappa/2)
  CMatrix full() const { return hermitian + anti_hermitian(); }
};

NonHermitianMatrix effective_hamiltonian(const LatticeModel& model);

struct ScatteringResult {
  double omega = 0.0;
  CMatrix s;
  CMatrix greens;
};

CMatrix greens_function(const LatticeModel& model, double omega);
ScatteringResult smatrix(const LatticeModel& model, double omega);

/// Half-open grid start + i (stop - start) / count, i < count. Points run in parallel.
std::vector<ScatteringResult> frequency_sweep(const LatticeModel& model, double start, double stop, int count);

/// Eigenmode pole sum for the uniform ring built by ring3(t, flux/3, 0, kappa).
CMatrix pole_expansion(double t, double flux, double kappa, double omega);

enum class Circulation { forward, reverse };

struct DirectionalityTuning {
  double flux = 0.0;
  double kappa = 0.0;
};

/// Forward returns the (0, pi) branch that kills G^R[2,1]; reverse mirrors the flux.
DirectionalityTuning directionality_tuning(double t, double omega, Circulation dir = Circulation::forward);

struct TrajectoryAmplitudes {
  cplx q1, q2;
  cplx q1_reverse, q2_reverse;
};

TrajectoryAmplitudes trajectory_amplitudes(double t, double phi, double kappa, double omega);

struct AllOrdersDecomposition {
  cplx q1_tot, q2_tot, z22;
  double residual = 0.0;
};

AllOrdersDecomposition all_orders_decomposition(const LatticeModel& ring, double omega);

}  // namespace nonrecip
