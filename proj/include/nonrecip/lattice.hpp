#pragma once

#include "nonrecip/core.hpp"

#include <json.hpp>

#include <vector>

namespace nonrecip {

/// t_{jj'} is the coefficient of a_j^dagger a_{j'} (with a minus sign in H).
/// Stored once per pair with from = j > to = j'.
struct Hopping {
  int from;
  int to;
  cplx amplitude;
};

struct LatticeModel {
  int num_sites = 0;
  std::vector<double> onsite_freq;
  std::vector<Hopping> hoppings;
  std::vector<double> port_rates;

  void validate() const;
  /// Amplitude t_{ab} for any ordered pair, conj applied for a < b. Throws if absent.
  cplx hopping(int a, int b) const;
  bool has_bond(int a, int b) const;
};

struct GaugeTransform {
  std::vector<double> phases;
};

struct RingSpectrum {
  std::vector<int> labels;  // m = -1, 0, 1
  std::vector<double> wavevectors;
  std::vector<double> energies;
  CMatrix eigenvectors;  // column per label
  double flux = 0.0;
};

/// Three-site ring with H_{j+1,j} = -t e^{-i phi}, so the loop flux is 3 phi.
LatticeModel ring3(double t, double phi, double onsite = 0.0, double kappa = 0.0);
/// Same loop flux as ring3(t, flux/3) but carried entirely by the 3-1 bond, so the
/// hoppings are real whenever flux is 0 or pi.
LatticeModel ring3_bond_flux(double t, double flux, double onsite = 0.0, double kappa = 0.0);
/// Uniform-hopping open ring of N sites (periodic), real t.
LatticeModel uniform_ring(int n, double t);

CMatrix build_hamiltonian(const LatticeModel& model);
LatticeModel apply_gauge(const LatticeModel& model, const GaugeTransform& g);
double loop_flux(const LatticeModel& model, const std::vector<int>& cycle);
RingSpectrum ring_spectrum(double t, double flux);
double band_curvature(double t, double lattice_const);

nlohmann::json lattice_to_json(const LatticeModel& model);
LatticeModel lattice_from_json(const nlohmann::json& doc);

}  // namespace nonrecip
