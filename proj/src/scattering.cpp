#include "nonrecip/scattering.hpp"

#include "nonrecip/parallel.hpp"

#include <cmath>
#include <sstream>

namespace nonrecip {

CMatrix NonHermitianMatrix::anti_hermitian() const {
  CMatrix d = CMatrix::Zero(kappa.size(), kappa.size());
  for (Eigen::Index j = 0; j < kappa.size(); ++j) d(j, j) = -I * (kappa(j) / 2.0);
  return d;
}

NonHermitianMatrix effective_hamiltonian(const LatticeModel& model) {
  NonHermitianMatrix m;
  m.hermitian = build_hamiltonian(model);
  m.kappa = Eigen::Map<const RVector>(model.port_rates.data(), model.num_sites);
  return m;
}

CMatrix greens_function(const LatticeModel& model, double omega) {
  CMatrix h_eff = effective_hamiltonian(model).full();
  const auto n = h_eff.rows();
  CMatrix a = omega * CMatrix::Identity(n, n) - h_eff;
  Eigen::PartialPivLU<CMatrix> lu(a);
  double rcond = lu.rcond();
  if (!(rcond > 1e-13)) {
    std::ostringstream msg;
    msg << "resolvent is singular at omega=" << omega << " (condition number ~" << (rcond > 0 ? 1.0 / rcond : INFINITY)
        << ")";
    throw Error(ErrorKind::NumericalSingularity, msg.str());
  }
  return lu.solve(CMatrix::Identity(n, n));
}

ScatteringResult smatrix(const LatticeModel& model, double omega) {
  ScatteringResult r;
  r.omega = omega;
  r.greens = greens_function(model, omega);
  const int n = model.num_sites;
  RVector sqrt_k(n);
  for (int j = 0; j < n; ++j) sqrt_k(j) = std::sqrt(model.port_rates[j]);
  r.s = CMatrix::Identity(n, n) - I * (sqrt_k.asDiagonal() * r.greens * sqrt_k.asDiagonal());
  return r;
}

std::vector<ScatteringResult> frequency_sweep(const LatticeModel& model, double start, double stop, int count) {
  if (count < 1) throw Error(ErrorKind::InvalidArgument, "sweep count must be positive");
  model.validate();
  std::vector<ScatteringResult> out(count);
  parallel_for(count, [&](std::size_t i) { out[i] = smatrix(model, start + (stop - start) * double(i) / count); });
  return out;
}

CMatrix pole_expansion(double t, double flux, double kappa, double omega) {
  RingSpectrum spec = ring_spectrum(t, flux);
  CMatrix g = CMatrix::Zero(3, 3);
  for (int m = 0; m < 3; ++m) {
    cplx denom = omega - spec.energies[m] + I * (kappa / 2.0);
    g += spec.eigenvectors.col(m) * spec.eigenvectors.col(m).adjoint() / denom;
  }
  return g;
}

DirectionalityTuning directionality_tuning(double t, double omega, Circulation dir) {
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "tuning needs t > 0");
  if (!(std::abs(omega) < t))
    throw Error(ErrorKind::NoSolution, "no directional point for |omega| >= t (kappa would vanish)");
  DirectionalityTuning d;
  d.kappa = 2.0 * std::sqrt(t * t - omega * omega);
  d.flux = std::atan2(d.kappa / 2.0, omega);
  if (dir == Circulation::reverse) d.flux = -d.flux;
  return d;
}

TrajectoryAmplitudes trajectory_amplitudes(double t, double phi, double kappa, double omega) {
  if (kappa < 0.0) throw Error(ErrorKind::InvalidArgument, "kappa must be >= 0");
  cplx g0 = 1.0 / (omega + I * (kappa / 2.0));
  auto amps = [&](double p, cplx& q1, cplx& q2) {
    q1 = g0 * (-t * std::exp(-I * p)) * g0;
    q2 = g0 * (-t * std::exp(I * p)) * g0 * (-t * std::exp(I * p)) * g0;
  };
  TrajectoryAmplitudes a;
  amps(phi, a.q1, a.q2);
  amps(-phi, a.q1_reverse, a.q2_reverse);
  return a;
}

AllOrdersDecomposition all_orders_decomposition(const LatticeModel& ring, double omega) {
  if (ring.num_sites != 3) throw Error(ErrorKind::InvalidArgument, "all_orders_decomposition needs a 3-site ring");
  CMatrix h = build_hamiltonian(ring);
  CMatrix g = greens_function(ring, omega);
  // off-diagonal couplings scaled by each row's detuned denominator
  cplx d2 = omega - h(1, 1) + I * (ring.port_rates[1] / 2.0);
  cplx d3 = omega - h(2, 2) + I * (ring.port_rates[2] / 2.0);
  cplx r21 = h(1, 0) / d2, r23 = h(1, 2) / d2;
  cplx r31 = h(2, 0) / d3, r32 = h(2, 1) / d3;
  AllOrdersDecomposition out;
  out.z22 = 1.0 / (1.0 - r23 * r32);
  out.q1_tot = out.z22 * r21 * g(0, 0);
  out.q2_tot = out.z22 * r23 * r31 * g(0, 0);
  out.residual = std::abs(out.q1_tot + out.q2_tot - g(1, 0));
  return out;
}

}  // namespace nonrecip
