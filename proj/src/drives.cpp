#include "nonrecip/drives.hpp"

#include <cmath>
#include <string>

namespace nonrecip {

namespace {

bool resonant(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

double default_dt(double delta) { return 0.001 / std::abs(delta); }

double max_abs_eigenvalue(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

ParametricAmplitude parametric_drive_amplitude(const ParametricDriveSpec& spec) {
  if (!(spec.kappa_b > 0.0)) throw Error(ErrorKind::InvalidArgument, "parametric drive needs kappa_b > 0");
  cplx b_bar = spec.f_d / (-I * (spec.omega_d - spec.omega_b) + spec.kappa_b / 2.0);
  double mag = std::abs(b_bar);
  return {b_bar, spec.g * mag, mag > 0.0 ? std::arg(b_bar) : 0.0};
}

cplx rwa_effective_coupling(const CouplingModSpec& spec) {
  if (!resonant(spec.omega_d, spec.omega2 - spec.omega1))
    throw Error(ErrorKind::PreconditionViolation, "coupling modulation needs omega_D = omega2 - omega1");
  return spec.t_tilde * std::exp(-I * spec.phi);
}

cplx rwa_effective_coupling(const FreqModSpec& spec) {
  if (!resonant(spec.big_omega1, spec.omega2 - spec.omega1))
    throw Error(ErrorKind::PreconditionViolation, "frequency modulation needs Omega1 = omega2 - omega1");
  double z = spec.a1 / (spec.omega2 - spec.omega1);
  return -spec.t * std::cyl_bessel_j(1.0, z) * std::exp(-I * spec.phi);
}

CMatrix coupling_mod_hamiltonian(const CouplingModSpec& spec, double time) {
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 0) = spec.omega1;
  h(1, 1) = spec.omega2;
  double c = 2.0 * spec.t_tilde * std::cos(spec.omega_d * time + spec.phi);
  h(1, 0) = c;
  h(0, 1) = c;
  return h;
}

CMatrix freq_mod_hamiltonian(const FreqModSpec& spec, double time) {
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 0) = spec.omega1 + spec.a1 * std::cos(spec.big_omega1 * time + spec.phi);
  h(1, 1) = spec.omega2;
  h(1, 0) = -spec.t;
  h(0, 1) = -spec.t;
  return h;
}

CVector coupling_mod_rotating(const CouplingModSpec& spec, double time, const CVector& psi) {
  CVector out = psi;
  out(0) *= std::exp(I * (spec.omega1 * time));
  out(1) *= std::exp(I * (spec.omega2 * time));
  return out;
}

CVector freq_mod_rotating(const FreqModSpec& spec, double time, const CVector& psi) {
  CVector out = psi;
  double theta1 = spec.omega1 * time;
  if (spec.big_omega1 != 0.0) theta1 += spec.a1 / spec.big_omega1 * std::sin(spec.big_omega1 * time + spec.phi);
  out(0) *= std::exp(I * theta1);
  out(1) *= std::exp(I * (spec.omega2 * time));
  return out;
}

SingleExcitationRun simulate_single_excitation(const HamiltonianSource& h_of_t, const CVector& psi0,
                                               double t_final, double dt, int sample_every) {
  if (!(dt > 0.0) || !(t_final >= 0.0)) throw Error(ErrorKind::InvalidArgument, "need dt > 0 and t_final >= 0");
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw Error(ErrorKind::InvalidArgument, "initial state is not normalized");
  if (sample_every < 1) sample_every = 1;
  long steps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
  double h = steps > 0 ? t_final / steps : 0.0;
  const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
  const double c2 = 0.5 + std::sqrt(3.0) / 6.0;

  SingleExcitationRun run;
  CVector psi = psi0;
  run.times.push_back(0.0);
  run.states.push_back(psi);
  for (long n = 0; n < steps; ++n) {
    double t0 = n * h;
    CMatrix h1 = h_of_t(t0 + c1 * h);
    CMatrix h2 = h_of_t(t0 + c2 * h);
    if (h1.rows() != psi.size() || h1.cols() != psi.size() || h2.rows() != psi.size() || h2.cols() != psi.size())
      throw Error(ErrorKind::InvalidArgument, "Hamiltonian size does not match the state");
    if (hermiticity_defect(h1) > 1e-12 || hermiticity_defect(h2) > 1e-12)
      throw Error(ErrorKind::InvalidArgument, "Hamiltonian source returned a non-Hermitian matrix");
    double guard = h * std::max(max_abs_eigenvalue(h1), max_abs_eigenvalue(h2));
    if (guard >= 0.05)
      throw Error(ErrorKind::StepSize, "dt*max|H| = " + std::to_string(guard) + " exceeds 0.05");
    // Omega = -i K with K Hermitian
    CMatrix comm = h2 * h1 - h1 * h2;
    CMatrix k = 0.5 * h * (h1 + h2) - I * (std::sqrt(3.0) * h * h / 12.0) * comm;
    k = 0.5 * (k + k.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(k);
    CVector phases = (-I * es.eigenvalues().cast<cplx>()).array().exp();
    psi = es.eigenvectors() * (phases.asDiagonal() * (es.eigenvectors().adjoint() * psi));
    run.max_norm_error = std::max(run.max_norm_error, std::abs(psi.norm() - 1.0));
    if ((n + 1) % sample_every == 0 || n + 1 == steps) {
      run.times.push_back((n + 1) * h);
      run.states.push_back(psi);
    }
  }
  if (run.max_norm_error > 1e-8)
    throw Error(ErrorKind::IntegrationFailure, "norm drift " + std::to_string(run.max_norm_error));
  return run;
}

TransferFit first_transfer_maximum(const SingleExcitationRun& run) {
  TransferFit fit;
  bool passed_half = false;
  for (std::size_t i = 0; i < run.states.size(); ++i) {
    double p2 = std::norm(run.states[i](1));
    if (p2 > fit.max_population) {
      fit.max_population = p2;
      fit.time_of_max = run.times[i];
    }
    if (p2 > 0.5) passed_half = true;
    if (passed_half && p2 < fit.max_population - 0.1) break;
  }
  if (!passed_half || fit.time_of_max <= 0.0)
    throw Error(ErrorKind::NoSolution, "no population-transfer maximum found in the simulated window");
  fit.rate = pi / (2.0 * fit.time_of_max);
  return fit;
}

CouplingModCheck check_coupling_modulation(const CouplingModSpec& spec, double dt) {
  cplx g = rwa_effective_coupling(spec);
  double delta = spec.omega2 - spec.omega1;
  if (dt <= 0.0) dt = default_dt(delta);
  double t_transfer = pi / (2.0 * spec.t_tilde);
  CVector psi0 = CVector::Zero(2);
  psi0(0) = 1.0;
  auto run = simulate_single_excitation([&](double tt) { return coupling_mod_hamiltonian(spec, tt); }, psi0,
                                        t_transfer, dt, 10);
  CouplingModCheck out;
  out.max_norm_error = run.max_norm_error;
  for (std::size_t i = 0; i < run.states.size(); ++i) {
    double rwa = std::pow(std::sin(std::abs(g) * run.times[i]), 2);
    out.max_deviation = std::max(out.max_deviation, std::abs(std::norm(run.states[i](1)) - rwa));
  }
  out.final_population = std::norm(run.states.back()(1));
  // rotating-frame amplitude of mode 2 is -i (g/|g|) sin(|g| t)
  CVector rot = coupling_mod_rotating(spec, run.times.back(), run.states.back());
  out.extracted_phase = std::arg(I * rot(1));
  out.expected_phase = std::arg(g);
  out.run = std::move(run);
  return out;
}

FreqModCheck check_frequency_modulation(const FreqModSpec& spec, double dt) {
  cplx g = rwa_effective_coupling(spec);
  double delta = spec.omega2 - spec.omega1;
  if (dt <= 0.0) dt = default_dt(delta);
  if (std::abs(g) == 0.0) throw Error(ErrorKind::InvalidArgument, "RWA coupling vanishes, no transfer to fit");
  double window = 1.5 * pi / (2.0 * std::abs(g));
  CVector psi0 = CVector::Zero(2);
  psi0(0) = 1.0;
  auto run = simulate_single_excitation([&](double tt) { return freq_mod_hamiltonian(spec, tt); }, psi0, window,
                                        dt, 1);
  FreqModCheck out;
  out.max_norm_error = run.max_norm_error;
  out.fitted_rate = first_transfer_maximum(run).rate;
  out.expected_rate = std::abs(g);
  out.relative_error = std::abs(out.fitted_rate - out.expected_rate) / out.expected_rate;
  return out;
}

ModulationFlux modulation_loop_flux(ModulationScheme scheme, const std::array<double, 3>& phases,
                                    const std::array<double, 3>& omegas) {
  auto combine = [&](const std::array<double, 3>& p) {
    return scheme == ModulationScheme::coupling ? p[0] + p[1] + p[2] : p[0] - p[1] - p[2];
  };
  // phase velocities under t -> t + tau
  std::array<double, 3> rates;
  if (scheme == ModulationScheme::coupling) {
    rates = {omegas[1] - omegas[0], omegas[2] - omegas[1], omegas[0] - omegas[2]};
  } else {
    rates = {omegas[1] - omegas[0], omegas[1] - omegas[2], omegas[2] - omegas[0]};
  }
  ModulationFlux out;
  out.flux = wrap_phase(combine(phases));
  for (int s = 0; s <= 200; ++s) {
    double tau = -10.0 + 0.1 * s;
    std::array<double, 3> shifted;
    for (int j = 0; j < 3; ++j) shifted[j] = phases[j] + rates[j] * tau;
    out.max_translation_drift =
        std::max(out.max_translation_drift, std::abs(wrap_phase(combine(shifted) - combine(phases))));
  }
  return out;
}

}  // namespace nonrecip
