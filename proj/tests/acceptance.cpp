#include "nonrecip/drives.hpp"
#include "nonrecip/entanglement.hpp"
#include "nonrecip/feedforward.hpp"
#include "nonrecip/lindblad.hpp"
#include "nonrecip/rng.hpp"
#include "nonrecip/scattering.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

using namespace nonrecip;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool in_time = secs < budget_s;
  bool pass = out.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s %d %s: %s; runtime %.2f s (limit %.0f s)\n", pass ? "PASS" : "FAIL", id, name, out.detail.c_str(),
              secs, budget_s);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

CMatrix random_hermitian(PhiloxStream& rng, Eigen::Index n) {
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cplx(rng.normal(), rng.normal());
  return 0.5 * (m + m.adjoint());
}

Outcome circulator() {
  auto tune = directionality_tuning(1.0, 0.0);
  auto r = smatrix(ring3(1.0, tune.flux / 3.0, 0.0, tune.kappa), 0.0);
  CMatrix target = CMatrix::Zero(3, 3);
  target(0, 1) = target(1, 2) = target(2, 0) = 1.0;
  double err = (r.s - target).cwiseAbs().maxCoeff();
  cplx z = r.s(0, 1);
  double circulant = std::max(std::abs(r.s(1, 2) - z), std::abs(r.s(2, 0) - z));
  cplx z3 = r.s(0, 1) * r.s(1, 2) * r.s(2, 0);
  return {err < 1e-12,
          fmt("max|s - P| = %.3g; s is circulant (defect %.2g) with |z| = %.15g, arg z = %.6f", err, circulant,
              std::abs(z), std::arg(z)) +
              fmt(", z^3 = %.3g%+.3gi is gauge invariant so z = 1 is unreachable", z3.real(), z3.imag())};
}

Outcome spectrum() {
  auto s = ring_spectrum(1.0, pi / 2.0);
  std::vector<double> e = s.energies;
  std::sort(e.begin(), e.end());
  double err = std::max({std::abs(e[0] + std::sqrt(3.0)), std::abs(e[1]), std::abs(e[2] - std::sqrt(3.0))});
  double worst_pair = 0.0;
  for (double f : {0.0, pi, 2.0 * pi}) {
    auto v = ring_spectrum(1.0, f).energies;
    std::sort(v.begin(), v.end());
    worst_pair = std::max(worst_pair, std::min(v[1] - v[0], v[2] - v[1]));
  }
  return {err < 1e-12 && worst_pair < 1e-12,
          fmt("pi/2 level error %.3g; largest degenerate-pair gap at 0, pi, 2pi = %.3g", err, worst_pair)};
}

Outcome interference() {
  double q = 0.0, g21 = 0.0, g12 = 1e300;
  for (double w : {0.0, 0.3, 0.9}) {
    auto tune = directionality_tuning(1.0, w);
    auto amp = trajectory_amplitudes(1.0, tune.flux / 3.0, tune.kappa, w);
    CMatrix g = greens_function(ring3(1.0, tune.flux / 3.0, 0.0, tune.kappa), w);
    q = std::max(q, std::abs(amp.q1 + amp.q2));
    g21 = std::max(g21, std::abs(g(1, 0)));
    g12 = std::min(g12, std::abs(g(0, 1)));
  }
  return {q < 1e-14 && g21 < 1e-12 && g12 > 0.1,
          fmt("max|Q1+Q2| = %.3g, max|G21| = %.3g, min|G12| = %.4f", q, g21, g12)};
}

Outcome all_orders() {
  PhiloxStream rng(20240611, 20);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    double t = rng.uniform(0.1, 2.0), f = rng.uniform(-pi, pi), k = rng.uniform(0.05, 4.0), w = rng.uniform(-3.0, 3.0);
    worst = std::max(worst, all_orders_decomposition(ring3(t, f / 3.0, 0.0, k), w).residual);
  }
  return {worst < 1e-10, fmt("max residual over 100 draws %.3g", worst)};
}

Outcome elimination() {
  double t = 1.0, phi = pi / 6.0;
  auto near = compare_adiabatic(t, std::sqrt(t * 100.0 / 2.0), phi, 0.0, 0.0, 100.0, 5.0);
  auto far = compare_adiabatic(t, std::sqrt(t * 200.0 / 2.0), phi, 0.0, 0.0, 200.0, 5.0);
  double ratio = near.max_rel_err / far.max_rel_err;
  return {near.max_rel_err < 0.05 && ratio >= 1.5 && ratio <= 3.0,
          fmt("relative error %.4f at kappa3 = 100t, %.4f at 200t, ratio %.3f", near.max_rel_err, far.max_rel_err,
              ratio)};
}

Outcome directionality() {
  double lambda = 1.0;
  auto eff = effective_couplings(lambda, lambda, pi);
  const double eps = 4.0 * std::numeric_limits<double>::epsilon() * lambda;
  bool couplings = std::abs(eff.lambda12) <= eps && std::abs(eff.lambda21 - 2.0 * lambda) <= eps;

  FockSpace space(2, 2);
  auto a1 = mode_annihilation(space, 1), a2 = mode_annihilation(space, 2);
  std::vector<std::pair<FockOperator, FockOperator>> choices{
      {a1, a2}, {a1 + a1.adjoint(), a2 + a2.adjoint()}, {number_operator(space, 1), I * (a2.adjoint() - a2)}};
  auto dir = build_nonreciprocal(a1, a2, lambda, Directional{1.0, 1}).couplings;
  couplings = couplings && dir.lambda12 == cplx(0.0) && dir.lambda21 == cplx(2.0 * lambda);

  CVector s1 = CVector::Zero(3), s2 = CVector::Zero(3);
  s1 << 0.8, cplx(0.5, 0.2), 0.1;
  s2 << 0.7, cplx(-0.3, 0.6), cplx(0.0, 0.2);
  DensityMatrix rho0 = DensityMatrix::pure(space, kron(s1.normalized(), s2.normalized()));
  PhiloxStream rng(20240611, 6);
  double worst1 = 0.0, least2 = 1e300;
  for (const auto& [o1, o2] : choices) {
    auto nr = build_nonreciprocal(o1, o2, lambda, Pretuned{lambda, pi});
    for (int trial = 0; trial < 3; ++trial) {
      LindbladModel kicked2 = nr.model, kicked1 = nr.model;
      kicked2.hamiltonian = kicked2.hamiltonian + embed_local(space, 2, random_hermitian(rng, 3), "H2");
      kicked1.hamiltonian = kicked1.hamiltonian + embed_local(space, 1, random_hermitian(rng, 3), "H1");
      double dt = 0.1 * std::min(stable_dt(kicked2), stable_dt(kicked1));
      auto base = evolve(nr.model, rho0, 3.0, dt, 50);
      auto other = evolve(kicked2, rho0, 3.0, dt, 50);
      auto back = evolve(kicked1, rho0, 3.0, dt, 50);
      double moved2 = 0.0;
      for (std::size_t i = 0; i < base.states.size(); ++i) {
        worst1 = std::max(worst1, trace_distance(partial_trace(base.states[i], {1}).matrix(),
                                                 partial_trace(other.states[i], {1}).matrix()));
        moved2 = std::max(moved2, trace_distance(partial_trace(base.states[i], {2}).matrix(),
                                                 partial_trace(back.states[i], {2}).matrix()));
      }
      least2 = std::min(least2, moved2);
    }
  }
  return {couplings && worst1 < 1e-9 && least2 > 1e-6,
          fmt("lambda12 = %.3g, lambda21 = %.17g; max system-1 trace distance %.3g; min converse change %.3g",
              std::abs(eff.lambda12), eff.lambda21.real(), worst1, least2)};
}

Outcome feedforward() {
  FockSpace space(2, 1);
  auto a1 = mode_annihilation(space, 1), a2 = mode_annihilation(space, 2);
  FeedforwardSpec spec{(a1 + a1.adjoint()).relabeled("A1"), (a2 + a2.adjoint()).relabeled("F2"), 1.0, 1.0, 0.002,
                       20240611};
  auto nr = equivalent_directional_model(spec);
  double gen_diff = CMatrix(unconditional_generator(spec) - liouvillian(nr.model)).cwiseAbs().maxCoeff();

  double theta = 0.5 * std::asin(0.8);
  CVector m1(2), m2 = CVector::Zero(2);
  m1 << std::cos(theta), std::sin(theta);
  m2(0) = 1.0;
  DensityMatrix rho0 = DensityMatrix::pure(space, kron(m1, m2));
  std::vector<FockOperator> obs{I * (a2.adjoint() - a2), number_operator(space, 2), spec.a1};
  auto rep = run_ensemble(spec, rho0, 2.0, 2000, obs, {"P2", "n2", "A1"}, 10);
  auto cmp = compare_with_deterministic(spec, rho0, rep, obs, 0.5);
  return {gen_diff < 1e-10 && cmp.within(3.0),
          fmt("generator max diff %.3g (lambda = %.3g, eta = %.3g); 2000 trajectories, max |z| = %.3f",
              gen_diff, nr.lambda, equivalence_parameters(1.0, 1.0).eta, cmp.max_z)};
}

Outcome rwa() {
  CouplingModSpec c{0.0, 1.0, 0.01, 1.0, pi / 3.0};
  auto cm = check_coupling_modulation(c);
  FreqModSpec f{0.0, 1.0, 1.8412, 1.0, 0.0, 0.01};
  auto fm = check_frequency_modulation(f);
  return {cm.max_deviation < 0.05 && cm.final_population > 0.95 && fm.relative_error < 0.02,
          fmt("coupling modulation max |P2 - RWA| = %.4f, final P2 = %.5f; frequency modulation rate error %.4f",
              cm.max_deviation, cm.final_population, fm.relative_error)};
}

Outcome locc() {
  auto suite = locc_suite(20, 20240611, false);
  auto six = cascaded_entanglement_scenario(1.0, default_two_photon_drive, default_two_photon_drive, 6);
  auto twelve = cascaded_entanglement_scenario(1.0, default_two_photon_drive, default_two_photon_drive, 12);
  double diff = std::abs(six.negativity - twelve.negativity);
  bool golden = std::abs(six.negativity - 0.087541058) < 1e-8;
  return {suite.all_pass && suite.max_negativity < 1e-9 && six.negativity > 0.05 && diff < 1e-4 && golden,
          fmt("LOCC max negativity %.3g over 20 cases; cascaded N(6) = %.9f, N(12) = %.9f, |diff| = %.3g",
              suite.max_negativity, six.negativity, twelve.negativity, diff)};
}

Outcome reciprocity() {
  PhiloxStream rng(20240611, 10);
  double worst = 0.0;
  for (double f : {0.0, pi}) {
    LatticeModel m = ring3_bond_flux(1.0, f, 0.0, 2.0);
    for (int i = 0; i < 50; ++i) {
      CMatrix g = greens_function(m, rng.uniform(-3.0, 3.0));
      worst = std::max(worst, std::abs(g(1, 0) - g(0, 1)));
    }
  }
  return {worst < 1e-12, fmt("max |G21 - G12| over 2 x 50 frequencies %.3g (real gauge)", worst)};
}

}  // namespace

int main() {
  criterion(1, "circulator s-matrix", 1.0, circulator);
  criterion(2, "ring spectrum", 1.0, spectrum);
  criterion(3, "trajectory interference", 1.0, interference);
  criterion(4, "all-orders identity", 1.0, all_orders);
  criterion(5, "adiabatic elimination", 30.0, elimination);
  criterion(6, "perfect directionality", 60.0, directionality);
  criterion(7, "feedforward equivalence", 300.0, feedforward);
  criterion(8, "RWA validation", 60.0, rwa);
  criterion(9, "LOCC dichotomy", 300.0, locc);
  criterion(10, "reciprocity null test", 1.0, reciprocity);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
