#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nonrecip/lindblad.hpp"
#include "nonrecip/rng.hpp"

#include <cmath>

using namespace nonrecip;

namespace {

CMatrix random_matrix(PhiloxStream& rng, Eigen::Index n) {
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cplx(rng.normal(), rng.normal());
  return m;
}

CMatrix random_hermitian(PhiloxStream& rng, Eigen::Index n) {
  CMatrix m = random_matrix(rng, n);
  return 0.5 * (m + m.adjoint());
}

CMatrix random_density(PhiloxStream& rng, Eigen::Index n) {
  CMatrix g = random_matrix(rng, n);
  CMatrix rho = g * g.adjoint();
  return rho / rho.trace();
}

double sparse_max_abs(const SparseCMatrix& m) {
  double out = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseCMatrix::InnerIterator it(m, k); it; ++it) out = std::max(out, std::abs(it.value()));
  return out;
}

LindbladModel decay_model(int cutoff, double kappa) {
  FockSpace s(1, cutoff);
  return {s, zero_operator(s), {{kappa, mode_annihilation(s, 1)}}};
}

}  // namespace

TEST_CASE("dissipator examples") {
  FockSpace s(1, 2);
  auto a = mode_annihilation(s, 1);
  CMatrix one = CMatrix::Zero(3, 3);
  one(1, 1) = 1.0;
  CMatrix d = dissipator(a, one);
  CMatrix expect = CMatrix::Zero(3, 3);
  expect(0, 0) = 1.0;
  expect(1, 1) = -1.0;
  CHECK((d - expect).norm() < 1e-15);
  CHECK(dissipator(identity_operator(s), one).norm() < 1e-15);

  FockSpace two(2, 2);
  PhiloxStream rng(3, 0);
  auto l = mode_annihilation(two, 1) - I * mode_creation(two, 2);
  for (int trial = 0; trial < 10; ++trial)
    CHECK(std::abs(dissipator(l, random_density(rng, two.dimension())).trace()) < 1e-12);
}

TEST_CASE("sparse generator matches the dense action and preserves trace") {
  PhiloxStream rng(21, 1);
  FockSpace s(2, 2);
  LindbladModel m{s, FockOperator(s, random_hermitian(rng, 9), "H"),
                  {{0.7, FockOperator(s, random_matrix(rng, 9), "L1")},
                   {0.2, FockOperator(s, random_matrix(rng, 9), "L2")}}};
  SparseCMatrix gen = liouvillian(m);
  for (int trial = 0; trial < 100; ++trial) {
    CMatrix rho = random_density(rng, 9);
    CMatrix dense = apply_liouvillian(m, rho);
    CVector sparse = gen * vec(rho);
    REQUIRE((vec(dense) - sparse).norm() < 1e-11);
    REQUIRE(std::abs(dense.trace()) < 1e-12);
  }
}

TEST_CASE("effective couplings") {
  auto tuned = effective_couplings(1.5, 1.5, pi);
  CHECK(std::abs(tuned.lambda12) < 1e-15);
  CHECK(std::abs(tuned.lambda21 - 3.0) < 1e-15);
  CHECK(tuned.directional());

  auto coherent = effective_couplings(0.8, 0.0, 0.3);
  CHECK(coherent.lambda12 == cplx(0.8));
  CHECK(coherent.lambda21 == cplx(0.8));
  CHECK_FALSE(coherent.directional());

  auto quarter = effective_couplings(1.0, 1.0, pi / 2.0);
  CHECK(std::abs(quarter.lambda12 - cplx(1.0, -1.0)) < 1e-15);
  CHECK(std::abs(quarter.lambda21 - cplx(1.0, 1.0)) < 1e-15);
}

TEST_CASE("pretuned and directional generators coincide") {
  PhiloxStream rng(5, 2);
  FockSpace s(2, 2);
  auto o1 = embed_local(s, 1, random_matrix(rng, 3), "O1");
  auto o2 = embed_local(s, 2, random_matrix(rng, 3), "O2");
  double lambda = 0.9;
  auto pre = build_nonreciprocal(o1, o2, lambda, Pretuned{lambda, pi});
  auto dir = build_nonreciprocal(o1, o2, lambda, Directional{1.0, 1});
  CHECK(sparse_max_abs(liouvillian(pre.model) - liouvillian(dir.model)) < 1e-12);
  CHECK(std::abs(dir.couplings.lambda12) == 0.0);
  CHECK(dir.couplings.lambda21 == cplx(2.0 * lambda));

  auto lower = build_nonreciprocal(o1, o2, lambda, Directional{1.0, -1});
  CHECK(lower.couplings.lambda12 == cplx(2.0 * lambda));
  CHECK(lower.couplings.lambda21 == cplx(0.0));

  auto off = build_nonreciprocal(o1, o2, 1e-300, Pretuned{0.0, 0.0});
  CHECK(sparse_max_abs(liouvillian(off.model)) < 1e-200);
}

TEST_CASE("cascaded two-cavity model from the directional recipe") {
  FockSpace s(2, 2);
  auto a1 = mode_annihilation(s, 1), a2 = mode_annihilation(s, 2);
  double lambda = 0.6;
  auto nr = build_nonreciprocal(a1, a2.adjoint(), lambda, Directional{1.0, 1});
  // standard 1 -> 2 cascaded form: H = (i/2) lambda (a1^dag a2 - a2^dag a1), L = a1 + a2, rate lambda
  FockOperator h = (0.5 * I * lambda) * (a1.adjoint() * a2 - a2.adjoint() * a1);
  LindbladModel cascaded{s, h, {{lambda, a1 + a2}}};
  // the phase of a2 is a gauge choice; U = exp(-i pi n2 / 2) maps a2 to i a2
  FockOperator u = embed_local(s, 2, CMatrix(Eigen::Vector3cd(1.0, -I, -1.0).asDiagonal()), "U");
  FockOperator h_rot = u * nr.model.hamiltonian * u.adjoint();
  FockOperator l_rot = u * nr.model.jumps[0].op * u.adjoint();
  LindbladModel rotated{s, h_rot, {{nr.model.jumps[0].rate, l_rot}}};
  CHECK(sparse_max_abs(liouvillian(rotated) - liouvillian(cascaded)) < 1e-12);
}

TEST_CASE("locality gate") {
  FockSpace s(2, 2);
  auto a1 = mode_annihilation(s, 1), a2 = mode_annihilation(s, 2);
  try {
    build_nonreciprocal(a1 * a2, a2, 1.0, Directional{});
    FAIL("accepted a nonlocal O1");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidCoupling);
  }
  CHECK_THROWS_AS(build_nonreciprocal(a1, a1, 1.0, Directional{}), Error);
  CHECK_THROWS_AS(build_nonreciprocal(a1, a2, 1.0, Directional{0.0, 1}), Error);
  CHECK_THROWS_AS(build_nonreciprocal(a1, a2, 1.0, Directional{1.0, 2}), Error);

  FockSpace three(3, 1);
  auto b1 = mode_annihilation(three, 1), b3 = mode_annihilation(three, 3);
  CHECK_NOTHROW(build_nonreciprocal(b1, b3, 1.0, Directional{}, Bipartition{{1, 2}, {3}}));
  CHECK_THROWS_AS(build_nonreciprocal(b3, b1, 1.0, Directional{}, Bipartition{{1, 2}, {3}}), Error);
}

TEST_CASE("complex lambda is absorbed into O1") {
  FockSpace s(2, 1);
  auto a1 = mode_annihilation(s, 1), a2 = mode_annihilation(s, 2);
  cplx phase = std::exp(I * 0.3);
  auto a = build_nonreciprocal(a1, a2, 2.0 * phase, Directional{0.7, 1});
  auto b = build_nonreciprocal(phase * a1, a2, 2.0, Directional{0.7, 1});
  CHECK(a.lambda == doctest::Approx(2.0));
  CHECK(sparse_max_abs(liouvillian(a.model) - liouvillian(b.model)) < 1e-14);
}

TEST_CASE("eta only rescales local dissipation") {
  PhiloxStream rng(6, 6);
  FockSpace s(2, 2);
  auto o1 = embed_local(s, 1, random_matrix(rng, 3), "O1");
  auto o2 = embed_local(s, 2, random_matrix(rng, 3), "O2");
  double lambda = 0.5;
  auto base = liouvillian(build_nonreciprocal(o1, o2, lambda, Directional{1.0, 1}).model);
  for (double eta : {0.3, 2.5}) {
    auto nr = build_nonreciprocal(o1, o2, lambda, Directional{eta, 1});
    SparseCMatrix expect = base + (eta - 1.0) * lambda * dissipator_superoperator(o1) +
                           (1.0 / eta - 1.0) * lambda * dissipator_superoperator(o2.adjoint());
    CHECK(sparse_max_abs(liouvillian(nr.model) - expect) < 1e-12);
    CHECK(nr.couplings.lambda12 == cplx(0.0));
    CHECK(nr.couplings.lambda21 == cplx(2.0 * lambda));
  }
}

TEST_CASE("dissipative interactions do not split into quadratures") {
  PhiloxStream rng(14, 0);
  FockSpace s(2, 2);
  double lambda = 1.0;
  for (int trial = 0; trial < 5; ++trial) {
    CMatrix x1 = random_hermitian(rng, 3), p1 = random_hermitian(rng, 3);
    CMatrix x2 = random_hermitian(rng, 3), p2 = random_hermitian(rng, 3);
    auto X1 = embed_local(s, 1, x1, "X1"), P1 = embed_local(s, 1, p1, "P1");
    auto X2 = embed_local(s, 2, x2, "X2"), P2 = embed_local(s, 2, p2, "P2");
    FockOperator o1 = X1 + I * P1, o2 = X2 + I * P2;
    SparseCMatrix whole = lambda * dissipator_superoperator(o1 - I * o2.adjoint());
    SparseCMatrix split = lambda * (dissipator_superoperator(X1 - I * X2) + dissipator_superoperator(P1 - I * P2));
    CHECK(sparse_max_abs(whole - split) > 0.01 * lambda);
  }
}

TEST_CASE("mean-value equations use the effective couplings") {
  PhiloxStream rng(8, 1);
  FockSpace s(2, 2);
  for (int trial = 0; trial < 10; ++trial) {
    auto o1 = embed_local(s, 1, random_matrix(rng, 3), "O1");
    auto o2 = embed_local(s, 2, random_matrix(rng, 3), "O2");
    double lambda = rng.uniform(0.1, 2.0);
    NonreciprocalVariant variant = Pretuned{rng.uniform(0.0, 2.0), rng.uniform(-pi, pi)};
    if (trial % 3 == 1) variant = Directional{rng.uniform(0.2, 3.0), trial % 2 ? 1 : -1};
    if (trial % 3 == 2) variant = Conjugated{rng.uniform(0.2, 3.0), trial % 2 ? 1 : -1};
    auto nr = build_nonreciprocal(o1, o2, lambda, variant);
    CMatrix rho = random_density(rng, 9);
    auto probe1 = embed_local(s, 1, random_hermitian(rng, 3), "X1");
    auto probe2 = embed_local(s, 2, random_matrix(rng, 3), "X2");
    CHECK(mean_value_eom_check(nr, probe1, rho) < 1e-10);
    CHECK(mean_value_eom_check(nr, probe2, rho) < 1e-10);
  }
  auto a1 = mode_annihilation(s, 1), a2 = mode_annihilation(s, 2);
  auto coherent = build_nonreciprocal(a1, a2, 1.0, Pretuned{0.0, 0.0});
  CHECK(mean_value_eom_check(coherent, number_operator(s, 1), DensityMatrix::basis(s, {1, 1}).matrix()) < 1e-12);
}

TEST_CASE("directional models shield system 1 from system 2") {
  PhiloxStream rng(10, 2);
  FockSpace s(2, 2);
  auto o1 = embed_local(s, 1, random_matrix(rng, 3), "O1");
  auto o2 = embed_local(s, 2, random_matrix(rng, 3), "O2");
  auto nr = build_nonreciprocal(o1, o2, 0.8, Directional{1.7, 1});
  DensityMatrix rho0(s, random_density(rng, 9));
  LindbladModel kicked2 = nr.model, kicked1 = nr.model;
  kicked2.hamiltonian = kicked2.hamiltonian + embed_local(s, 2, random_hermitian(rng, 3), "H2");
  kicked1.hamiltonian = kicked1.hamiltonian + embed_local(s, 1, random_hermitian(rng, 3), "H1");
  double dt = 0.2 * stable_dt(kicked2);
  auto base = evolve(nr.model, rho0, 2.0, dt, 20);
  auto other = evolve(kicked2, rho0, 2.0, dt, 20);
  auto back = evolve(kicked1, rho0, 2.0, dt, 20);
  double worst1 = 0.0, moved2 = 0.0;
  for (std::size_t i = 0; i < base.states.size(); ++i) {
    worst1 = std::max(worst1, trace_distance(partial_trace(base.states[i], {1}).matrix(),
                                             partial_trace(other.states[i], {1}).matrix()));
    moved2 = std::max(moved2, trace_distance(partial_trace(base.states[i], {2}).matrix(),
                                             partial_trace(back.states[i], {2}).matrix()));
  }
  CHECK(worst1 < 1e-9);
  CHECK(moved2 > 1e-3);
}

TEST_CASE("evolution") {
  FockSpace s(1, 2);
  LindbladModel idle{s, zero_operator(s), {}};
  DensityMatrix rho0 = DensityMatrix::basis(s, {1});
  auto still = evolve(idle, rho0, 1.0, 0.1);
  CHECK((still.states.back().matrix() - rho0.matrix()).norm() == 0.0);

  double kappa = 0.7;
  LindbladModel decay = decay_model(2, kappa);
  auto run = evolve(decay, rho0, 3.0, 0.01, 10);
  auto n = number_operator(s, 1);
  for (std::size_t i = 0; i < run.times.size(); ++i)
    REQUIRE(std::abs(expectation(n, run.states[i]).real() - std::exp(-kappa * run.times[i])) < 1e-6);
  CHECK(run.max_trace_drift < 1e-8);
  CHECK(run.times.back() == doctest::Approx(3.0));

  try {
    evolve(decay, rho0, 1.0, 1.0);
    FAIL("oversized step accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StepSize);
  }
  CHECK(stable_dt(decay) * (kappa * 4.0) == doctest::Approx(0.05).epsilon(0.5));
}

TEST_CASE("steady states") {
  auto vac = steady_state(decay_model(3, 0.5));
  CHECK(std::abs(vac.matrix()(0, 0) - 1.0) < 1e-10);

  FockSpace s(2, 2);
  auto a1 = mode_annihilation(s, 1), a2 = mode_annihilation(s, 2);
  auto cascaded = build_nonreciprocal(a1, a2.adjoint(), 1.0, Directional{1.0, 1}).model;
  cascaded.jumps.push_back({0.3, a2});
  SteadyStateInfo info;
  auto joint = steady_state(cascaded, &info);
  CHECK(std::abs(joint.matrix()(0, 0) - 1.0) < 1e-10);
  CHECK(info.residual < 1e-10);
  CHECK(info.sigma_min > 1e-8);

  // thermal-like pumping and decay: detailed balance gives a geometric distribution
  FockSpace one(1, 4);
  auto b = mode_annihilation(one, 1);
  LindbladModel pumped{one, zero_operator(one), {{1.0, b}, {0.5, b.adjoint()}}};
  auto ss = steady_state(pumped);
  for (int k = 0; k + 1 < 5; ++k)
    CHECK(std::abs(ss.matrix()(k + 1, k + 1).real() / ss.matrix()(k, k).real() - 0.5) < 1e-9);

  try {
    steady_state(LindbladModel{one, number_operator(one, 1), {}});
    FAIL("degenerate steady state accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonUniqueSteadyState);
  }
}

TEST_CASE("non-Hermitian part") {
  FockSpace s(2, 1);
  auto h = 0.3 * number_operator(s, 1);
  LindbladModel bare{s, h, {}};
  CHECK((nonhermitian_part(bare).matrix() - h.matrix()).norm() == 0.0);

  double t = 1.0;
  auto ring = ring_master_equation(t, pi / 2.0, 2.0 * t, s);
  CMatrix heff = single_excitation_matrix(nonhermitian_part(ring));
  // no amplitude flows 1 -> 2, the reverse coupling doubles
  CHECK(std::abs(heff(1, 0)) < 1e-12);
  CHECK(std::abs(heff(0, 1) + 2.0 * t) < 1e-12);

  auto reciprocal = ring_master_equation(t, pi / 2.0, 0.0, s);
  CMatrix hr = single_excitation_matrix(nonhermitian_part(reciprocal));
  CHECK(std::abs(hr(1, 0) - hr(0, 1)) < 1e-15);

  // Hermitian O1, O2: the jump adds no cross terms to H_NH
  PhiloxStream rng(2, 2);
  FockSpace q(2, 2);
  auto x1 = embed_local(q, 1, random_hermitian(rng, 3), "X1");
  auto x2 = embed_local(q, 2, random_hermitian(rng, 3), "X2");
  auto nr = build_nonreciprocal(x1, x2, 0.7, Directional{1.3, 1});
  CMatrix anti = nonhermitian_part(nr.model).matrix() - nr.model.hamiltonian.matrix();
  CMatrix local = -0.5 * I * 0.7 * (1.3 * (x1 * x1).matrix() + (x2 * x2).matrix() / 1.3);
  CHECK((anti - local).norm() < 1e-12);
}

TEST_CASE("ring mean values follow the 2x2 effective Hamiltonian") {
  FockSpace s(2, 1);
  double t = 0.8, kappa = 1.1, flux = 0.7;
  auto ring = ring_master_equation(t, flux, kappa, s);
  CVector psi = CVector::Zero(4);
  psi(s.index({0, 0})) = 1.0;
  psi(s.index({1, 0})) = cplx(0.6, 0.1);
  psi(s.index({0, 1})) = cplx(-0.2, 0.4);
  DensityMatrix rho0 = DensityMatrix::pure(s, psi.normalized());
  auto run = evolve(ring, rho0, 3.0, 0.001, 100);
  CMatrix heff = single_excitation_matrix(nonhermitian_part(ring));
  auto a1 = mode_annihilation(s, 1), a2 = mode_annihilation(s, 2);
  CVector m0(2);
  m0 << expectation(a1, rho0), expectation(a2, rho0);
  Eigen::ComplexEigenSolver<CMatrix> es(heff);
  double worst = 0.0;
  for (std::size_t i = 0; i < run.times.size(); ++i) {
    CVector phases = (-I * es.eigenvalues() * run.times[i]).array().exp();
    CVector exact = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().inverse() * m0;
    worst = std::max(worst, std::abs(expectation(a1, run.states[i]) - exact(0)));
    worst = std::max(worst, std::abs(expectation(a2, run.states[i]) - exact(1)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("adiabatic elimination") {
  double t = 1.0, kappa3 = 100.0, phi = pi / 6.0;
  double tp = std::sqrt(t * kappa3 / 2.0);
  auto el = adiabatic_eliminate(t, tp, phi, 0.0, 0.0, kappa3);
  CHECK(std::abs(el.t21) < 1e-14);
  CHECK(std::abs(el.t12) == doctest::Approx(2.0 * t));
  CHECK(el.kappa_tilde == doctest::Approx(4.0 * tp * tp / kappa3));
  CHECK(std::abs(std::arg(el.t12) - pi / 6.0) < 1e-12);

  auto ok = adiabatic_eliminate(0.1, 0.1, 0.2, 0.0, 0.0, 100.0);
  CHECK(ok.level == Adiabaticity::ok);
  CHECK(ok.warning.empty());
  auto marginal = adiabatic_eliminate(1.0, 1.0, 0.2, 0.0, 0.0, 50.0);
  CHECK(marginal.level == Adiabaticity::marginal);
  CHECK_FALSE(marginal.warning.empty());
  auto violated = adiabatic_eliminate(1.0, 1.0, 0.2, 0.0, 0.0, 5.0);
  CHECK(violated.level == Adiabaticity::violated);
}

TEST_CASE("eliminated model tracks the full three-mode ring") {
  double t = 1.0, phi = pi / 6.0;
  auto near = compare_adiabatic(t, std::sqrt(t * 100.0 / 2.0), phi, 0.0, 0.0, 100.0, 5.0);
  auto far = compare_adiabatic(t, std::sqrt(t * 200.0 / 2.0), phi, 0.0, 0.0, 200.0, 5.0);
  CHECK(near.max_rel_err < 0.05);
  double ratio = near.max_rel_err / far.max_rel_err;
  CHECK(ratio >= 1.5);
  CHECK(ratio <= 3.0);
}
