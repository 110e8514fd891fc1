#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nonrecip/entanglement.hpp"
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

CMatrix random_density(PhiloxStream& rng, Eigen::Index n) {
  CMatrix g = random_matrix(rng, n);
  CMatrix rho = g * g.adjoint();
  return rho / rho.trace();
}

CMatrix random_unitary(PhiloxStream& rng, Eigen::Index n) {
  Eigen::HouseholderQR<CMatrix> qr(random_matrix(rng, n));
  return qr.householderQ();
}

}  // namespace

TEST_CASE("negativity of reference states") {
  FockSpace s(2, 1);
  Bipartition cut{{1}, {2}};
  PhiloxStream rng(1, 0);
  CMatrix product = kron(random_density(rng, 2), random_density(rng, 2));
  CHECK(negativity(s, product, cut) < 1e-12);

  CVector bell = CVector::Zero(4);
  bell(s.index({0, 0})) = 1.0;
  bell(s.index({1, 1})) = 1.0;
  bell /= std::sqrt(2.0);
  CHECK(std::abs(negativity(DensityMatrix::pure(s, bell), cut) - 0.5) < 1e-12);

  // mixtures of product states stay PPT
  FockSpace big(std::vector<int>{2, 1});
  CMatrix mix = CMatrix::Zero(6, 6);
  for (int j = 0; j < 5; ++j) mix += 0.2 * kron(random_density(rng, 3), random_density(rng, 2));
  CHECK(negativity(big, mix, cut) < 1e-12);
}

TEST_CASE("negativity is invariant under local unitaries") {
  FockSpace s(std::vector<int>{1, 2});
  Bipartition cut{{1}, {2}};
  PhiloxStream rng(2, 2);
  for (int trial = 0; trial < 10; ++trial) {
    CMatrix rho = random_density(rng, 6);
    CMatrix u = kron(random_unitary(rng, 2), random_unitary(rng, 3));
    CHECK(std::abs(negativity(s, rho, cut) - negativity(s, u * rho * u.adjoint(), cut)) < 1e-10);
  }
}

TEST_CASE("Hermitian directional couplings never entangle") {
  auto empty = locc_suite(0, 5, false);
  CHECK(empty.cases.empty());
  CHECK(empty.all_pass);

  auto report = locc_suite(4, 20240611, true);
  REQUIRE(report.cases.size() == 4);
  CHECK(report.all_pass);
  CHECK(report.max_negativity < 1e-9);
  CHECK(report.control_negativity > 1e-3);

  auto repeat = locc_suite(4, 20240611, false);
  for (std::size_t c = 0; c < 4; ++c) CHECK(repeat.cases[c].seed == report.cases[c].seed);
}

TEST_CASE("cascaded scenario") {
  auto quiet = cascaded_entanglement_scenario(1.0, 0.0, 0.0, 5);
  CHECK(std::abs(quiet.rho_ss.matrix()(0, 0) - 1.0) < 1e-10);
  CHECK(quiet.negativity < 1e-12);

  // golden values from an independent sparse steady-state solve
  auto weak = cascaded_entanglement_scenario(1.0, default_two_photon_drive, default_two_photon_drive, 6);
  CHECK(weak.negativity == doctest::Approx(0.087541058).epsilon(1e-7));
  CHECK(weak.negativity > 0.05);
  CHECK(weak.top_population < 1e-4);

  auto strong = cascaded_entanglement_scenario(1.0, cplx(0.0, 0.2), cplx(0.0, 0.2), 6);
  CHECK(strong.negativity == doctest::Approx(0.260719492).epsilon(1e-7));

  // the steady state is a fixed point of the generator
  CMatrix drift = apply_liouvillian(weak.model, weak.rho_ss.matrix());
  CHECK(drift.cwiseAbs().maxCoeff() < 1e-10);

  CHECK_THROWS_AS(cascaded_entanglement_scenario(1.0, 0.0, 0.0, 4), Error);
  try {
    cascaded_entanglement_scenario(1.0, cplx(0.0, 0.45), cplx(0.0, 0.45), 5);
    FAIL("truncation check did not fire");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CutoffTooSmall);
  }
}

TEST_CASE("cascaded model structure") {
  LindbladModel m = cascaded_model(0.7, cplx(0.0, 0.1), 0.0, 5);
  CHECK(m.space.cutoffs() == std::vector<int>{5, 5});
  CHECK(m.hamiltonian.is_hermitian());
  REQUIRE(m.jumps.size() >= 1);
  // drive on mode 1 only: without it the model is the bare cascade
  LindbladModel bare = cascaded_model(0.7, 0.0, 0.0, 5);
  CMatrix pump = m.hamiltonian.matrix() - bare.hamiltonian.matrix();
  auto a1 = mode_annihilation(m.space, 1);
  CMatrix expect = 0.5 * (cplx(0.0, 0.1) * (a1.adjoint() * a1.adjoint()).matrix());
  expect += expect.adjoint().eval();
  CHECK((pump - expect).norm() < 1e-14);
}
