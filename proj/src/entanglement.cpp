#include "nonrecip/entanglement.hpp"

#include "nonrecip/parallel.hpp"
#include "nonrecip/rng.hpp"

#include <cmath>
#include <sstream>

namespace nonrecip {

namespace {

CMatrix random_hermitian(PhiloxStream& rng, int n, double scale) {
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(rng.normal(), rng.normal());
  return scale * 0.5 * (m + m.adjoint());
}

// full-rank random mixed state: keeps the product state away from the PPT boundary
CMatrix random_mixed_state(PhiloxStream& rng, int n) {
  CMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
  CMatrix r = g * g.adjoint() + 0.1 * CMatrix::Identity(n, n);
  return r / r.trace();
}

}  // namespace

double negativity(const FockSpace& space, const CMatrix& rho, const Bipartition& cut) {
  CMatrix pt = partial_transpose(space, rho, cut);
  double tn = trace_norm_hermitian(pt);
  return std::max(0.0, 0.5 * (tn - rho.trace().real()));
}

LoccReport locc_suite(int num_cases, std::uint64_t seed, bool with_control) {
  if (num_cases < 0) throw Error(ErrorKind::InvalidArgument, "num_cases must be >= 0");
  LoccReport rep;
  rep.cases.resize(num_cases);
  parallel_for(num_cases, [&](std::size_t c) {
    LoccCase& out = rep.cases[c];
    out.seed = derive_seed(seed, c);
    PhiloxStream rng(out.seed);
    int c1 = rng.integer(1, 3), c2 = rng.integer(1, 3);  // subsystem dims 2..4
    FockSpace space(std::vector<int>{c1, c2});
    int d1 = c1 + 1, d2 = c2 + 1;
    auto o1 = embed_local(space, 1, random_hermitian(rng, d1, 1.0), "O1");
    auto o2 = embed_local(space, 2, random_hermitian(rng, d2, 1.0), "O2");
    double lambda = rng.uniform(0.3, 1.5);
    double eta = rng.uniform(0.5, 2.0);
    int sign = rng.uniform() < 0.5 ? 1 : -1;
    auto nr = build_nonreciprocal(o1, o2, lambda, Directional{eta, sign});
    LindbladModel model = nr.model;
    model.hamiltonian = model.hamiltonian + embed_local(space, 1, random_hermitian(rng, d1, 0.5), "H1") +
                        embed_local(space, 2, random_hermitian(rng, d2, 0.5), "H2");
    CMatrix rho0 = kron(random_mixed_state(rng, d1), random_mixed_state(rng, d2));
    Bipartition cut{{1}, {2}};
    double dt = stable_dt(model, 0.02);
    auto ev = evolve(model, DensityMatrix(space, rho0), 3.0, dt, 5);
    for (const auto& s : ev.states) out.max_negativity = std::max(out.max_negativity, negativity(s, cut));
    out.pass = out.max_negativity < 1e-9;
  });
  for (const auto& c : rep.cases) {
    rep.max_negativity = std::max(rep.max_negativity, c.max_negativity);
    rep.all_pass = rep.all_pass && c.pass;
  }
  if (with_control) rep.control_negativity = cascaded_control_negativity(1.0, default_two_photon_drive, 5, 8.0);
  return rep;
}

LindbladModel cascaded_model(double lambda, cplx drive1, cplx drive2, int cutoff) {
  FockSpace space(2, cutoff);
  auto a1 = mode_annihilation(space, 1);
  auto a2 = mode_annihilation(space, 2);
  auto nr = build_nonreciprocal(a1, a2.adjoint(), lambda, Directional{1.0, 1});
  LindbladModel m = nr.model;
  auto pump = [&](const FockOperator& a, cplx d) {
    FockOperator x = d * (a.adjoint() * a.adjoint());
    return 0.5 * (x + x.adjoint());
  };
  m.hamiltonian = m.hamiltonian + pump(a1, drive1) + pump(a2, drive2);
  m.validate();
  return m;
}

double cascaded_control_negativity(double lambda, cplx drive, int cutoff, double t_final) {
  LindbladModel m = cascaded_model(lambda, drive, drive, cutoff);
  auto ev = evolve(m, DensityMatrix::vacuum(m.space), t_final, stable_dt(m), 10);
  Bipartition cut{{1}, {2}};
  double best = 0.0;
  for (const auto& s : ev.states) best = std::max(best, negativity(s, cut));
  return best;
}

CascadedScenario cascaded_entanglement_scenario(double lambda, cplx drive1, cplx drive2, int cutoff) {
  if (cutoff < 5) throw Error(ErrorKind::InvalidArgument, "cascaded scenario needs cutoff >= 5");
  CascadedScenario sc;
  sc.model = cascaded_model(lambda, drive1, drive2, cutoff);
  sc.rho_ss = steady_state(sc.model);
  const FockSpace& space = sc.model.space;
  for (Eigen::Index i = 0; i < space.dimension(); ++i) {
    auto occ = space.occupations(i);
    if (occ[0] == cutoff || occ[1] == cutoff) sc.top_population += sc.rho_ss.matrix()(i, i).real();
  }
  if (sc.top_population >= 1e-4) {
    std::ostringstream msg;
    msg << "top Fock level population " << sc.top_population << " >= 1e-4 at cutoff " << cutoff;
    throw Error(ErrorKind::CutoffTooSmall, msg.str());
  }
  sc.negativity = negativity(sc.rho_ss, Bipartition{{1}, {2}});
  return sc;
}

}  // namespace nonrecip
