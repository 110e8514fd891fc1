#include "nonrecip/lindblad.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include <cmath>
#include <sstream>

namespace nonrecip {

namespace {

double op_norm(const CMatrix& m) { return spectral_norm(m); }

SparseCMatrix to_sparse(const CMatrix& m) { return m.sparseView(1.0, 0.0); }

CMatrix hnh_matrix(const LindbladModel& model) {
  CMatrix h = model.hamiltonian.matrix();
  for (const auto& j : model.jumps) h -= (0.5 * I * j.rate) * (j.op.matrix().adjoint() * j.op.matrix());
  return h;
}

void require_space(const FockSpace& a, const FockSpace& b) {
  if (a != b) throw Error(ErrorKind::InvalidArgument, "operator and state live on different Fock spaces");
}

}  // namespace

void LindbladModel::validate() const {
  require_space(space, hamiltonian.space());
  double herm = hermiticity_defect(hamiltonian.matrix());
  if (herm > 1e-12) throw Error(ErrorKind::InvalidModel, "Hamiltonian is not Hermitian (defect " + std::to_string(herm) + ")");
  for (const auto& j : jumps) {
    require_space(space, j.op.space());
    if (!(j.rate >= 0.0) || !std::isfinite(j.rate)) throw Error(ErrorKind::InvalidModel, "jump rates must be finite and >= 0");
  }
}

CMatrix dissipator(const FockOperator& l, const CMatrix& rho) {
  const CMatrix& L = l.matrix();
  if (rho.rows() != L.rows()) throw Error(ErrorKind::InvalidArgument, "dissipator: dimension mismatch");
  CMatrix ldl = L.adjoint() * L;
  return L * rho * L.adjoint() - 0.5 * (ldl * rho + rho * ldl);
}

CMatrix dissipator(const FockOperator& l, const DensityMatrix& rho) {
  require_space(l.space(), rho.space());
  return dissipator(l, rho.matrix());
}

CMatrix apply_liouvillian(const LindbladModel& model, const CMatrix& rho) {
  CMatrix h = hnh_matrix(model);
  CMatrix out = -I * (h * rho) + I * (rho * h.adjoint());
  for (const auto& j : model.jumps) out += j.rate * (j.op.matrix() * rho * j.op.matrix().adjoint());
  return out;
}

SparseCMatrix dissipator_superoperator(const FockOperator& l) {
  const auto d = l.space().dimension();
  SparseCMatrix id(d, d);
  id.setIdentity();
  SparseCMatrix L = to_sparse(l.matrix());
  SparseCMatrix ldl = to_sparse(l.matrix().adjoint() * l.matrix());
  SparseCMatrix out = Eigen::kroneckerProduct(SparseCMatrix(L.conjugate()), L);
  out -= 0.5 * SparseCMatrix(Eigen::kroneckerProduct(id, ldl));
  out -= 0.5 * SparseCMatrix(Eigen::kroneckerProduct(SparseCMatrix(ldl.transpose()), id));
  return out;
}

SparseCMatrix liouvillian(const LindbladModel& model) {
  model.validate();
  const auto d = model.space.dimension();
  SparseCMatrix id(d, d);
  id.setIdentity();
  SparseCMatrix h = to_sparse(hnh_matrix(model));
  // vec(A X B) = (B^T kron A) vec(X)
  SparseCMatrix out = -I * SparseCMatrix(Eigen::kroneckerProduct(id, h));
  out += I * SparseCMatrix(Eigen::kroneckerProduct(SparseCMatrix(h.conjugate()), id));
  for (const auto& j : model.jumps) {
    if (j.rate == 0.0) continue;
    SparseCMatrix L = to_sparse(j.op.matrix());
    out += j.rate * SparseCMatrix(Eigen::kroneckerProduct(SparseCMatrix(L.conjugate()), L));
  }
  out.prune(cplx(0.0), 0.0);
  return out;
}

EffectiveCouplings effective_couplings(double lambda, double gamma, double theta) {
  cplx shift = gamma * std::exp(-I * theta);
  return {lambda + shift, lambda - shift};
}

NonreciprocalModel build_nonreciprocal(const FockOperator& o1_in, const FockOperator& o2, cplx lambda_in,
                                       const NonreciprocalVariant& variant, std::optional<Bipartition> cut) {
  const FockSpace& space = o1_in.space();
  if (o2.space() != space) throw Error(ErrorKind::InvalidArgument, "O1 and O2 live on different Fock spaces");
  Bipartition bp = cut ? *cut : Bipartition::first_mode(space);
  bp.validate(space);
  if (!acts_trivially_on(o1_in, bp.s2))
    throw Error(ErrorKind::InvalidCoupling, "O1 '" + o1_in.label() + "' does not act only on subsystem 1");
  if (!acts_trivially_on(o2, bp.s1))
    throw Error(ErrorKind::InvalidCoupling, "O2 '" + o2.label() + "' does not act only on subsystem 2");

  NonreciprocalModel nr;
  nr.cut = bp;
  nr.lambda = std::abs(lambda_in);
  nr.o1 = (nr.lambda > 0.0 && std::arg(lambda_in) != 0.0) ? (lambda_in / nr.lambda) * o1_in : o1_in;
  nr.o2 = o2;
  const double lam = nr.lambda;

  FockOperator coupling = nr.o1 * nr.o2;
  FockOperator h = 0.5 * lam * (coupling + coupling.adjoint());
  if (std::holds_alternative<Pretuned>(variant)) {
    const auto& v = std::get<Pretuned>(variant);
    if (!(v.gamma >= 0.0)) throw Error(ErrorKind::InvalidArgument, "pretuned variant needs gamma >= 0");
    nr.rate = v.gamma;
    nr.p = nr.o1;
    nr.q = (I * std::exp(I * v.theta)) * nr.o2.adjoint();
    nr.couplings = effective_couplings(lam, v.gamma, v.theta);
  } else {
    bool conj = std::holds_alternative<Conjugated>(variant);
    double eta = conj ? std::get<Conjugated>(variant).eta : std::get<Directional>(variant).eta;
    int sign = conj ? std::get<Conjugated>(variant).sign : std::get<Directional>(variant).sign;
    if (!(eta > 0.0)) throw Error(ErrorKind::InvalidArgument, "eta must be > 0");
    if (sign != 1 && sign != -1) throw Error(ErrorKind::InvalidArgument, "sign must be +1 or -1");
    nr.rate = lam;
    nr.p = std::sqrt(eta) * (conj ? nr.o1.adjoint() : nr.o1);
    nr.q = (-double(sign) * I / std::sqrt(eta)) * (conj ? nr.o2 : nr.o2.adjoint());
    nr.couplings = {lam - sign * lam, lam + sign * lam};
  }
  nr.model.space = space;
  nr.model.hamiltonian = h;
  nr.model.jumps = {{nr.rate, nr.p + nr.q}};
  nr.model.validate();
  return nr;
}

double stable_dt(const LindbladModel& model, double safety) {
  double scale = op_norm(model.hamiltonian.matrix());
  for (const auto& j : model.jumps) scale += j.rate * std::pow(op_norm(j.op.matrix()), 2);
  return scale > 0.0 ? safety / scale : 1.0;
}

Evolution evolve(const LindbladModel& model, const DensityMatrix& rho0, double t_final, double dt, int sample_every) {
  model.validate();
  require_space(model.space, rho0.space());
  if (!(dt > 0.0) || !(t_final >= 0.0)) throw Error(ErrorKind::InvalidArgument, "need dt > 0 and t_final >= 0");
  if (sample_every < 1) sample_every = 1;
  long steps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
  double h = steps > 0 ? t_final / steps : dt;

  double scale = op_norm(model.hamiltonian.matrix());
  for (const auto& j : model.jumps) scale += j.rate * std::pow(op_norm(j.op.matrix()), 2);
  if (h * scale >= 0.1) {
    std::ostringstream msg;
    msg << "dt*(|H| + sum rate |L|^2) = " << h * scale << " exceeds 0.1; use dt < " << 0.1 / scale;
    throw Error(ErrorKind::StepSize, msg.str());
  }

  CMatrix hnh = hnh_matrix(model);
  CMatrix hnh_dag = hnh.adjoint();
  std::vector<CMatrix> ls, ls_dag;
  for (const auto& j : model.jumps) {
    if (j.rate == 0.0) continue;
    ls.push_back(std::sqrt(j.rate) * j.op.matrix());
    ls_dag.push_back(ls.back().adjoint());
  }
  auto gen = [&](const CMatrix& r) {
    CMatrix out = -I * (hnh * r) + I * (r * hnh_dag);
    for (std::size_t k = 0; k < ls.size(); ++k) out.noalias() += ls[k] * r * ls_dag[k];
    return out;
  };

  Evolution ev;
  CMatrix rho = rho0.matrix();
  const cplx tr0 = rho.trace();
  ev.times.push_back(0.0);
  ev.states.push_back(rho0);
  for (long n = 0; n < steps; ++n) {
    CMatrix k1 = gen(rho);
    CMatrix k2 = gen(rho + 0.5 * h * k1);
    CMatrix k3 = gen(rho + 0.5 * h * k2);
    CMatrix k4 = gen(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    double drift = std::abs(rho.trace() - tr0);
    ev.max_trace_drift = std::max(ev.max_trace_drift, drift);
    if (drift > 1e-8)
      throw Error(ErrorKind::IntegrationFailure, "trace drift " + std::to_string(drift) + " exceeds 1e-8");
    if ((n + 1) % sample_every == 0 || n + 1 == steps) {
      ev.times.push_back((n + 1) * h);
      ev.states.emplace_back(model.space, rho, 1e-8);
    }
  }
  return ev;
}

DensityMatrix steady_state(const LindbladModel& model, SteadyStateInfo* info) {
  SparseCMatrix L = liouvillian(model);
  const auto d = model.space.dimension();
  const auto n = d * d;
  // swap the (0,0) row of L for the trace functional
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(L.nonZeros() + d);
  for (int k = 0; k < L.outerSize(); ++k)
    for (SparseCMatrix::InnerIterator it(L, k); it; ++it)
      if (it.row() != 0) trip.emplace_back(it.row(), it.col(), it.value());
  for (Eigen::Index k = 0; k < d; ++k) trip.emplace_back(0, k * (d + 1), 1.0);
  SparseCMatrix m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  CVector rhs = CVector::Zero(n);
  rhs(0) = 1.0;

  SteadyStateInfo local;
  CVector x;
  CVector probe(n);
  for (Eigen::Index i = 0; i < n; ++i) probe(i) = cplx(1.0 + 0.37 * std::sin(1.3 * i), 0.21 * std::cos(0.7 * i));
  probe.normalize();

  if (n <= 4096) {
    Eigen::SparseLU<SparseCMatrix> lu;
    lu.compute(m);
    if (lu.info() != Eigen::Success)
      throw Error(ErrorKind::NonUniqueSteadyState, "bordered generator is singular: steady state is not unique");
    x = lu.solve(rhs);
    // inverse iteration on M^dagger M for the smallest singular value
    CVector v = probe;
    double sigma = 0.0;
    for (int it = 0; it < 8; ++it) {
      CVector y = lu.solve(v);
      CVector w = lu.adjoint().solve(y);
      double nw = w.norm();
      if (!std::isfinite(nw) || nw == 0.0) {
        sigma = 0.0;
        break;
      }
      sigma = 1.0 / std::sqrt(nw);
      v = w / nw;
    }
    local.sigma_min = sigma;
  } else {
    local.iterative = true;
    Eigen::BiCGSTAB<SparseCMatrix, Eigen::IncompleteLUT<cplx>> solver;
    solver.preconditioner().setDroptol(1e-4);
    solver.preconditioner().setFillfactor(10);
    solver.setTolerance(1e-14);
    solver.setMaxIterations(5000);
    solver.compute(m);
    if (solver.info() != Eigen::Success)
      throw Error(ErrorKind::NumericalSingularity, "preconditioner setup failed for the bordered generator");
    x = solver.solve(rhs);
    if (solver.info() != Eigen::Success)
      throw Error(ErrorKind::NonUniqueSteadyState, "iterative steady-state solve did not converge");
    // inverse iteration on M itself: smallest eigenvalue modulus, zero iff singular
    CVector v = probe;
    double mu = 0.0;
    for (int it = 0; it < 4; ++it) {
      CVector w = solver.solveWithGuess(v, v);
      double nw = w.norm();
      if (solver.info() != Eigen::Success || !std::isfinite(nw) || nw == 0.0) {
        mu = 0.0;
        break;
      }
      mu = 1.0 / nw;
      v = w / nw;
    }
    local.sigma_min = mu;
  }
  if (!(local.sigma_min > 1e-8)) {
    std::ostringstream msg;
    msg << "steady state is not unique (smallest singular value of bordered generator " << local.sigma_min << ")";
    throw Error(ErrorKind::NonUniqueSteadyState, msg.str());
  }
  CMatrix rho = unvec(x, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace();
  local.residual = (L * vec(rho)).norm();
  if (info) *info = local;
  if (local.residual > 1e-10) {
    std::ostringstream msg;
    msg << "steady-state residual " << local.residual << " exceeds 1e-10";
    throw Error(ErrorKind::IntegrationFailure, msg.str());
  }
  return DensityMatrix(model.space, rho, 1e-8);
}

FockOperator nonhermitian_part(const LindbladModel& model) {
  return FockOperator(model.space, hnh_matrix(model), "H_NH");
}

CMatrix single_excitation_matrix(const FockOperator& op) {
  const FockSpace& s = op.space();
  const int m = s.num_modes();
  CMatrix out(m, m);
  std::vector<Eigen::Index> idx(m);
  for (int j = 0; j < m; ++j) {
    std::vector<int> occ(m, 0);
    occ[j] = 1;
    idx[j] = s.index(occ);
  }
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) out(j, k) = op.matrix()(idx[j], idx[k]);
  return out;
}

LindbladModel ring_master_equation(double t, double flux, double kappa_tilde, const FockSpace& space) {
  if (space.num_modes() != 2) throw Error(ErrorKind::InvalidArgument, "ring master equation needs a two-mode space");
  if (!(kappa_tilde >= 0.0)) throw Error(ErrorKind::InvalidArgument, "kappa_tilde must be >= 0");
  auto a1 = mode_annihilation(space, 1);
  auto a2 = mode_annihilation(space, 2);
  LindbladModel m;
  m.space = space;
  FockOperator hop = a2.adjoint() * a1;
  m.hamiltonian = (-t) * (hop + hop.adjoint());
  m.jumps = {{kappa_tilde, a2 + std::exp(I * flux) * a1}};
  m.validate();
  return m;
}

AdiabaticElimination adiabatic_eliminate(double t, double t_prime, double phi, double kappa1, double kappa2,
                                         double kappa3, const FockSpace& space) {
  if (!(kappa3 > 0.0)) throw Error(ErrorKind::InvalidArgument, "kappa3 must be > 0");
  AdiabaticElimination out;
  out.kappa_tilde = 4.0 * t_prime * t_prime / kappa3;
  cplx induced = 2.0 * I * t_prime * t_prime / kappa3;
  out.t12 = std::exp(I * phi) * t + std::exp(-2.0 * I * phi) * induced;
  out.t21 = std::exp(-I * phi) * t + std::exp(2.0 * I * phi) * induced;
  double slow = std::max({std::abs(t), std::abs(t_prime), kappa1, kappa2});
  out.guard_ratio = slow > 0.0 ? kappa3 / slow : INFINITY;
  if (out.guard_ratio < 10.0) {
    out.level = Adiabaticity::violated;
    out.warning = "kappa3 is less than 10x the slow scales; elimination is not justified";
  } else if (out.guard_ratio < 100.0) {
    out.level = Adiabaticity::marginal;
    out.warning = "kappa3 is less than 100x the slow scales; expect visible corrections";
  }
  out.model = ring_master_equation(t, 3.0 * phi, out.kappa_tilde, space);
  out.model.jumps.push_back({kappa1, mode_annihilation(space, 1)});
  out.model.jumps.push_back({kappa2, mode_annihilation(space, 2)});
  return out;
}

LindbladModel three_mode_model(double t, double t_prime, double phi, double kappa1, double kappa2, double kappa3,
                               const FockSpace& space) {
  if (space.num_modes() != 3) throw Error(ErrorKind::InvalidArgument, "three_mode_model needs a three-mode space");
  auto a1 = mode_annihilation(space, 1);
  auto a2 = mode_annihilation(space, 2);
  auto a3 = mode_annihilation(space, 3);
  FockOperator h12 = (-t * std::exp(-I * phi)) * (a2.adjoint() * a1);
  FockOperator h3 = (-t_prime) * (a3.adjoint() * (std::exp(-I * phi) * a2 + std::exp(I * phi) * a1));
  LindbladModel m;
  m.space = space;
  m.hamiltonian = h12 + h12.adjoint() + h3 + h3.adjoint();
  m.jumps = {{kappa1, a1}, {kappa2, a2}, {kappa3, a3}};
  m.validate();
  return m;
}

AdiabaticComparison compare_adiabatic(double t, double t_prime, double phi, double kappa1, double kappa2,
                                      double kappa3, double t_final, cplx alpha, cplx beta) {
  AdiabaticComparison cmp;
  FockSpace s3(3, 1), s2(2, 1);
  cmp.elimination = adiabatic_eliminate(t, t_prime, phi, kappa1, kappa2, kappa3, s2);
  LindbladModel full = three_mode_model(t, t_prime, phi, kappa1, kappa2, kappa3, s3);

  CVector psi3 = CVector::Zero(s3.dimension());
  psi3(s3.index({0, 0, 0})) = 1.0;
  psi3(s3.index({1, 0, 0})) = alpha;
  psi3(s3.index({0, 1, 0})) = beta;
  // <a1>_full = e^{i phi} <a1>_ring
  CVector psi2 = CVector::Zero(s2.dimension());
  psi2(s2.index({0, 0})) = 1.0;
  psi2(s2.index({1, 0})) = alpha * std::exp(-I * phi);
  psi2(s2.index({0, 1})) = beta;

  double dt = std::min(stable_dt(full), stable_dt(cmp.elimination.model));
  // sample on a common grid
  long steps = static_cast<long>(std::ceil(t_final / dt));
  int every = static_cast<int>(std::max<long>(1, steps / 500));
  auto ev_full = evolve(full, DensityMatrix::pure(s3, psi3), t_final, t_final / steps, every);
  auto ev_red = evolve(cmp.elimination.model, DensityMatrix::pure(s2, psi2), t_final, t_final / steps, every);

  auto a1f = mode_annihilation(s3, 1), a2f = mode_annihilation(s3, 2);
  auto a1r = mode_annihilation(s2, 1), a2r = mode_annihilation(s2, 2);
  double max_full1 = 0.0, max_full2 = 0.0, max_d1 = 0.0, max_d2 = 0.0;
  for (std::size_t i = 0; i < ev_full.times.size(); ++i) {
    cmp.times.push_back(ev_full.times[i]);
    cmp.full_a1.push_back(expectation(a1f, ev_full.states[i]));
    cmp.full_a2.push_back(expectation(a2f, ev_full.states[i]));
    cmp.reduced_a1.push_back(std::exp(I * phi) * expectation(a1r, ev_red.states[i]));
    cmp.reduced_a2.push_back(expectation(a2r, ev_red.states[i]));
    max_full1 = std::max(max_full1, std::abs(cmp.full_a1.back()));
    max_full2 = std::max(max_full2, std::abs(cmp.full_a2.back()));
    max_d1 = std::max(max_d1, std::abs(cmp.full_a1.back() - cmp.reduced_a1.back()));
    max_d2 = std::max(max_d2, std::abs(cmp.full_a2.back() - cmp.reduced_a2.back()));
  }
  cmp.rel_err_a1 = max_full1 > 0.0 ? max_d1 / max_full1 : 0.0;
  cmp.rel_err_a2 = max_full2 > 0.0 ? max_d2 / max_full2 : 0.0;
  cmp.max_rel_err = std::max(cmp.rel_err_a1, cmp.rel_err_a2);
  return cmp;
}

double mean_value_eom_check(const NonreciprocalModel& nr, const FockOperator& probe, const CMatrix& rho) {
  require_space(nr.model.space, probe.space());
  bool side1 = acts_trivially_on(probe, nr.cut.s2);
  bool side2 = acts_trivially_on(probe, nr.cut.s1);
  if (!side1 && !side2) throw Error(ErrorKind::InvalidArgument, "probe is not local to either subsystem");
  const CMatrix& x = probe.matrix();
  cplx lhs = (x * apply_liouvillian(nr.model, rho)).trace();

  const CMatrix c = (nr.o1 * nr.o2).matrix();
  CMatrix h_local = nr.model.hamiltonian.matrix() - 0.5 * nr.lambda * (c + c.adjoint());
  cplx lt = side1 ? nr.couplings.lambda12 : nr.couplings.lambda21;
  CMatrix h_int = 0.5 * (lt * c + std::conj(lt) * c.adjoint());
  CMatrix h_seen = h_local + h_int;
  cplx rhs = I * (rho * commutator(h_seen, x)).trace();
  rhs += nr.rate * (x * dissipator(side1 ? nr.p : nr.q, rho)).trace();
  for (std::size_t k = 1; k < nr.model.jumps.size(); ++k)
    rhs += nr.model.jumps[k].rate * (x * dissipator(nr.model.jumps[k].op, rho)).trace();
  return std::abs(lhs - rhs);
}

}  // namespace nonrecip
