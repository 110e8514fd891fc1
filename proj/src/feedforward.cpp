#include "nonrecip/feedforward.hpp"

#include "nonrecip/parallel.hpp"
#include "nonrecip/rng.hpp"

#include <cmath>
#include <sstream>

namespace nonrecip {

namespace {

CMatrix anticomm(const CMatrix& a, const CMatrix& b) { return a * b + b * a; }

// M rho = -i [sqrt(gamma) F2, rho]
CMatrix feedforward_map(const FeedforwardSpec& spec, const CMatrix& rho) {
  return -I * std::sqrt(spec.gamma) * commutator(spec.f2.matrix(), rho);
}

}  // namespace

void FeedforwardSpec::validate(const Bipartition& cut) const {
  if (!a1.is_hermitian()) throw Error(ErrorKind::InvalidArgument, "A1 must be Hermitian");
  if (!f2.is_hermitian()) throw Error(ErrorKind::InvalidArgument, "F2 must be Hermitian");
  if (a1.space() != f2.space()) throw Error(ErrorKind::InvalidArgument, "A1 and F2 live on different spaces");
  cut.validate(a1.space());
  if (!acts_trivially_on(a1, cut.s2)) throw Error(ErrorKind::InvalidCoupling, "A1 is not local to system 1");
  if (!acts_trivially_on(f2, cut.s1)) throw Error(ErrorKind::InvalidCoupling, "F2 is not local to system 2");
  if (!(k >= 0.0) || !(gamma >= 0.0)) throw Error(ErrorKind::InvalidArgument, "rates must be >= 0");
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be > 0");
}

CMatrix conditional_step(const CMatrix& rho, const FeedforwardSpec& spec, double dw) {
  const CMatrix& a = spec.a1.matrix();
  const double dt = spec.dt;
  const double sk = std::sqrt(spec.k);
  double mean_a = (a * rho).trace().real();
  CMatrix shifted = a - mean_a * CMatrix::Identity(a.rows(), a.cols());
  CMatrix r1 = rho + (spec.k / 4.0) * dt * dissipator(spec.a1, rho) + (sk / 2.0) * dw * anticomm(shifted, rho);
  double di = sk * mean_a * dt + dw;
  CMatrix m1 = feedforward_map(spec, r1);
  CMatrix r2 = r1 + di * m1 + 0.5 * dt * feedforward_map(spec, m1);
  r2 = 0.5 * (r2 + r2.adjoint()).eval();
  return r2 / r2.trace().real();
}

DensityMatrix conditional_step(const DensityMatrix& rho, const FeedforwardSpec& spec, double dw) {
  return DensityMatrix(rho.space(), conditional_step(rho.matrix(), spec, dw), 1e-8);
}

TrajectoryRecord simulate_trajectory(const FeedforwardSpec& spec, const DensityMatrix& rho0, double t_final,
                                     std::uint64_t trajectory, const std::vector<FockOperator>& observables,
                                     int sample_every) {
  if (spec.k * spec.dt >= 0.01)
    throw Error(ErrorKind::StepSize, "k*dt = " + std::to_string(spec.k * spec.dt) + " violates k*dt < 0.01");
  if (spec.gamma * spec.dt >= 0.01)
    throw Error(ErrorKind::StepSize,
                "gamma*dt = " + std::to_string(spec.gamma * spec.dt) + " violates gamma*dt < 0.01");
  if (rho0.space() != spec.a1.space()) throw Error(ErrorKind::InvalidArgument, "state and operators differ in space");
  if (sample_every < 1) sample_every = 1;
  long steps = static_cast<long>(std::llround(t_final / spec.dt));
  const double sdt = std::sqrt(spec.dt);
  const double sk = std::sqrt(spec.k);

  TrajectoryRecord rec;
  rec.observables.resize(observables.size());
  CMatrix rho = rho0.matrix();
  auto record = [&](double time) {
    rec.times.push_back(time);
    rec.mean_a1.push_back(expectation(spec.a1, rho).real());
    rec.mean_f2.push_back(expectation(spec.f2, rho).real());
    for (std::size_t o = 0; o < observables.size(); ++o)
      rec.observables[o].push_back(expectation(observables[o], rho).real());
  };
  record(0.0);
  rec.dw.reserve(steps);
  rec.di.reserve(steps);
  for (long n = 0; n < steps; ++n) {
    double dw = sdt * philox_normal(spec.seed, static_cast<std::uint64_t>(n), trajectory);
    double mean_a = expectation(spec.a1, rho).real();
    rec.dw.push_back(dw);
    rec.di.push_back(sk * mean_a * spec.dt + dw);
    rho = conditional_step(rho, spec, dw);
    if ((n + 1) % sample_every == 0 || n + 1 == steps) record((n + 1) * spec.dt);
  }
  rec.final_rho = rho;
  return rec;
}

CMatrix unconditional_rhs(const FeedforwardSpec& spec, const CMatrix& rho) {
  const CMatrix& a = spec.a1.matrix();
  const double sk = std::sqrt(spec.k);
  cplx mean_a = (a * rho).trace();
  CMatrix m_rho = feedforward_map(spec, rho);
  CMatrix innovation = (sk / 2.0) * (anticomm(a, rho) - 2.0 * mean_a * rho);
  return (spec.k / 4.0) * dissipator(spec.a1, rho) + sk * mean_a * m_rho + 0.5 * feedforward_map(spec, m_rho) +
         feedforward_map(spec, innovation);
}

SparseCMatrix unconditional_generator(const FeedforwardSpec& spec) {
  const auto d = spec.a1.space().dimension();
  std::vector<Eigen::Triplet<cplx>> trip;
  for (Eigen::Index col = 0; col < d; ++col)
    for (Eigen::Index row = 0; row < d; ++row) {
      CMatrix e = CMatrix::Zero(d, d);
      e(row, col) = 1.0;
      CVector out = vec(unconditional_rhs(spec, e));
      for (Eigen::Index i = 0; i < out.size(); ++i)
        if (out(i) != cplx(0.0)) trip.emplace_back(i, col * d + row, out(i));
    }
  SparseCMatrix g(d * d, d * d);
  g.setFromTriplets(trip.begin(), trip.end());
  return g;
}

EquivalenceParameters equivalence_parameters(double k, double gamma) {
  if (!(k > 0.0) || !(gamma > 0.0)) throw Error(ErrorKind::InvalidArgument, "k and gamma must be > 0");
  return {std::sqrt(k * gamma / 4.0), std::sqrt(k / (4.0 * gamma))};
}

std::pair<double, double> feedforward_rates(double lambda, double eta) {
  if (!(lambda > 0.0) || !(eta > 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda and eta must be > 0");
  return {4.0 * lambda * eta, lambda / eta};
}

NonreciprocalModel equivalent_directional_model(const FeedforwardSpec& spec, std::optional<Bipartition> cut) {
  auto p = equivalence_parameters(spec.k, spec.gamma);
  return build_nonreciprocal(spec.a1, spec.f2, p.lambda, Directional{p.eta, 1}, cut);
}

EnsembleReport run_ensemble(const FeedforwardSpec& spec, const DensityMatrix& rho0, double t_final,
                            int num_trajectories, const std::vector<FockOperator>& observables,
                            const std::vector<std::string>& names, int sample_every) {
  if (num_trajectories < 2) throw Error(ErrorKind::InvalidArgument, "ensemble needs at least two trajectories");
  if (names.size() != observables.size()) throw Error(ErrorKind::InvalidArgument, "one name per observable");
  std::vector<TrajectoryRecord> runs(num_trajectories);
  parallel_for(num_trajectories, [&](std::size_t i) {
    runs[i] = simulate_trajectory(spec, rho0, t_final, i, observables, sample_every);
    runs[i].dw.clear();
    runs[i].di.clear();
  });
  EnsembleReport rep;
  rep.num_trajectories = num_trajectories;
  rep.dt = spec.dt;
  const std::size_t samples = runs[0].times.size();
  std::vector<double> column(num_trajectories);
  for (std::size_t o = 0; o < observables.size(); ++o) {
    ObservableSeries s;
    s.name = names[o];
    s.times = runs[0].times;
    for (std::size_t t = 0; t < samples; ++t) {
      for (int i = 0; i < num_trajectories; ++i) column[i] = runs[i].observables[o][t];
      double mean = pairwise_sum(column) / num_trajectories;
      for (int i = 0; i < num_trajectories; ++i) column[i] = (column[i] - mean) * (column[i] - mean);
      double var = pairwise_sum(column) / (num_trajectories - 1);
      s.mean.push_back(mean);
      s.stderr_.push_back(std::sqrt(var / num_trajectories));
    }
    rep.observables.push_back(std::move(s));
  }
  return rep;
}

EnsembleComparison compare_with_deterministic(const FeedforwardSpec& spec, const DensityMatrix& rho0,
                                              const EnsembleReport& report,
                                              const std::vector<FockOperator>& observables, double checkpoint) {
  if (report.observables.size() != observables.size())
    throw Error(ErrorKind::InvalidArgument, "observable list does not match the report");
  EnsembleComparison cmp;
  if (observables.empty()) return cmp;
  const auto& times = report.observables[0].times;
  SparseCMatrix gen = unconditional_generator(spec);
  // RK4 on the generator with a step that divides every sample interval
  const auto d = rho0.space().dimension();
  CVector x = vec(rho0.matrix());
  double t_now = 0.0;
  double h_max = 0.01 / std::max({1.0, spec.k, spec.gamma});
  for (std::size_t s = 0; s < times.size(); ++s) {
    double span = times[s] - t_now;
    if (span > 0.0) {
      long n = static_cast<long>(std::ceil(span / h_max - 1e-9));
      double h = span / n;
      for (long i = 0; i < n; ++i) {
        CVector k1 = gen * x;
        CVector k2 = gen * (x + 0.5 * h * k1);
        CVector k3 = gen * (x + 0.5 * h * k2);
        CVector k4 = gen * (x + h * k3);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      t_now = times[s];
    }
    bool check = checkpoint <= 0.0;
    if (!check) {
      double r = times[s] / checkpoint;
      check = times[s] > 0.0 && std::abs(r - std::round(r)) < 1e-9;
    }
    CMatrix rho = unvec(x, d);
    for (std::size_t o = 0; o < observables.size(); ++o) {
      double det = expectation(observables[o], rho).real();
      if (s + 1 == times.size()) cmp.deterministic_final.push_back(det);
      if (!check) continue;
      double diff = std::abs(report.observables[o].mean[s] - det);
      double se = report.observables[o].stderr_[s];
      double z = diff <= 1e-12 ? 0.0 : diff / std::max(se, 1e-300);
      cmp.max_z = std::max(cmp.max_z, z);
    }
  }
  return cmp;
}

}  // namespace nonrecip
