#include "nonrecip/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

namespace nonrecip {

void LatticeModel::validate() const {
  if (num_sites < 1) throw Error(ErrorKind::InvalidModel, "lattice needs at least one site");
  if (static_cast<int>(onsite_freq.size()) != num_sites)
    throw Error(ErrorKind::InvalidModel, "onsite_freq length does not match num_sites");
  if (static_cast<int>(port_rates.size()) != num_sites)
    throw Error(ErrorKind::InvalidModel, "port_rates length does not match num_sites");
  for (double k : port_rates)
    if (!(k >= 0.0) || !std::isfinite(k)) throw Error(ErrorKind::InvalidModel, "port rates must be finite and >= 0");
  for (double w : onsite_freq)
    if (!std::isfinite(w)) throw Error(ErrorKind::InvalidModel, "onsite frequency is not finite");
  std::set<std::pair<int, int>> seen;
  for (const auto& h : hoppings) {
    if (h.from < 1 || h.from > num_sites || h.to < 1 || h.to > num_sites)
      throw Error(ErrorKind::InvalidModel,
                  "hopping index out of range: (" + std::to_string(h.from) + "," + std::to_string(h.to) + ")");
    if (h.from == h.to) throw Error(ErrorKind::InvalidModel, "self-hopping on site " + std::to_string(h.from));
    if (h.from < h.to) throw Error(ErrorKind::InvalidModel, "hoppings must be stored with from > to");
    if (!seen.insert({h.from, h.to}).second)
      throw Error(ErrorKind::InvalidModel, "duplicate hopping for a pair");
  }
}

bool LatticeModel::has_bond(int a, int b) const {
  int hi = std::max(a, b), lo = std::min(a, b);
  return std::any_of(hoppings.begin(), hoppings.end(),
                     [&](const Hopping& h) { return h.from == hi && h.to == lo; });
}

cplx LatticeModel::hopping(int a, int b) const {
  int hi = std::max(a, b), lo = std::min(a, b);
  for (const auto& h : hoppings)
    if (h.from == hi && h.to == lo) return a > b ? h.amplitude : std::conj(h.amplitude);
  throw Error(ErrorKind::InvalidArgument, "no bond between sites " + std::to_string(a) + " and " + std::to_string(b));
}

LatticeModel ring3(double t, double phi, double onsite, double kappa) {
  LatticeModel m;
  m.num_sites = 3;
  m.onsite_freq.assign(3, onsite);
  m.port_rates.assign(3, kappa);
  cplx fwd = t * std::exp(-I * phi);
  m.hoppings = {{2, 1, fwd}, {3, 2, fwd}, {3, 1, std::conj(fwd)}};
  return m;
}

LatticeModel ring3_bond_flux(double t, double flux, double onsite, double kappa) {
  LatticeModel m = ring3(t, 0.0, onsite, kappa);
  m.hoppings[2].amplitude = t * std::exp(I * flux);
  return m;
}

LatticeModel uniform_ring(int n, double t) {
  LatticeModel m;
  m.num_sites = n;
  m.onsite_freq.assign(n, 0.0);
  m.port_rates.assign(n, 0.0);
  for (int j = 2; j <= n; ++j) m.hoppings.push_back({j, j - 1, t});
  if (n > 2) m.hoppings.push_back({n, 1, t});
  return m;
}

CMatrix build_hamiltonian(const LatticeModel& model) {
  model.validate();
  const int n = model.num_sites;
  CMatrix h = CMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) h(j, j) = model.onsite_freq[j];
  for (const auto& hop : model.hoppings) {
    h(hop.from - 1, hop.to - 1) = -hop.amplitude;
    h(hop.to - 1, hop.from - 1) = -std::conj(hop.amplitude);
  }
  return h;
}

LatticeModel apply_gauge(const LatticeModel& model, const GaugeTransform& g) {
  model.validate();
  if (static_cast<int>(g.phases.size()) != model.num_sites)
    throw Error(ErrorKind::InvalidArgument, "gauge transform length does not match num_sites");
  LatticeModel out = model;
  for (auto& h : out.hoppings) h.amplitude *= std::exp(I * (g.phases[h.to - 1] - g.phases[h.from - 1]));
  return out;
}

double loop_flux(const LatticeModel& model, const std::vector<int>& cycle) {
  model.validate();
  if (cycle.size() < 2) throw Error(ErrorKind::InvalidArgument, "cycle needs at least two sites");
  std::vector<int> walk = cycle;
  if (walk.front() != walk.back()) walk.push_back(walk.front());
  // sum of phases rather than the product avoids underflow on long walks
  double phase = 0.0;
  for (std::size_t s = 0; s + 1 < walk.size(); ++s) {
    int a = walk[s], b = walk[s + 1];
    if (a < 1 || a > model.num_sites || b < 1 || b > model.num_sites)
      throw Error(ErrorKind::InvalidArgument, "cycle site out of range");
    if (!model.has_bond(a, b))
      throw Error(ErrorKind::InvalidArgument,
                  "cycle uses missing bond " + std::to_string(a) + "->" + std::to_string(b));
    cplx amp = model.hopping(a, b);
    if (std::abs(amp) == 0.0) throw Error(ErrorKind::InvalidArgument, "cycle uses a zero-amplitude bond");
    phase += std::arg(amp);
  }
  return wrap_phase(phase);
}

RingSpectrum ring_spectrum(double t, double flux) {
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "ring_spectrum needs t > 0");
  RingSpectrum s;
  s.flux = wrap_phase(flux);
  s.eigenvectors = CMatrix(3, 3);
  int col = 0;
  for (int m : {-1, 0, 1}) {
    double k = 2.0 * pi * m / 3.0;
    s.labels.push_back(m);
    s.wavevectors.push_back(k);
    s.energies.push_back(-2.0 * t * std::cos(k + flux / 3.0));
    for (int j = 1; j <= 3; ++j) s.eigenvectors(j - 1, col) = std::exp(I * (k * j)) / std::sqrt(3.0);
    ++col;
  }
  return s;
}

double band_curvature(double t, double lattice_const) {
  if (!(t > 0.0) || !(lattice_const > 0.0))
    throw Error(ErrorKind::InvalidArgument, "band_curvature needs positive t and lattice constant");
  const int n = 256;
  CMatrix h = build_hamiltonian(uniform_ring(n, t));
  // band minimum of -2t cos(ka) sits at k = 0, take m = -2..2
  Eigen::MatrixXd design(5, 3);
  Eigen::VectorXd energy(5);
  for (int row = 0, m = -2; m <= 2; ++m, ++row) {
    double k = 2.0 * pi * m / (n * lattice_const);
    CVector psi(n);
    for (int j = 0; j < n; ++j) psi(j) = std::exp(I * (k * lattice_const * j)) / std::sqrt(double(n));
    energy(row) = (psi.adjoint() * h * psi)(0, 0).real();
    design(row, 0) = 1.0;
    design(row, 1) = k;
    design(row, 2) = k * k;
  }
  Eigen::Vector3d c = design.colPivHouseholderQr().solve(energy);
  return 1.0 / (2.0 * c(2));
}

nlohmann::json lattice_to_json(const LatticeModel& model) {
  nlohmann::json doc;
  doc["sites"] = model.num_sites;
  doc["omega"] = model.onsite_freq;
  doc["kappa"] = model.port_rates;
  doc["hoppings"] = nlohmann::json::array();
  for (const auto& h : model.hoppings)
    doc["hoppings"].push_back({{"from", h.from}, {"to", h.to}, {"re", h.amplitude.real()}, {"im", h.amplitude.imag()}});
  return doc;
}

LatticeModel lattice_from_json(const nlohmann::json& doc) {
  LatticeModel m;
  try {
    m.num_sites = doc.at("sites").get<int>();
    m.onsite_freq = doc.at("omega").get<std::vector<double>>();
    m.port_rates = doc.at("kappa").get<std::vector<double>>();
    for (const auto& h : doc.at("hoppings"))
      m.hoppings.push_back({h.at("from").get<int>(), h.at("to").get<int>(),
                            cplx(h.at("re").get<double>(), h.value("im", 0.0))});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidModel, std::string("lattice json: ") + e.what());
  }
  m.validate();
  return m;
}

}  // namespace nonrecip
