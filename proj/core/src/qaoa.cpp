#include "qprosumer/qaoa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>

#include "json.hpp"

#include "qprosumer/errors.hpp"
#include "qprosumer/nelder_mead.hpp"

namespace qprosumer {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.1415926535897932384626433832795;

// Seed-derivation chain: restart r consumes the r-th output, the sampling
// step the next one, so restarts and sampling never share generator state.
std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d4a4ca9d0aef3dULL;
  return z ^ (z >> 31);
}

// Top 53 bits -> [0, 1); identical on every platform, unlike
// std::uniform_real_distribution.
double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53;
}

// Tables above this size stop paying for themselves in memory.
constexpr int kMaterializeLimit = 22;

void apply_layers(Statevector& state, const DiagonalHamiltonian& diag,
                  const std::vector<double>& gammas,
                  const std::vector<double>& betas) {
  for (std::size_t layer = 0; layer < gammas.size(); ++layer) {
    apply_phase_separator(state, diag, gammas[layer]);
    apply_mixer(state, betas[layer]);
  }
}

}  // namespace

Statevector::Statevector(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1) throw ValidationError("statevector needs at least one qubit");
  if (num_qubits >= 63) throw ResourceError("statevector dimension overflows a 64-bit index");
  amps_.assign(dim(), {0.0, 0.0});
  amps_[0] = {1.0, 0.0};
}

Statevector Statevector::basis(int num_qubits, std::uint64_t index) {
  Statevector state(num_qubits);
  state.amps_.at(0) = {0.0, 0.0};
  state.amps_.at(index) = {1.0, 0.0};
  return state;
}

double Statevector::norm_sq() const {
  double total = 0.0;
  for (const auto& a : amps_) total += std::norm(a);
  return total;
}

DiagonalHamiltonian::DiagonalHamiltonian(IsingModel model) : model_(std::move(model)) {
  coupling_list_.reserve(model_.couplings.size());
  for (const auto& [ij, value] : model_.couplings) coupling_list_.push_back({ij, value});
}

double DiagonalHamiltonian::energy(std::uint64_t index) const {
  if (!table_.empty()) return table_[index];
  double e = model_.offset;
  for (int i = 0; i < model_.num_spins; ++i) {
    e += ((index >> i) & 1u) ? -model_.fields[static_cast<size_t>(i)]
                             : model_.fields[static_cast<size_t>(i)];
  }
  for (const auto& [ij, value] : coupling_list_) {
    const bool anti = ((index >> ij.first) ^ (index >> ij.second)) & 1u;
    e += anti ? -value : value;
  }
  return e;
}

void DiagonalHamiltonian::materialize() {
  if (!table_.empty()) return;
  const std::uint64_t dim = std::uint64_t{1} << model_.num_spins;
  std::vector<double> table(dim);
  for (std::uint64_t k = 0; k < dim; ++k) table[k] = energy(k);
  table_ = std::move(table);
}

void validate(const QaoaConfig& config) {
  if (config.reps < 1) throw ValidationError("reps must be at least 1");
  if (config.shots < 1) throw ValidationError("shots must be at least 1");
  if (config.max_evals < 0) throw ValidationError("max_evals must not be negative");
  if (config.restarts < 1) throw ValidationError("restarts must be at least 1");
  if (config.qubit_cap < 1) throw ValidationError("qubit cap must be at least 1");
}

Statevector initial_state(int num_qubits, int qubit_cap) {
  if (num_qubits < 1) throw ValidationError("statevector needs at least one qubit");
  if (num_qubits > qubit_cap) {
    throw ResourceError("simulation needs " + std::to_string(num_qubits) +
                        " qubits, above the statevector cap of " +
                        std::to_string(qubit_cap) + "; raise the cap to proceed");
  }
  Statevector state(num_qubits);
  const double amp = 1.0 / std::sqrt(static_cast<double>(state.dim()));
  std::fill(state.amplitudes().begin(), state.amplitudes().end(),
            std::complex<double>{amp, 0.0});
  return state;
}

void apply_phase_separator(Statevector& state, const DiagonalHamiltonian& diag,
                           double gamma) {
  if (state.num_qubits() != diag.num_qubits())
    throw ValidationError("statevector and Hamiltonian sizes differ");
  auto& amps = state.amplitudes();
  const std::uint64_t dim = state.dim();
  for (std::uint64_t k = 0; k < dim; ++k)
    amps[k] *= std::polar(1.0, -gamma * diag.energy(k));
}

void apply_mixer(Statevector& state, double beta) {
  auto& amps = state.amplitudes();
  const std::uint64_t dim = state.dim();
  const double c = std::cos(beta);
  const std::complex<double> ms{0.0, -std::sin(beta)};
  for (int q = 0; q < state.num_qubits(); ++q) {
    const std::uint64_t stride = std::uint64_t{1} << q;
    for (std::uint64_t base = 0; base < dim; base += 2 * stride) {
      for (std::uint64_t low = base; low < base + stride; ++low) {
        const auto a0 = amps[low];
        const auto a1 = amps[low + stride];
        amps[low] = c * a0 + ms * a1;
        amps[low + stride] = ms * a0 + c * a1;
      }
    }
  }
}

double expectation(const Statevector& state, const DiagonalHamiltonian& diag) {
  if (state.num_qubits() != diag.num_qubits())
    throw ValidationError("statevector and Hamiltonian sizes differ");
  double total = 0.0;
  const std::uint64_t dim = state.dim();
  for (std::uint64_t k = 0; k < dim; ++k) {
    const double p = std::norm(state.amp(k));
    if (p > 0.0) total += p * diag.energy(k);
  }
  return total;
}

double qaoa_expectation(const IsingModel& ising, const std::vector<double>& gammas,
                        const std::vector<double>& betas, int qubit_cap) {
  if (gammas.size() != betas.size())
    throw ValidationError("gamma and beta vectors must have equal length");
  DiagonalHamiltonian diag(ising);
  if (ising.num_spins <= kMaterializeLimit) diag.materialize();
  Statevector state = initial_state(ising.num_spins, qubit_cap);
  apply_layers(state, diag, gammas, betas);
  return expectation(state, diag);
}

OptimizedParameters optimize_parameters(const IsingModel& ising,
                                        const QaoaConfig& config) {
  validate(config);
  if (ising.num_spins > config.qubit_cap) {
    throw ResourceError("simulation needs " + std::to_string(ising.num_spins) +
                        " qubits, above the statevector cap of " +
                        std::to_string(config.qubit_cap) + "; raise the cap to proceed");
  }
  const int p = config.reps;
  DiagonalHamiltonian diag(ising);
  if (ising.num_spins <= kMaterializeLimit) diag.materialize();

  const auto objective = [&](const std::vector<double>& params) {
    Statevector state = initial_state(ising.num_spins, config.qubit_cap);
    for (int layer = 0; layer < p; ++layer) {
      apply_phase_separator(state, diag, params[static_cast<size_t>(layer)]);
      apply_mixer(state, params[static_cast<size_t>(p + layer)]);
    }
    return expectation(state, diag);
  };

  NelderMeadOptions options;
  options.max_evals = config.max_evals > 0 ? config.max_evals : 300 * p;

  OptimizedParameters best;
  best.expectation = std::numeric_limits<double>::infinity();
  std::uint64_t chain = config.seed;
  for (int restart = 0; restart < config.restarts; ++restart) {
    std::mt19937_64 rng(splitmix64(chain));
    std::vector<double> start(static_cast<size_t>(2 * p));
    for (int i = 0; i < p; ++i) start[static_cast<size_t>(i)] = kTwoPi * unit_double(rng);
    for (int i = 0; i < p; ++i) start[static_cast<size_t>(p + i)] = kPi * unit_double(rng);
    const NelderMeadResult result = nelder_mead(objective, start, options);
    best.trace.insert(best.trace.end(), result.history.begin(), result.history.end());
    best.evaluations += result.evaluations;
    if (result.fx < best.expectation) {
      best.expectation = result.fx;
      best.gammas.assign(result.x.begin(), result.x.begin() + p);
      best.betas.assign(result.x.begin() + p, result.x.end());
    }
  }
  return best;
}

std::map<std::uint64_t, int> sample(const Statevector& state, int shots,
                                    std::uint64_t seed) {
  if (shots < 1) throw ValidationError("shots must be at least 1");
  std::mt19937_64 rng(seed);
  std::vector<double> draws(static_cast<size_t>(shots));
  for (auto& d : draws) d = unit_double(rng);
  std::sort(draws.begin(), draws.end());

  // One sweep over the distribution against the sorted draws keeps memory
  // at O(shots) even for 2^24 amplitudes.
  std::map<std::uint64_t, int> counts;
  const std::uint64_t dim = state.dim();
  double cumulative = 0.0;
  std::size_t next = 0;
  std::uint64_t last_supported = 0;
  for (std::uint64_t k = 0; k < dim; ++k) {
    const double p = std::norm(state.amp(k));
    if (p <= 0.0) continue;
    last_supported = k;
    cumulative += p;
    int hits = 0;
    while (next < draws.size() && draws[next] < cumulative) {
      ++hits;
      ++next;
    }
    if (hits > 0) counts[k] += hits;
  }
  // Rounding can leave the cumulative sum a hair under 1; park the
  // leftover draws on the last outcome with support.
  if (next < draws.size()) counts[last_supported] += static_cast<int>(draws.size() - next);
  return counts;
}

QaoaResult solve_qaoa(const ProsumerInstance& instance, const QaoaConfig& config) {
  validate(instance);
  validate(config);
  const BinaryLinearProgram ilp = build_ilp(instance);
  if (ilp.num_vars > config.qubit_cap) {
    throw ResourceError("instance reduces to " + std::to_string(ilp.num_vars) +
                        " qubits, above the statevector cap of " +
                        std::to_string(config.qubit_cap) + "; raise the cap to proceed");
  }
  const QuboModel qubo = qubo_from_ilp(ilp, penalty_coefficient(instance));
  const IsingModel ising = ising_from_qubo(qubo);

  const OptimizedParameters optimized = optimize_parameters(ising, config);

  DiagonalHamiltonian diag(ising);
  if (ising.num_spins <= kMaterializeLimit) diag.materialize();
  Statevector state = initial_state(ising.num_spins, config.qubit_cap);
  apply_layers(state, diag, optimized.gammas, optimized.betas);

  std::uint64_t chain = config.seed;
  for (int restart = 0; restart < config.restarts; ++restart) splitmix64(chain);
  const auto counts = sample(state, config.shots, splitmix64(chain));

  QaoaResult result;
  result.gammas = optimized.gammas;
  result.betas = optimized.betas;
  result.expectation = optimized.expectation;
  result.baseline_expectation = ising.offset;  // zero-parameter value
  result.trace = optimized.trace;

  result.samples.reserve(counts.size());
  for (const auto& [index, count] : counts) {
    DecodedSample decoded;
    decoded.index = index;
    decoded.count = count;
    const auto bits = bits_of_index(index, ilp.num_vars);
    decoded.bits = bits_to_string(bits);
    decoded.energy = diag.energy(index);
    const std::vector<std::uint8_t> load_bits(
        bits.begin(), bits.begin() + ilp.num_load_vars);
    decoded.schedule = ScheduleAssignment::from_load_bits(instance, load_bits);
    decoded.cost = cost_of_schedule(instance, decoded.schedule);
    decoded.feasible = is_feasible(instance, decoded.schedule).feasible;
    result.samples.push_back(std::move(decoded));
  }
  std::sort(result.samples.begin(), result.samples.end(),
            [](const DecodedSample& a, const DecodedSample& b) {
              if (a.feasible != b.feasible) return a.feasible;
              if (a.cost != b.cost) return a.cost < b.cost;
              return a.bits < b.bits;
            });
  return result;
}

std::string result_document(const QaoaResult& result) {
  nlohmann::json doc;
  doc["params"]["gamma"] = result.gammas;
  doc["params"]["beta"] = result.betas;
  doc["expectation"] = result.expectation;
  doc["baseline_expectation"] = result.baseline_expectation;
  doc["samples"] = nlohmann::json::array();
  for (const auto& s : result.samples) {
    doc["samples"].push_back({{"bits", s.bits},
                              {"count", s.count},
                              {"energy", s.energy},
                              {"cost", s.cost},
                              {"feasible", s.feasible}});
  }
  doc["trace"] = result.trace;
  return doc.dump(2) + "\n";
}

}  // namespace qprosumer
