#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qprosumer/problem.hpp"
#include "qprosumer/reduction.hpp"

namespace qprosumer {

inline constexpr int kDefaultQubitCap = 24;

// 2^n complex amplitudes; basis index k holds variable i (1-based) in bit
// i-1, so k = sum b_i 2^(i-1). Exclusively owned during layer application.
class Statevector {
 public:
  explicit Statevector(int num_qubits);  // |0...0>
  static Statevector basis(int num_qubits, std::uint64_t index);

  int num_qubits() const { return num_qubits_; }
  std::uint64_t dim() const { return std::uint64_t{1} << num_qubits_; }
  std::complex<double>& amp(std::uint64_t k) { return amps_[k]; }
  const std::complex<double>& amp(std::uint64_t k) const { return amps_[k]; }
  std::vector<std::complex<double>>& amplitudes() { return amps_; }
  const std::vector<std::complex<double>>& amplitudes() const { return amps_; }
  double norm_sq() const;

 private:
  int num_qubits_;
  std::vector<std::complex<double>> amps_;
};

// Diagonal of the spin Hamiltonian: energy(k) is the Ising energy of the
// spin string encoded by basis index k (bit 0 -> spin +1, bit 1 -> spin -1).
// Energies are computed per index by default; materialize() trades a 2^n
// table for constant-time lookups.
class DiagonalHamiltonian {
 public:
  explicit DiagonalHamiltonian(IsingModel model);

  int num_qubits() const { return model_.num_spins; }
  const IsingModel& model() const { return model_; }
  double energy(std::uint64_t index) const;
  void materialize();
  bool materialized() const { return !table_.empty(); }

 private:
  IsingModel model_;
  std::vector<std::pair<std::pair<int, int>, double>> coupling_list_;
  std::vector<double> table_;
};

struct QaoaConfig {
  int reps = 1;         // QAOA layer count p
  int shots = 1024;
  int max_evals = 0;    // per restart; 0 picks 150 * 2p
  int restarts = 1;
  std::uint64_t seed = 1;
  int qubit_cap = kDefaultQubitCap;
};

void validate(const QaoaConfig& config);

// Uniform superposition |+...+>; throws ResourceError above the cap.
Statevector initial_state(int num_qubits, int qubit_cap = kDefaultQubitCap);

// amp_k *= exp(-i gamma energy(k)); norm preserved.
void apply_phase_separator(Statevector& state, const DiagonalHamiltonian& diag,
                           double gamma);

// Independent X rotation on every qubit: each amplitude pair differing in
// one bit maps to (cos b * a - i sin b * b, -i sin b * a + cos b * b).
void apply_mixer(Statevector& state, double beta);

double expectation(const Statevector& state, const DiagonalHamiltonian& diag);

// Expectation after |+...+> followed by reps alternating (phase, mixer)
// layers. Never below the exact minimum energy.
double qaoa_expectation(const IsingModel& ising, const std::vector<double>& gammas,
                        const std::vector<double>& betas,
                        int qubit_cap = kDefaultQubitCap);

struct OptimizedParameters {
  std::vector<double> gammas;
  std::vector<double> betas;
  double expectation = 0.0;
  std::vector<double> trace;  // objective value per evaluation, all restarts
  int evaluations = 0;
};

// Multi-start simplex descent over (gamma, beta); gamma starts uniform in
// [0, 2pi), beta in [0, pi). Deterministic for a given seed.
OptimizedParameters optimize_parameters(const IsingModel& ising,
                                        const QaoaConfig& config);

// Multinomial draw from |amp|^2; counts sum to shots, deterministic for a
// given seed.
std::map<std::uint64_t, int> sample(const Statevector& state, int shots,
                                    std::uint64_t seed);

struct DecodedSample {
  std::string bits;  // full register, variable 1 leftmost
  std::uint64_t index = 0;
  int count = 0;
  double energy = 0.0;
  std::int64_t cost = 0;
  bool feasible = false;
  ScheduleAssignment schedule;  // decoded from the load-variable prefix
};

struct QaoaResult {
  std::vector<double> gammas;
  std::vector<double> betas;
  double expectation = 0.0;
  double baseline_expectation = 0.0;  // zero-parameter value (mean energy)
  std::vector<DecodedSample> samples;  // feasible first, cost asc, bits lex asc
  std::vector<double> trace;
};

// Full pipeline: reduction, parameter optimization, final-state sampling,
// decoding each sampled bitstring into a ranked schedule.
QaoaResult solve_qaoa(const ProsumerInstance& instance, const QaoaConfig& config);

std::string result_document(const QaoaResult& result);

}  // namespace qprosumer
