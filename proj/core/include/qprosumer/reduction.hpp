#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qprosumer/problem.hpp"

namespace qprosumer {

// Records which load-hour or slack bit a variable stands for. Variables are
// ordered: all load variables (loads in declaration order, hours ascending
// within each load), then slack variables grouped by hour ascending, bit
// index ascending within the hour.
struct VarMeta {
  enum class Kind { load, slack };
  Kind kind = Kind::load;
  std::string load_id;  // load variables only
  int hour = 0;
  int bit = 0;  // slack variables: 1-based position within the hour's encoding

  bool operator==(const VarMeta&) const = default;
};

struct LinearConstraint {
  std::vector<std::int64_t> coeffs;  // dense, length num_vars
  std::int64_t rhs = 0;
};

// Binary ILP: minimize cost . x subject to coeffs . x = rhs for every
// constraint, x in {0,1}^num_vars. One power equality per hour (slack bits
// encode the unused residual), one duration equality per load.
struct BinaryLinearProgram {
  int num_vars = 0;
  int num_load_vars = 0;  // load variables form the prefix
  std::vector<std::int64_t> cost;
  std::vector<LinearConstraint> constraints;
  std::vector<VarMeta> var_meta;
};

// Coefficients of the binary encoding of an integer in {0..range_size-1}:
// 2^(m-1) for m = 1..M-1 and range_size - 2^(M-1) last, M = ceil(log2).
// Subset sums cover exactly {0..range_size-1}. Empty for range_size = 1.
std::vector<int> slack_encoding(int range_size);

// Deterministic canonical encoding of one representable value (greedy from
// the largest coefficient down). Any other subset with the same sum is an
// equally valid encoding.
std::vector<std::uint8_t> encode_slack_value(const std::vector<int>& coeffs, int value);

BinaryLinearProgram build_ilp(const ProsumerInstance& instance);

// 1.0 + C_up - C_low, where C_up is the objective with every load bit on
// over its window and C_low = 0 (all bits off). Any constraint violation then
// costs more than any feasible objective improvement.
double penalty_coefficient(const ProsumerInstance& instance);

// Quadratic polynomial over {0,1} variables: offset + sum u_i b_i +
// sum_{i<j} v_ij b_i b_j. Squares are folded into the linear part, so the
// quadratic map holds strictly i < j keys (0-based).
struct QuboModel {
  int num_vars = 0;
  std::vector<double> linear;
  std::map<std::pair<int, int>, double> quadratic;
  double offset = 0.0;
  double penalty = 0.0;
};

// Equivalent form over spins z in {+1,-1}: offset + sum h_i z_i +
// sum_{i<j} J_ij z_i z_j, with z = +1 for bit 0 and z = -1 for bit 1.
// Coefficients are stored signed so that this expression equals the QUBO
// value of the corresponding bitstring exactly.
struct IsingModel {
  int num_spins = 0;
  std::vector<double> fields;
  std::map<std::pair<int, int>, double> couplings;
  double offset = 0.0;
};

// Expands cost . x + penalty * sum_m (coeffs_m . x - rhs_m)^2 and folds
// x^2 -> x; the constant lands in offset.
QuboModel qubo_from_ilp(const BinaryLinearProgram& ilp, double penalty);

// Substitutes b_i = (1 - z_i)/2. Zero couplings are dropped.
IsingModel ising_from_qubo(const QuboModel& qubo);

double qubo_value(const QuboModel& qubo, const std::vector<std::uint8_t>& bits);
double ising_energy(const IsingModel& ising, const std::vector<int>& spins);

std::vector<int> spins_from_bits(const std::vector<std::uint8_t>& bits);
std::vector<std::uint8_t> bits_from_spins(const std::vector<int>& spins);

// Little-endian basis index: variable i (1-based) is bit i-1 of the index.
std::vector<std::uint8_t> bits_of_index(std::uint64_t index, int num_vars);
std::uint64_t index_of_bits(const std::vector<std::uint8_t>& bits);

// Bitstring with variable 1 leftmost, e.g. "110010".
std::string bits_to_string(const std::vector<std::uint8_t>& bits);
std::vector<std::uint8_t> bits_from_string(const std::string& s);

// Export documents (JSON text), 1-indexed, keys ordered i asc then j asc.
std::string qubo_document(const QuboModel& qubo);
std::string ising_document(const IsingModel& ising);
std::string ilp_document(const BinaryLinearProgram& ilp);

}  // namespace qprosumer
