#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qprosumer/problem.hpp"
#include "qprosumer/reduction.hpp"

namespace qprosumer {

inline constexpr int kEnumerationBound = 30;  // load variables / spins

struct SolutionRecord {
  ScheduleAssignment schedule;
  std::int64_t cost = 0;
  std::string bits;  // load-variable part, variable 1 leftmost
  int rank = 0;
};

// Exhaustive scan over load-variable assignments (slack residuals are
// implied); returns every schedule meeting the power cap and the per-load
// durations, sorted by (cost asc, bitstring lex asc) with 1-based ranks.
// Throws SizeError above kEnumerationBound load variables.
std::vector<SolutionRecord> enumerate_feasible(const ProsumerInstance& instance);

struct BruteForceResult {
  std::string bits;
  std::uint64_t index = 0;
  double value = 0.0;
};

// Exact argmin over all 2^n bitstrings; ties broken by lexicographic
// bitstring order. Throws SizeError above kEnumerationBound variables.
BruteForceResult brute_force_minimum(const IsingModel& ising);
BruteForceResult brute_force_minimum(const QuboModel& qubo);

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

// Cross-validates the reduction chain on one instance: (a) QUBO and Ising
// evaluation equivalence against the penalized ILP objective (exhaustive up
// to 20 variables, seeded sampling above), (b) penalty separation (every
// constraint-violating bitstring costs at least C_up + 1), (c) the
// brute-force optimum decodes to the best enumerated schedule. A failed
// check names a witness bitstring. The penalty override exists to probe
// mis-tuned penalties.
VerificationReport verify_reduction(const ProsumerInstance& instance,
                                    std::optional<double> penalty_override = {});

// Table-shaped emitters: one column per load variable in declaration order
// (x_<id>^<hour>) plus the cost.
std::string records_csv(const ProsumerInstance& instance,
                        const std::vector<SolutionRecord>& records);
std::string records_document(const ProsumerInstance& instance,
                             const std::vector<SolutionRecord>& records);

}  // namespace qprosumer
