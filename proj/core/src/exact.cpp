#include "qprosumer/exact.hpp"

#include <algorithm>
#include <bit>
#include <random>

#include "json.hpp"
#include "qprosumer/errors.hpp"

namespace qprosumer {

namespace {

using nlohmann::json;

// Lexicographic order of bitstrings with variable 1 leftmost.
bool index_lex_less(std::uint64_t a, std::uint64_t b, int n) {
  for (int i = 0; i < n; ++i) {
    const auto ba = (a >> i) & 1u;
    const auto bb = (b >> i) & 1u;
    if (ba != bb) return ba < bb;
  }
  return false;
}

// All size-k index subsets of {0..n-1} as window bit patterns.
std::vector<std::vector<std::uint8_t>> window_patterns(int n, int k) {
  std::vector<std::vector<std::uint8_t>> patterns;
  std::vector<int> idx(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
  while (true) {
    std::vector<std::uint8_t> bits(static_cast<size_t>(n), 0);
    for (int i : idx) bits[static_cast<size_t>(i)] = 1;
    patterns.push_back(std::move(bits));
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<size_t>(pos)] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<size_t>(pos)];
    for (int i = pos + 1; i < k; ++i)
      idx[static_cast<size_t>(i)] = idx[static_cast<size_t>(i - 1)] + 1;
  }
  return patterns;
}

template <typename ContributionFn>
BruteForceResult gray_code_scan(int n, double start_energy, ContributionFn contribution) {
  if (n < 1) throw SizeError("model has no variables");
  if (n > kEnumerationBound)
    throw SizeError("exhaustive scan over " + std::to_string(n) +
                    " variables exceeds the bound of " +
                    std::to_string(kEnumerationBound));

  double energy = start_energy;
  double best = energy;
  std::uint64_t best_index = 0;
  std::uint64_t gray = 0;
  const std::uint64_t total = std::uint64_t{1} << n;

  // One bit flips per step; contribution() reports the energy delta and
  // updates its own state. All deltas are exact in double at these
  // magnitudes, so equality ties stay exact.
  for (std::uint64_t t = 1; t < total; ++t) {
    const int q = std::countr_zero(t);
    energy += contribution(q);
    gray ^= std::uint64_t{1} << q;
    if (energy < best || (energy == best && index_lex_less(gray, best_index, n))) {
      best = energy;
      best_index = gray;
    }
  }
  return {bits_to_string(bits_of_index(best_index, n)), best_index, best};
}

std::vector<std::vector<std::pair<int, double>>> adjacency(
    int n, const std::map<std::pair<int, int>, double>& pairs) {
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<size_t>(n));
  for (const auto& [key, v] : pairs) {
    adj[static_cast<size_t>(key.first)].push_back({key.second, v});
    adj[static_cast<size_t>(key.second)].push_back({key.first, v});
  }
  return adj;
}

}  // namespace

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

std::vector<SolutionRecord> enumerate_feasible(const ProsumerInstance& instance) {
  const int num_load_vars = instance.num_load_vars();
  if (num_load_vars > kEnumerationBound)
    throw SizeError("instance has " + std::to_string(num_load_vars) +
                    " load variables; enumeration is bounded at " +
                    std::to_string(kEnumerationBound));

  // Duration constraints hold by construction; only the power cap is checked.
  std::vector<std::vector<std::vector<std::uint8_t>>> choices;
  for (const auto& load : instance.loads)
    choices.push_back(window_patterns(load.window_slots(), load.duration));

  std::vector<SolutionRecord> records;
  std::vector<size_t> pick(instance.loads.size(), 0);
  std::vector<int> hour_power(static_cast<size_t>(instance.num_hours));

  while (true) {
    std::fill(hour_power.begin(), hour_power.end(), 0);
    std::int64_t cost = 0;
    std::vector<std::uint8_t> bits;
    bits.reserve(static_cast<size_t>(num_load_vars));
    for (size_t l = 0; l < instance.loads.size(); ++l) {
      const Load& load = instance.loads[l];
      const auto& pattern = choices[l][pick[l]];
      for (int s = 0; s < load.window_slots(); ++s) {
        bits.push_back(pattern[static_cast<size_t>(s)]);
        if (pattern[static_cast<size_t>(s)]) {
          const int h = load.window_first + s;
          hour_power[static_cast<size_t>(h - 1)] += load.power;
          cost += static_cast<std::int64_t>(instance.price(h)) * load.power;
        }
      }
    }
    const bool capped = std::any_of(hour_power.begin(), hour_power.end(),
                                    [&](int p) { return p > instance.e_max; });
    if (!capped)
      records.push_back({ScheduleAssignment::from_load_bits(instance, bits), cost,
                         bits_to_string(bits), 0});

    size_t l = 0;
    for (; l < pick.size(); ++l) {
      if (++pick[l] < choices[l].size()) break;
      pick[l] = 0;
    }
    if (l == pick.size()) break;
  }

  std::sort(records.begin(), records.end(),
            [](const SolutionRecord& a, const SolutionRecord& b) {
              if (a.cost != b.cost) return a.cost < b.cost;
              return a.bits < b.bits;
            });
  for (size_t i = 0; i < records.size(); ++i)
    records[i].rank = static_cast<int>(i) + 1;
  return records;
}

BruteForceResult brute_force_minimum(const IsingModel& ising) {
  const int n = ising.num_spins;
  std::vector<int> spins(static_cast<size_t>(n), 1);
  const auto adj = adjacency(n, ising.couplings);

  double energy = ising.offset;
  for (double h : ising.fields) energy += h;
  for (const auto& [key, v] : ising.couplings) energy += v;

  return gray_code_scan(n, energy, [&](int q) {
    double local = ising.fields[static_cast<size_t>(q)];
    for (const auto& [j, v] : adj[static_cast<size_t>(q)])
      local += v * spins[static_cast<size_t>(j)];
    const double delta = -2.0 * spins[static_cast<size_t>(q)] * local;
    spins[static_cast<size_t>(q)] = -spins[static_cast<size_t>(q)];
    return delta;
  });
}

BruteForceResult brute_force_minimum(const QuboModel& qubo) {
  const int n = qubo.num_vars;
  std::vector<std::uint8_t> bits(static_cast<size_t>(n), 0);
  const auto adj = adjacency(n, qubo.quadratic);

  return gray_code_scan(n, qubo.offset, [&](int q) {
    double local = qubo.linear[static_cast<size_t>(q)];
    for (const auto& [j, v] : adj[static_cast<size_t>(q)])
      if (bits[static_cast<size_t>(j)]) local += v;
    const double delta = bits[static_cast<size_t>(q)] ? -local : local;
    bits[static_cast<size_t>(q)] ^= 1;
    return delta;
  });
}

VerificationReport verify_reduction(const ProsumerInstance& instance,
                                    std::optional<double> penalty_override) {
  VerificationReport report;
  const BinaryLinearProgram ilp = build_ilp(instance);
  const double penalty = penalty_override.value_or(penalty_coefficient(instance));
  const QuboModel qubo = qubo_from_ilp(ilp, penalty);
  const IsingModel ising = ising_from_qubo(qubo);
  const int n = ilp.num_vars;

  const double separation_threshold = penalty_coefficient(instance);  // C_up + 1

  // Penalized objective evaluated straight from the constraint system.
  const auto reference_value = [&](const std::vector<std::uint8_t>& bits) {
    double value = 0.0;
    for (int i = 0; i < n; ++i)
      if (bits[static_cast<size_t>(i)])
        value += static_cast<double>(ilp.cost[static_cast<size_t>(i)]);
    for (const auto& c : ilp.constraints) {
      std::int64_t lhs = 0;
      for (int i = 0; i < n; ++i)
        if (bits[static_cast<size_t>(i)]) lhs += c.coeffs[static_cast<size_t>(i)];
      const double residual = static_cast<double>(lhs - c.rhs);
      value += penalty * residual * residual;
    }
    return value;
  };
  const auto satisfies_constraints = [&](const std::vector<std::uint8_t>& bits) {
    for (const auto& c : ilp.constraints) {
      std::int64_t lhs = 0;
      for (int i = 0; i < n; ++i)
        if (bits[static_cast<size_t>(i)]) lhs += c.coeffs[static_cast<size_t>(i)];
      if (lhs != c.rhs) return false;
    }
    return true;
  };

  std::vector<std::uint64_t> indices;
  std::string scan_note;
  if (n <= 20) {
    indices.resize(std::size_t{1} << n);
    for (std::uint64_t k = 0; k < indices.size(); ++k) indices[k] = k;
    scan_note = "exhaustive over " + std::to_string(indices.size()) + " bitstrings";
  } else {
    std::mt19937_64 rng(12345);
    for (int i = 0; i < 10000; ++i)
      indices.push_back(rng() & ((std::uint64_t{1} << n) - 1));
    scan_note = "sampled 10000 bitstrings";
  }

  CheckResult equiv_qubo{"qubo evaluation equivalence", true, scan_note};
  CheckResult equiv_ising{"ising evaluation equivalence", true, scan_note};
  CheckResult separation{"penalty separation", true, scan_note};

  for (std::uint64_t k : indices) {
    const auto bits = bits_of_index(k, n);
    const double expected = reference_value(bits);
    const double got_qubo = qubo_value(qubo, bits);
    if (equiv_qubo.passed && std::abs(got_qubo - expected) > 1e-9) {
      equiv_qubo.passed = false;
      equiv_qubo.detail = "witness " + bits_to_string(bits) + ": qubo " +
                          std::to_string(got_qubo) + " vs reference " +
                          std::to_string(expected);
    }
    const double got_ising = ising_energy(ising, spins_from_bits(bits));
    if (equiv_ising.passed && std::abs(got_ising - got_qubo) > 1e-9) {
      equiv_ising.passed = false;
      equiv_ising.detail = "witness " + bits_to_string(bits) + ": ising " +
                           std::to_string(got_ising) + " vs qubo " +
                           std::to_string(got_qubo);
    }
    if (separation.passed && !satisfies_constraints(bits) &&
        got_qubo < separation_threshold) {
      separation.passed = false;
      separation.detail = "witness " + bits_to_string(bits) + ": value " +
                          std::to_string(got_qubo) + " below threshold " +
                          std::to_string(separation_threshold);
    }
  }
  report.checks.push_back(equiv_qubo);
  report.checks.push_back(equiv_ising);
  report.checks.push_back(separation);

  CheckResult optimum{"optimum decodes to best schedule", true, ""};
  if (n <= kEnumerationBound && instance.num_load_vars() <= kEnumerationBound) {
    const auto records = enumerate_feasible(instance);
    const auto minimum = brute_force_minimum(ising);
    if (records.empty()) {
      optimum.detail = "no feasible schedule exists; skipped";
    } else {
      const std::string prefix =
          minimum.bits.substr(0, static_cast<size_t>(ilp.num_load_vars));
      if (std::abs(minimum.value - static_cast<double>(records.front().cost)) > 1e-9 ||
          prefix != records.front().bits) {
        optimum.passed = false;
        optimum.detail = "minimum " + minimum.bits + " (value " +
                         std::to_string(minimum.value) + ") vs best schedule " +
                         records.front().bits + " (cost " +
                         std::to_string(records.front().cost) + ")";
      } else {
        optimum.detail = "minimum value " + std::to_string(minimum.value);
      }
    }
  } else {
    optimum.detail = "model too large; skipped";
  }
  report.checks.push_back(optimum);

  return report;
}

namespace {

std::vector<std::string> load_var_columns(const ProsumerInstance& instance) {
  std::vector<std::string> columns;
  for (const auto& load : instance.loads)
    for (int h = load.window_first; h <= load.window_last; ++h)
      columns.push_back("x_" + load.id + "^" + std::to_string(h));
  return columns;
}

}  // namespace

std::string records_csv(const ProsumerInstance& instance,
                        const std::vector<SolutionRecord>& records) {
  std::string out;
  for (const auto& column : load_var_columns(instance)) out += column + ",";
  out += "cost_cents\n";
  for (const auto& record : records) {
    for (char bit : record.bits) {
      out += bit;
      out += ',';
    }
    out += std::to_string(record.cost) + "\n";
  }
  return out;
}

std::string records_document(const ProsumerInstance& instance,
                             const std::vector<SolutionRecord>& records) {
  json doc;
  auto columns = load_var_columns(instance);
  columns.push_back("cost_cents");
  doc["columns"] = columns;
  auto& rows = doc["rows"] = json::array();
  for (const auto& record : records) {
    json row = json::array();
    for (char bit : record.bits) row.push_back(bit == '1' ? 1 : 0);
    row.push_back(record.cost);
    rows.push_back(std::move(row));
  }
  return doc.dump(2) + "\n";
}

}  // namespace qprosumer
