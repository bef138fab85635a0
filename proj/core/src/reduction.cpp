#include "qprosumer/reduction.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "qprosumer/errors.hpp"

namespace qprosumer {

namespace {
using nlohmann::json;
}

std::vector<int> slack_encoding(int range_size) {
  if (range_size < 1) throw ValidationError("slack range must cover at least one value");
  if (range_size == 1) return {};
  int m = 0;
  while ((1 << m) < range_size) ++m;  // m = ceil(log2(range_size))
  std::vector<int> coeffs;
  for (int i = 1; i < m; ++i) coeffs.push_back(1 << (i - 1));
  coeffs.push_back(range_size - (1 << (m - 1)));
  return coeffs;
}

std::vector<std::uint8_t> encode_slack_value(const std::vector<int>& coeffs, int value) {
  std::vector<std::uint8_t> bits(coeffs.size(), 0);
  int remaining = value;
  for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) {
    if (coeffs[i] <= remaining) {
      bits[static_cast<size_t>(i)] = 1;
      remaining -= coeffs[i];
    }
  }
  if (remaining != 0)
    throw ValidationError("value " + std::to_string(value) +
                          " is not representable by the slack encoding");
  return bits;
}

BinaryLinearProgram build_ilp(const ProsumerInstance& instance) {
  BinaryLinearProgram ilp;

  // Load-variable prefix.
  for (const auto& load : instance.loads)
    for (int h = load.window_first; h <= load.window_last; ++h) {
      ilp.var_meta.push_back({VarMeta::Kind::load, load.id, h, 0});
      ilp.cost.push_back(static_cast<std::int64_t>(instance.price(h)) * load.power);
    }
  ilp.num_load_vars = static_cast<int>(ilp.var_meta.size());

  // Slack variables per hour; the per-hour residual takes e_max + 1 values.
  const std::vector<int> coeffs = slack_encoding(instance.e_max + 1);
  for (int h = 1; h <= instance.num_hours; ++h)
    for (size_t m = 0; m < coeffs.size(); ++m) {
      ilp.var_meta.push_back({VarMeta::Kind::slack, "", h, static_cast<int>(m) + 1});
      ilp.cost.push_back(0);
    }
  ilp.num_vars = static_cast<int>(ilp.var_meta.size());

  // Power equality per hour: sum of drawn power plus encoded residual = e_max.
  for (int h = 1; h <= instance.num_hours; ++h) {
    LinearConstraint c;
    c.coeffs.assign(static_cast<size_t>(ilp.num_vars), 0);
    c.rhs = instance.e_max;
    for (int i = 0; i < ilp.num_vars; ++i) {
      const VarMeta& meta = ilp.var_meta[static_cast<size_t>(i)];
      if (meta.hour != h) continue;
      if (meta.kind == VarMeta::Kind::load)
        c.coeffs[static_cast<size_t>(i)] = instance.find_load(meta.load_id)->power;
      else
        c.coeffs[static_cast<size_t>(i)] = coeffs[static_cast<size_t>(meta.bit - 1)];
    }
    ilp.constraints.push_back(std::move(c));
  }

  // Duration equality per load.
  for (const auto& load : instance.loads) {
    LinearConstraint c;
    c.coeffs.assign(static_cast<size_t>(ilp.num_vars), 0);
    c.rhs = load.duration;
    for (int i = 0; i < ilp.num_load_vars; ++i)
      if (ilp.var_meta[static_cast<size_t>(i)].load_id == load.id)
        c.coeffs[static_cast<size_t>(i)] = 1;
    ilp.constraints.push_back(std::move(c));
  }

  return ilp;
}

double penalty_coefficient(const ProsumerInstance& instance) {
  std::int64_t c_up = 0;
  for (const auto& load : instance.loads)
    for (int h = load.window_first; h <= load.window_last; ++h)
      c_up += static_cast<std::int64_t>(instance.price(h)) * load.power;
  return 1.0 + static_cast<double>(c_up);
}

QuboModel qubo_from_ilp(const BinaryLinearProgram& ilp, double penalty) {
  // Zero is allowed so verification probes can show separation failing.
  if (penalty < 0.0) throw ValidationError("penalty coefficient must not be negative");

  QuboModel qubo;
  qubo.num_vars = ilp.num_vars;
  qubo.penalty = penalty;
  qubo.linear.assign(static_cast<size_t>(ilp.num_vars), 0.0);
  for (int i = 0; i < ilp.num_vars; ++i)
    qubo.linear[static_cast<size_t>(i)] = static_cast<double>(ilp.cost[static_cast<size_t>(i)]);

  // (S.x - b)^2 = sum_i S_i^2 x_i + 2 sum_{i<j} S_i S_j x_i x_j
  //               - 2 b sum_i S_i x_i + b^2, using x^2 = x.
  for (const auto& c : ilp.constraints) {
    for (int i = 0; i < ilp.num_vars; ++i) {
      const auto si = static_cast<double>(c.coeffs[static_cast<size_t>(i)]);
      if (si == 0.0) continue;
      qubo.linear[static_cast<size_t>(i)] +=
          penalty * (si * si - 2.0 * static_cast<double>(c.rhs) * si);
      for (int j = i + 1; j < ilp.num_vars; ++j) {
        const auto sj = static_cast<double>(c.coeffs[static_cast<size_t>(j)]);
        if (sj == 0.0) continue;
        qubo.quadratic[{i, j}] += 2.0 * penalty * si * sj;
      }
    }
    qubo.offset += penalty * static_cast<double>(c.rhs) * static_cast<double>(c.rhs);
  }

  std::erase_if(qubo.quadratic, [](const auto& kv) { return kv.second == 0.0; });
  return qubo;
}

IsingModel ising_from_qubo(const QuboModel& qubo) {
  IsingModel ising;
  ising.num_spins = qubo.num_vars;
  ising.fields.assign(static_cast<size_t>(qubo.num_vars), 0.0);
  ising.offset = qubo.offset;

  // b_i = (1 - z_i)/2 applied term by term.
  for (int i = 0; i < qubo.num_vars; ++i) {
    ising.fields[static_cast<size_t>(i)] -= qubo.linear[static_cast<size_t>(i)] / 2.0;
    ising.offset += qubo.linear[static_cast<size_t>(i)] / 2.0;
  }
  for (const auto& [key, v] : qubo.quadratic) {
    const auto [i, j] = key;
    ising.couplings[{i, j}] += v / 4.0;
    ising.fields[static_cast<size_t>(i)] -= v / 4.0;
    ising.fields[static_cast<size_t>(j)] -= v / 4.0;
    ising.offset += v / 4.0;
  }

  std::erase_if(ising.couplings, [](const auto& kv) { return kv.second == 0.0; });
  return ising;
}

double qubo_value(const QuboModel& qubo, const std::vector<std::uint8_t>& bits) {
  if (bits.size() != static_cast<size_t>(qubo.num_vars))
    throw ValidationError("bit vector length " + std::to_string(bits.size()) +
                          " does not match " + std::to_string(qubo.num_vars) +
                          " variables");
  double value = qubo.offset;
  for (int i = 0; i < qubo.num_vars; ++i)
    if (bits[static_cast<size_t>(i)]) value += qubo.linear[static_cast<size_t>(i)];
  for (const auto& [key, v] : qubo.quadratic)
    if (bits[static_cast<size_t>(key.first)] && bits[static_cast<size_t>(key.second)])
      value += v;
  return value;
}

double ising_energy(const IsingModel& ising, const std::vector<int>& spins) {
  if (spins.size() != static_cast<size_t>(ising.num_spins))
    throw ValidationError("spin vector length " + std::to_string(spins.size()) +
                          " does not match " + std::to_string(ising.num_spins) +
                          " spins");
  for (int z : spins)
    if (z != 1 && z != -1)
      throw ValidationError("spin values must be +1 or -1");
  double energy = ising.offset;
  for (int i = 0; i < ising.num_spins; ++i)
    energy += ising.fields[static_cast<size_t>(i)] * spins[static_cast<size_t>(i)];
  for (const auto& [key, j] : ising.couplings)
    energy += j * spins[static_cast<size_t>(key.first)] * spins[static_cast<size_t>(key.second)];
  return energy;
}

std::vector<int> spins_from_bits(const std::vector<std::uint8_t>& bits) {
  std::vector<int> spins(bits.size());
  for (size_t i = 0; i < bits.size(); ++i) spins[i] = bits[i] ? -1 : 1;
  return spins;
}

std::vector<std::uint8_t> bits_from_spins(const std::vector<int>& spins) {
  std::vector<std::uint8_t> bits(spins.size());
  for (size_t i = 0; i < spins.size(); ++i) bits[i] = spins[i] == -1 ? 1 : 0;
  return bits;
}

std::vector<std::uint8_t> bits_of_index(std::uint64_t index, int num_vars) {
  std::vector<std::uint8_t> bits(static_cast<size_t>(num_vars));
  for (int i = 0; i < num_vars; ++i)
    bits[static_cast<size_t>(i)] = static_cast<std::uint8_t>((index >> i) & 1u);
  return bits;
}

std::uint64_t index_of_bits(const std::vector<std::uint8_t>& bits) {
  std::uint64_t index = 0;
  for (size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) index |= std::uint64_t{1} << i;
  return index;
}

std::string bits_to_string(const std::vector<std::uint8_t>& bits) {
  std::string s(bits.size(), '0');
  for (size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) s[i] = '1';
  return s;
}

std::vector<std::uint8_t> bits_from_string(const std::string& s) {
  std::vector<std::uint8_t> bits(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '0' && s[i] != '1')
      throw ValidationError("bitstring may contain only '0' and '1'");
    bits[i] = s[i] == '1' ? 1 : 0;
  }
  return bits;
}

std::string qubo_document(const QuboModel& qubo) {
  json doc;
  doc["num_vars"] = qubo.num_vars;
  doc["offset"] = qubo.offset;
  doc["penalty"] = qubo.penalty;
  doc["linear"] = qubo.linear;
  auto& quad = doc["quadratic"] = json::array();
  for (const auto& [key, v] : qubo.quadratic)
    quad.push_back({{"i", key.first + 1}, {"j", key.second + 1}, {"v", v}});
  return doc.dump(2) + "\n";
}

std::string ising_document(const IsingModel& ising) {
  json doc;
  doc["num_spins"] = ising.num_spins;
  doc["offset"] = ising.offset;
  doc["h"] = ising.fields;
  auto& couplings = doc["j"] = json::array();
  for (const auto& [key, v] : ising.couplings)
    couplings.push_back({{"i", key.first + 1}, {"j", key.second + 1}, {"v", v}});
  return doc.dump(2) + "\n";
}

std::string ilp_document(const BinaryLinearProgram& ilp) {
  json doc;
  doc["num_vars"] = ilp.num_vars;
  doc["num_load_vars"] = ilp.num_load_vars;
  doc["cost"] = ilp.cost;
  auto& vars = doc["var_meta"] = json::array();
  for (const auto& meta : ilp.var_meta) {
    if (meta.kind == VarMeta::Kind::load)
      vars.push_back({{"kind", "load"}, {"load", meta.load_id}, {"hour", meta.hour}});
    else
      vars.push_back({{"kind", "slack"}, {"hour", meta.hour}, {"bit", meta.bit}});
  }
  auto& constraints = doc["constraints"] = json::array();
  for (const auto& c : ilp.constraints)
    constraints.push_back({{"coeffs", c.coeffs}, {"rhs", c.rhs}});
  return doc.dump(2) + "\n";
}

}  // namespace qprosumer
