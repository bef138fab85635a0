#include "qprosumer/problem.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qprosumer/errors.hpp"

namespace qprosumer {

namespace {

using nlohmann::json;

int line_of_byte_offset(const std::string& text, std::size_t offset) {
  int line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

// Rejects fractional values with a rescaling hint; energies and prices are
// integer by contract.
int require_int(const json& j, const std::string& field) {
  if (j.is_number_float())
    throw ParseError("field '" + field + "': fractional value " + j.dump() +
                     " not allowed; rescale units so all inputs are integers");
  if (!j.is_number_integer())
    throw ParseError("field '" + field + "': expected an integer, got " + j.dump());
  return j.get<int>();
}

const json& require_field(const json& j, const std::string& field) {
  auto it = j.find(field);
  if (it == j.end()) throw ParseError("missing field '" + field + "'");
  return *it;
}

}  // namespace

int ProsumerInstance::num_load_vars() const {
  int n = 0;
  for (const auto& load : loads) n += load.window_slots();
  return n;
}

const Load* ProsumerInstance::find_load(const std::string& id) const {
  for (const auto& load : loads)
    if (load.id == id) return &load;
  return nullptr;
}

void validate(const ProsumerInstance& instance) {
  if (instance.loads.empty()) throw ValidationError("instance has no loads");
  if (instance.num_hours < 1) throw ValidationError("instance has no hours");
  if (instance.tariff.size() != static_cast<size_t>(instance.num_hours))
    throw ValidationError("tariff has " + std::to_string(instance.tariff.size()) +
                          " entries, expected one per hour (" +
                          std::to_string(instance.num_hours) + ")");
  for (int h = 1; h <= instance.num_hours; ++h)
    if (instance.price(h) < 0)
      throw ValidationError("tariff for hour " + std::to_string(h) + " is negative");
  if (instance.e_max < 1) throw ValidationError("e_max must be at least 1");

  std::set<std::string> seen;
  for (const auto& load : instance.loads) {
    const std::string tag = "load '" + load.id + "'";
    if (!seen.insert(load.id).second)
      throw ValidationError("duplicate load id '" + load.id + "'");
    if (load.window_first < 1 || load.window_last > instance.num_hours ||
        load.window_first > load.window_last)
      throw ValidationError(tag + ": window [" + std::to_string(load.window_first) +
                            ", " + std::to_string(load.window_last) +
                            "] is not a valid slot range within 1.." +
                            std::to_string(instance.num_hours));
    if (load.duration < 1)
      throw ValidationError(tag + ": duration must be at least 1");
    if (load.duration > load.window_slots())
      throw ValidationError(tag + ": duration " + std::to_string(load.duration) +
                            " exceeds window of " + std::to_string(load.window_slots()) +
                            " slots");
    if (load.power < 1 || load.power > instance.e_max)
      throw ValidationError(tag + ": power " + std::to_string(load.power) +
                            " outside 1..e_max (" + std::to_string(instance.e_max) + ")");
  }
}

ScheduleAssignment ScheduleAssignment::zeros(const ProsumerInstance& instance) {
  ScheduleAssignment s;
  for (const auto& load : instance.loads)
    for (int h = load.window_first; h <= load.window_last; ++h)
      s.bits_[load.id][h] = false;
  return s;
}

ScheduleAssignment ScheduleAssignment::from_load_bits(
    const ProsumerInstance& instance, const std::vector<std::uint8_t>& bits) {
  if (bits.size() != static_cast<size_t>(instance.num_load_vars()))
    throw ValidationError("bit vector length " + std::to_string(bits.size()) +
                          " does not match " + std::to_string(instance.num_load_vars()) +
                          " load variables");
  ScheduleAssignment s;
  size_t i = 0;
  for (const auto& load : instance.loads)
    for (int h = load.window_first; h <= load.window_last; ++h)
      s.bits_[load.id][h] = bits[i++] != 0;
  return s;
}

void ScheduleAssignment::set(const std::string& load_id, int hour, bool on) {
  bits_[load_id][hour] = on;
}

bool ScheduleAssignment::at(const std::string& load_id, int hour) const {
  return bits_.at(load_id).at(hour);
}

std::vector<std::uint8_t> ScheduleAssignment::load_bits(
    const ProsumerInstance& instance) const {
  std::vector<std::uint8_t> bits;
  bits.reserve(static_cast<size_t>(instance.num_load_vars()));

  size_t keys = 0;
  for (const auto& [id, hours] : bits_) keys += hours.size();
  if (bits_.size() != instance.loads.size() ||
      keys != static_cast<size_t>(instance.num_load_vars()))
    throw ValidationError("schedule keys do not match instance windows");

  for (const auto& load : instance.loads) {
    auto it = bits_.find(load.id);
    if (it == bits_.end())
      throw ValidationError("schedule missing load '" + load.id + "'");
    if (it->second.size() != static_cast<size_t>(load.window_slots()))
      throw ValidationError("schedule for load '" + load.id +
                            "' does not cover its window exactly");
    for (int h = load.window_first; h <= load.window_last; ++h) {
      auto hit = it->second.find(h);
      if (hit == it->second.end())
        throw ValidationError("schedule for load '" + load.id + "' missing hour " +
                              std::to_string(h));
      bits.push_back(hit->second ? 1 : 0);
    }
  }
  return bits;
}

std::int64_t cost_of_schedule(const ProsumerInstance& instance,
                              const ScheduleAssignment& schedule) {
  schedule.load_bits(instance);  // key check
  std::int64_t total = 0;
  for (const auto& load : instance.loads)
    for (int h = load.window_first; h <= load.window_last; ++h)
      if (schedule.at(load.id, h))
        total += static_cast<std::int64_t>(instance.price(h)) * load.power;
  return total;
}

FeasibilityReport is_feasible(const ProsumerInstance& instance,
                              const ScheduleAssignment& schedule) {
  schedule.load_bits(instance);  // key check
  FeasibilityReport report;

  for (int h = 1; h <= instance.num_hours; ++h) {
    int drawn = 0;
    for (const auto& load : instance.loads)
      if (h >= load.window_first && h <= load.window_last && schedule.at(load.id, h))
        drawn += load.power;
    if (drawn > instance.e_max)
      report.violations.push_back("hour " + std::to_string(h) + ": power " +
                                  std::to_string(drawn) + " kW exceeds cap " +
                                  std::to_string(instance.e_max) + " kW");
  }

  for (const auto& load : instance.loads) {
    int on = 0;
    for (int h = load.window_first; h <= load.window_last; ++h)
      if (schedule.at(load.id, h)) ++on;
    if (on != load.duration)
      report.violations.push_back("load '" + load.id + "': on for " + std::to_string(on) +
                                  " hours, requires exactly " +
                                  std::to_string(load.duration));
  }

  report.feasible = report.violations.empty();
  return report;
}

ProsumerInstance load_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_of_byte_offset(text, e.byte)) +
                     ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("instance document must be a JSON object");

  ProsumerInstance instance;
  instance.num_hours = require_int(require_field(doc, "hours"), "hours");
  instance.e_max = require_int(require_field(doc, "e_max"), "e_max");

  const json& tariff = require_field(doc, "tariff");
  if (!tariff.is_array()) throw ParseError("field 'tariff': expected an array");
  for (size_t i = 0; i < tariff.size(); ++i)
    instance.tariff.push_back(
        require_int(tariff[i], "tariff[" + std::to_string(i) + "]"));

  const json& loads = require_field(doc, "loads");
  if (!loads.is_array()) throw ParseError("field 'loads': expected an array");
  for (size_t i = 0; i < loads.size(); ++i) {
    const json& jl = loads[i];
    const std::string tag = "loads[" + std::to_string(i) + "]";
    if (!jl.is_object()) throw ParseError(tag + ": expected an object");
    Load load;
    const json& id = require_field(jl, "id");
    if (!id.is_string()) throw ParseError(tag + ".id: expected a string");
    load.id = id.get<std::string>();
    load.window_first = require_int(require_field(jl, "alpha"), tag + ".alpha");
    load.window_last = require_int(require_field(jl, "beta"), tag + ".beta");
    load.duration = require_int(require_field(jl, "delta"), tag + ".delta");
    load.power = require_int(require_field(jl, "power"), tag + ".power");
    instance.loads.push_back(std::move(load));
  }

  validate(instance);
  return instance;
}

std::string instance_document(const ProsumerInstance& instance) {
  json doc;
  doc["hours"] = instance.num_hours;
  doc["e_max"] = instance.e_max;
  doc["tariff"] = instance.tariff;
  doc["loads"] = json::array();
  for (const auto& load : instance.loads)
    doc["loads"].push_back({{"id", load.id},
                            {"alpha", load.window_first},
                            {"beta", load.window_last},
                            {"delta", load.duration},
                            {"power", load.power}});
  return doc.dump(2) + "\n";
}

ProsumerInstance reference_instance() { return reference_instance(3); }

ProsumerInstance reference_instance(int hours) {
  if (hours < 1) throw ValidationError("hours must be at least 1");
  static const int pattern[3] = {22, 21, 24};
  ProsumerInstance instance;
  instance.num_hours = hours;
  for (int h = 0; h < hours; ++h) instance.tariff.push_back(pattern[h % 3]);
  instance.e_max = 3;
  instance.loads.push_back({"1", 1, hours, 2, 2});
  instance.loads.push_back({"2", 1, hours, 1, 1});
  validate(instance);
  return instance;
}

}  // namespace qprosumer
