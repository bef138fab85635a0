#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qprosumer {

// One schedulable, fully interruptible load: it must be on for exactly
// `duration` hours, chosen freely among the slots of the inclusive hour
// window [window_first, window_last].
struct Load {
  std::string id;
  int window_first = 1;
  int window_last = 1;
  int duration = 1;
  int power = 1;  // kW drawn while on

  int window_slots() const { return window_last - window_first + 1; }

  bool operator==(const Load&) const = default;
};

// A single-user load-scheduling problem over 1-hour slots. Hours are
// labeled 1..num_hours and tariff[h-1] is the price of hour h in euro
// cents per kWh. Slots are exactly one hour, so kW * slot = kWh and all
// cost arithmetic stays in integer cents.
struct ProsumerInstance {
  std::vector<Load> loads;
  int num_hours = 0;
  std::vector<int> tariff;
  int e_max = 0;  // system power cap, kW

  int num_load_vars() const;
  int price(int hour) const { return tariff.at(static_cast<size_t>(hour - 1)); }
  const Load* find_load(const std::string& id) const;

  bool operator==(const ProsumerInstance&) const = default;
};

// Throws ValidationError naming the violated invariant.
void validate(const ProsumerInstance& instance);

// On/off bit per (load id, hour), defined exactly on each load's window.
class ScheduleAssignment {
 public:
  ScheduleAssignment() = default;

  static ScheduleAssignment zeros(const ProsumerInstance& instance);

  // Builds a schedule from load-variable bits ordered loads-in-declaration-
  // order, hours ascending within each load. `bits` length must equal
  // instance.num_load_vars().
  static ScheduleAssignment from_load_bits(const ProsumerInstance& instance,
                                           const std::vector<std::uint8_t>& bits);

  void set(const std::string& load_id, int hour, bool on);
  bool at(const std::string& load_id, int hour) const;

  // Inverse of from_load_bits; throws on key mismatch.
  std::vector<std::uint8_t> load_bits(const ProsumerInstance& instance) const;

  const std::map<std::string, std::map<int, bool>>& entries() const { return bits_; }

  bool operator==(const ScheduleAssignment&) const = default;

 private:
  std::map<std::string, std::map<int, bool>> bits_;
};

// Total cost in euro cents of the given schedule. Throws ValidationError if
// the schedule keys do not cover exactly the instance windows.
std::int64_t cost_of_schedule(const ProsumerInstance& instance,
                              const ScheduleAssignment& schedule);

struct FeasibilityReport {
  bool feasible = true;
  std::vector<std::string> violations;
};

// feasible iff every hour's drawn power is within e_max and every load is on
// exactly `duration` times. The report lists each violated constraint.
FeasibilityReport is_feasible(const ProsumerInstance& instance,
                              const ScheduleAssignment& schedule);

// Parses an instance document (JSON text, schema in README). Throws
// ParseError with line/field context or ValidationError.
ProsumerInstance load_instance(const std::string& text);

// Serializes back to document text; load_instance round-trips it.
std::string instance_document(const ProsumerInstance& instance);

// The two-load, three-hour instance used throughout the docs and tests,
// optionally widened to a different hour count: windows span all hours and
// the 22/21/24 tariff pattern repeats to the requested length.
ProsumerInstance reference_instance();
ProsumerInstance reference_instance(int hours);

}  // namespace qprosumer
