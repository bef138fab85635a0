// qprosumer: turn load-scheduling instances into QUBO/Ising form and solve
// them with a QAOA statevector simulator or the exact oracle.
//
// Exit codes: 0 ok, 2 parse/validation, 3 I/O, 4 resource/size bound.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qprosumer/errors.hpp"
#include "qprosumer/exact.hpp"
#include "qprosumer/problem.hpp"
#include "qprosumer/qaoa.hpp"
#include "qprosumer/reduction.hpp"

namespace {

using json = nlohmann::json;
using namespace qprosumer;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Wall-clock phase timings plus a config echo; printed to stderr (or
// --manifest) so stdout stays byte-identical across reruns.
struct RunManifest {
  std::string command;
  std::string instance_path;
  json config = json::object();
  std::map<std::string, double> timings_s;
  std::vector<std::string> outputs;

  std::string document() const {
    json doc;
    doc["command"] = command;
    if (!instance_path.empty()) doc["instance"] = instance_path;
    doc["config"] = config;
    doc["timings_s"] = timings_s;
    doc["outputs"] = outputs;
    return doc.dump(2) + "\n";
  }
};

class PhaseTimer {
 public:
  explicit PhaseTimer(RunManifest& manifest) : manifest_(manifest) {}

  template <typename F>
  auto phase(const std::string& name, F&& body) {
    const auto start = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
      record(name, start);
    } else {
      auto value = body();
      record(name, start);
      return value;
    }
  }

 private:
  void record(const std::string& name, std::chrono::steady_clock::time_point start) {
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    manifest_.timings_s[name] += elapsed.count();
  }

  RunManifest& manifest_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("read failed on '" + path + "'");
  return buffer.str();
}

// Write-then-rename so a failed run never leaves a partial file behind.
void write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp + "' for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write failed on '" + tmp + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move '" + tmp + "' to '" + path + "'");
  }
}

// Document sink: --out writes the file, otherwise stdout.
void emit(const std::string& content, const std::string& out_path,
          RunManifest& manifest) {
  if (out_path.empty()) {
    std::cout << content;
    manifest.outputs.push_back("stdout");
  } else {
    write_file(out_path, content);
    manifest.outputs.push_back(out_path);
  }
}

void emit_manifest(const RunManifest& manifest, const std::string& manifest_path) {
  if (manifest_path.empty())
    std::cerr << manifest.document();
  else
    write_file(manifest_path, manifest.document());
}

int default_qubit_cap() {
  if (const char* env = std::getenv("QPROSUMER_CAP")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) return cap;
    } catch (const std::exception&) {
    }
    throw ValidationError("QPROSUMER_CAP must be a positive integer, got '" +
                          std::string(env) + "'");
  }
  return kDefaultQubitCap;
}

std::string euros(std::int64_t cents) {
  const std::int64_t sign = cents < 0 ? -1 : 1;
  const std::int64_t abs = sign * cents;
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%s%lld.%02lld", sign < 0 ? "-" : "",
                static_cast<long long>(abs / 100), static_cast<long long>(abs % 100));
  return buffer;
}

std::string format_double(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

// --- transform ---------------------------------------------------------

int cmd_transform(const std::string& instance_path, const std::vector<std::string>& emits,
                  const std::string& out_path, const std::string& manifest_path) {
  RunManifest manifest;
  manifest.command = "transform";
  manifest.instance_path = instance_path;
  manifest.config["emit"] = emits;
  PhaseTimer timer(manifest);

  if (!out_path.empty() && emits.size() != 1)
    throw ValidationError("--out requires exactly one --emit kind");

  const auto instance = timer.phase("load", [&] {
    return load_instance(read_file(instance_path));
  });
  const auto ilp = timer.phase("reduce", [&] { return build_ilp(instance); });

  timer.phase("emit", [&] {
    for (const auto& kind : emits) {
      if (kind == "ilp") {
        emit(ilp_document(ilp), out_path, manifest);
      } else if (kind == "qubo") {
        emit(qubo_document(qubo_from_ilp(ilp, penalty_coefficient(instance))),
             out_path, manifest);
      } else {
        emit(ising_document(ising_from_qubo(
                 qubo_from_ilp(ilp, penalty_coefficient(instance)))),
             out_path, manifest);
      }
    }
  });

  std::cerr << ilp.num_vars << " variables, " << ilp.constraints.size()
            << " constraints (" << ilp.num_load_vars << " load + "
            << ilp.num_vars - ilp.num_load_vars << " slack)\n";
  emit_manifest(manifest, manifest_path);
  return 0;
}

// --- enumerate ----------------------------------------------------------

std::string records_table(const ProsumerInstance& instance,
                          const std::vector<SolutionRecord>& records) {
  std::ostringstream out;
  const int bits_width = std::max(4, instance.num_load_vars());
  char line[160];
  std::snprintf(line, sizeof(line), "%-4s  %-*s  %-8s  %s\n", "rank", bits_width,
                "bits", "cost[c]", "cost[EUR]");
  out << line;
  for (const auto& record : records) {
    std::snprintf(line, sizeof(line), "%-4d  %-*s  %-8lld  %s\n", record.rank,
                  bits_width, record.bits.c_str(),
                  static_cast<long long>(record.cost), euros(record.cost).c_str());
    out << line;
  }
  return out.str();
}

int cmd_enumerate(const std::string& instance_path, const std::string& format,
                  const std::string& out_path, const std::string& manifest_path) {
  RunManifest manifest;
  manifest.command = "enumerate";
  manifest.instance_path = instance_path;
  manifest.config["format"] = format;
  PhaseTimer timer(manifest);

  const auto instance = timer.phase("load", [&] {
    return load_instance(read_file(instance_path));
  });
  const auto records = timer.phase("enumerate", [&] {
    return enumerate_feasible(instance);
  });

  timer.phase("emit", [&] {
    if (format == "json")
      emit(records_document(instance, records), out_path, manifest);
    else if (format == "csv")
      emit(records_csv(instance, records), out_path, manifest);
    else
      emit(records_table(instance, records), out_path, manifest);
  });

  std::cerr << records.size() << " feasible schedules\n";
  emit_manifest(manifest, manifest_path);
  return 0;
}

// --- solve --------------------------------------------------------------

std::string samples_table(const QaoaResult& result) {
  std::ostringstream out;
  const int bits_width =
      result.samples.empty()
          ? 4
          : std::max(4, static_cast<int>(result.samples.front().bits.size()));
  char line[200];
  std::snprintf(line, sizeof(line), "%-4s  %-*s  %-5s  %-12s  %-8s  %-9s  %s\n",
                "rank", bits_width, "bits", "count", "energy", "cost[c]",
                "cost[EUR]", "feasible");
  out << line;
  int rank = 1;
  for (const auto& s : result.samples) {
    std::snprintf(line, sizeof(line), "%-4d  %-*s  %-5d  %-12s  %-8lld  %-9s  %s\n",
                  rank++, bits_width, s.bits.c_str(), s.count,
                  format_double(s.energy).c_str(), static_cast<long long>(s.cost),
                  euros(s.cost).c_str(), s.feasible ? "yes" : "no");
    out << line;
  }
  return out.str();
}

std::string samples_csv(const QaoaResult& result) {
  std::ostringstream out;
  out << "rank,bits,count,energy,cost_cents,cost_eur,feasible\n";
  int rank = 1;
  for (const auto& s : result.samples) {
    out << rank++ << "," << s.bits << "," << s.count << ","
        << format_double(s.energy) << "," << s.cost << "," << euros(s.cost)
        << "," << (s.feasible ? "true" : "false") << "\n";
  }
  return out.str();
}

int cmd_solve(const std::string& instance_path, const std::string& method,
              const QaoaConfig& config, const std::string& format,
              const std::string& out_path, const std::string& manifest_path) {
  RunManifest manifest;
  manifest.command = "solve";
  manifest.instance_path = instance_path;
  manifest.config = {{"method", method},   {"format", format},
                     {"reps", config.reps}, {"shots", config.shots},
                     {"restarts", config.restarts}, {"seed", config.seed},
                     {"max_evals", config.max_evals}, {"cap", config.qubit_cap}};
  PhaseTimer timer(manifest);

  const auto instance = timer.phase("load", [&] {
    return load_instance(read_file(instance_path));
  });

  if (method == "exact") {
    const auto records = timer.phase("solve", [&] {
      return enumerate_feasible(instance);
    });
    timer.phase("emit", [&] {
      if (format == "json")
        emit(records_document(instance, records), out_path, manifest);
      else if (format == "csv")
        emit(records_csv(instance, records), out_path, manifest);
      else
        emit(records_table(instance, records), out_path, manifest);
    });
    if (!records.empty())
      std::cerr << "optimum " << records.front().cost << " cents (EUR "
                << euros(records.front().cost) << ") at " << records.front().bits
                << "\n";
    else
      std::cerr << "no feasible schedule\n";
    emit_manifest(manifest, manifest_path);
    return 0;
  }

  const auto result = timer.phase("solve", [&] {
    return solve_qaoa(instance, config);
  });
  timer.phase("emit", [&] {
    if (format == "json")
      emit(result_document(result), out_path, manifest);
    else if (format == "csv")
      emit(samples_csv(result), out_path, manifest);
    else
      emit(samples_table(result), out_path, manifest);
  });

  std::cerr << "expectation " << format_double(result.expectation) << " vs baseline "
            << format_double(result.baseline_expectation);
  for (const auto& s : result.samples) {
    if (s.feasible) {
      std::cerr << "; best feasible sample " << s.cost << " cents (EUR "
                << euros(s.cost) << ") at " << s.bits;
      break;
    }
  }
  std::cerr << "\n";
  emit_manifest(manifest, manifest_path);
  return 0;
}

// --- bench --------------------------------------------------------------

int cmd_bench(const std::vector<int>& hours_list, const std::vector<int>& reps_list,
              const QaoaConfig& base_config, const std::string& format,
              const std::string& out_path, const std::string& manifest_path) {
  RunManifest manifest;
  manifest.command = "bench";
  manifest.config = {{"hours", hours_list},       {"reps", reps_list},
                     {"shots", base_config.shots}, {"restarts", base_config.restarts},
                     {"seed", base_config.seed},   {"max_evals", base_config.max_evals},
                     {"cap", base_config.qubit_cap}};
  PhaseTimer timer(manifest);

  struct Row {
    int hours;
    int qubits;
    int reps;
    bool capped;
    double seconds;
  };
  std::vector<Row> rows;

  timer.phase("bench", [&] {
    for (const int hours : hours_list) {
      const auto instance = reference_instance(hours);
      const int qubits = build_ilp(instance).num_vars;
      for (const int reps : reps_list) {
        Row row{hours, qubits, reps, false, 0.0};
        if (qubits > base_config.qubit_cap) {
          row.capped = true;  // report the cap, keep the rest of the table
        } else {
          QaoaConfig config = base_config;
          config.reps = reps;
          const auto start = std::chrono::steady_clock::now();
          solve_qaoa(instance, config);
          const std::chrono::duration<double> elapsed =
              std::chrono::steady_clock::now() - start;
          row.seconds = elapsed.count();
        }
        rows.push_back(row);
      }
    }
  });

  timer.phase("emit", [&] {
    std::ostringstream out;
    const bool csv = format == "csv";
    if (csv)
      out << "hours,qubits,reps,seconds\n";
    else
      out << "hours  qubits  reps  seconds\n";
    for (const auto& row : rows) {
      const std::string time = row.capped
                                   ? "cap"
                                   : [&] {
                                       char buffer[32];
                                       std::snprintf(buffer, sizeof(buffer), "%.3f",
                                                     row.seconds);
                                       return std::string(buffer);
                                     }();
      if (csv) {
        out << row.hours << "," << row.qubits << "," << row.reps << "," << time << "\n";
      } else {
        char line[96];
        std::snprintf(line, sizeof(line), "%-5d  %-6d  %-4d  %s\n", row.hours,
                      row.qubits, row.reps, time.c_str());
        out << line;
      }
    }
    emit(out.str(), out_path, manifest);
  });

  emit_manifest(manifest, manifest_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prosumer load scheduling via QUBO/Ising reduction and QAOA"};
  app.require_subcommand(1);

  std::string instance_path;
  std::string out_path;
  std::string manifest_path;
  std::string format = "table";
  std::vector<std::string> emits;
  std::string method = "qaoa";
  QaoaConfig config;
  std::vector<int> hours_list{3, 4, 5};
  std::vector<int> reps_list{1};
  int cap_flag = -1;  // resolved after parse: flag > env > default

  auto* transform = app.add_subcommand("transform", "emit ILP/QUBO/Ising documents");
  transform->add_option("instance", instance_path, "instance document (JSON)")->required();
  transform->add_option("--emit", emits, "model kind: ilp, qubo, ising")
      ->required()
      ->check(CLI::IsMember({"ilp", "qubo", "ising"}));
  transform->add_option("--out", out_path, "write the document here instead of stdout");
  transform->add_option("--manifest", manifest_path, "write the run manifest here");

  auto* solve = app.add_subcommand("solve", "rank schedules by QAOA sampling or exactly");
  solve->add_option("instance", instance_path, "instance document (JSON)")->required();
  solve->add_option("--method", method, "qaoa or exact")
      ->check(CLI::IsMember({"qaoa", "exact"}));
  solve->add_option("--reps", config.reps, "QAOA layer count");
  solve->add_option("--shots", config.shots, "measurement samples");
  solve->add_option("--restarts", config.restarts, "optimizer restarts");
  solve->add_option("--seed", config.seed, "rng seed");
  solve->add_option("--max-evals", config.max_evals,
                    "objective evaluations per restart (0 = automatic)");
  solve->add_option("--cap", cap_flag, "statevector qubit cap");
  solve->add_option("--format", format, "table, json, or csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  solve->add_option("--out", out_path, "write results here instead of stdout");
  solve->add_option("--manifest", manifest_path, "write the run manifest here");

  auto* enumerate = app.add_subcommand("enumerate", "list all feasible schedules with costs");
  enumerate->add_option("instance", instance_path, "instance document (JSON)")->required();
  enumerate->add_option("--format", format, "table, json, or csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  enumerate->add_option("--out", out_path, "write the listing here instead of stdout");
  enumerate->add_option("--manifest", manifest_path, "write the run manifest here");

  auto* bench = app.add_subcommand("bench", "time the pipeline on widened instances");
  bench->add_option("--hours", hours_list, "hour counts of the widened family")
      ->delimiter(',');
  bench->add_option("--reps", reps_list, "QAOA layer counts to time")->delimiter(',');
  bench->add_option("--shots", config.shots, "measurement samples");
  bench->add_option("--restarts", config.restarts, "optimizer restarts");
  bench->add_option("--seed", config.seed, "rng seed");
  bench->add_option("--max-evals", config.max_evals,
                    "objective evaluations per restart (0 = automatic)");
  bench->add_option("--cap", cap_flag, "statevector qubit cap");
  bench->add_option("--format", format, "table or csv")
      ->check(CLI::IsMember({"table", "csv"}));
  bench->add_option("--out", out_path, "write the table here instead of stdout");
  bench->add_option("--manifest", manifest_path, "write the run manifest here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    config.qubit_cap = cap_flag >= 1 ? cap_flag : default_qubit_cap();
    if (transform->parsed())
      return cmd_transform(instance_path, emits, out_path, manifest_path);
    if (solve->parsed())
      return cmd_solve(instance_path, method, config, format, out_path, manifest_path);
    if (enumerate->parsed())
      return cmd_enumerate(instance_path, format, out_path, manifest_path);
    return cmd_bench(hours_list, reps_list, config, format, out_path, manifest_path);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const SizeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
