#pragma once

// Experiment scenarios: single runs, (T, alpha) grids, minimum-time scans,
// qubit scaling and timing. Every scenario is seeded and, when given an
// output directory, writes CSV artifacts plus a metadata.json sidecar
// holding the fully resolved configuration.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aqp/de.hpp"
#include "aqp/dmorph.hpp"

namespace aqp::bench {

/// Invalid scenario configuration (CLI exit code 1).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A scenario that ran but could not complete, e.g. a scan cap (exit code 2).
class ScenarioFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ProblemKind { LandauZener, Grover };
enum class Method { Linear, RolandCerf, DE, Dmorph };

std::string to_string(ProblemKind k);
std::string to_string(Method m);
ProblemKind parse_problem(const std::string& s);
Method parse_method(const std::string& s);

struct ScenarioConfig {
  ProblemKind problem = ProblemKind::LandauZener;
  int qubits = 1;        // grover only
  long long marked = 0;  // grover only
  bool reduced = false;  // grover only: two-level subspace propagation
  Method method = Method::DE;
  double duration = 3.0;  // T
  double alpha = 0.1;
  int slices = 100;  // M
  int repeats = 5;   // R
  std::uint64_t seed = 1;
  DeConfig de;
  DmorphConfig dmorph;
  std::optional<std::filesystem::path> output_dir;

  /// Pushes `slices` into the optimizer blocks and checks every field.
  void resolve();
  /// Resolved configuration as JSON text.
  std::string to_json() const;
};

AdiabaticProblem make_problem(const ScenarioConfig& c);

/// True for methods whose repeats are identical (no randomness).
bool is_deterministic(Method m);

/// Seed for repeat r of cell `cell`, derived from the base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t cell, std::uint64_t repeat);

struct RunRecord {
  std::uint64_t seed = 0;
  ObjectiveReport report;
  Schedule schedule;
  int iterations = 0;
  double seconds = 0.0;
};

struct Aggregate {
  double mean_F = 0.0, mean_F1 = 0.0, mean_F2 = 0.0;
  double best_F = 0.0, best_F1 = 0.0, best_F2 = 0.0;  // run with the largest F
  double max_F1 = 0.0, max_F2 = 0.0;                  // per-metric maxima over runs
  int runs = 0;
};

Aggregate aggregate(const std::vector<RunRecord>& runs);

struct RunResult {
  std::vector<RunRecord> runs;
  Aggregate summary;
};

/// One (problem, method, T, alpha) scenario over R repeats (collapsed to a
/// single run for deterministic methods). With an output directory it
/// writes run_<r>/{schedule,trace,history}.csv, aggregate.csv and
/// metadata.json.
RunResult run_single(ScenarioConfig config, std::uint64_t cell = 0);

struct ScanCell {
  double duration = 0.0;
  double alpha = 0.0;
  int qubits = 0;
  Aggregate summary;
  double seconds = 0.0;
};

struct ScanResult {
  std::vector<double> durations;
  std::vector<double> alphas;
  std::vector<ScanCell> cells;  // row-major: durations outer, alphas inner
  std::string aggregation = "mean over repeats";
};

/// Mean F, F1, F2 over R repeats for every (T, alpha) cell; writes grid.csv.
ScanResult grid_scan(ScenarioConfig base, const std::vector<double>& durations,
                     const std::vector<double>& alphas);

struct ScanStep {
  double duration = 0.0;
  double F = 0.0;
  double F1 = 0.0;
};

struct MinTimeResult {
  double duration = 0.0;  // stopping T
  double F = 0.0;
  double F1 = 0.0;
  double F2 = 0.0;
  std::vector<ScanStep> steps;
};

struct MinTimeOptions {
  double start = 0.0;  // T0; <= 0 selects the default (one step)
  double step = 0.0;   // dT; <= 0 selects the problem default
  double grover_step_factor = 0.25;  // default Grover dT = factor * sqrt(N)
  double tolerance = 1e-3;
  int max_steps = 400;
};

/// Default increment: 0.25 for Landau-Zener, factor * sqrt(N) for Grover.
double default_scan_step(const ScenarioConfig& c, double grover_factor = 0.25);

/// Raises T by dT until two successive F values differ by less than the
/// tolerance; F at each T is the best over the R repeats. Throws
/// ScenarioFailure when max_steps is reached. Writes min_time.csv.
MinTimeResult min_time_scan(ScenarioConfig base, MinTimeOptions options = {});

struct ScalingRow {
  int qubits = 0;
  MinTimeResult scan;
};

/// min_time_scan for every n in [n_lo, n_hi] on the Grover family; writes
/// scaling.csv with columns (n, T_min, F, F1).
std::vector<ScalingRow> qubit_scaling(ScenarioConfig base, int n_lo, int n_hi,
                                      MinTimeOptions options = {});

struct TimingRow {
  int qubits = 0;
  Method method = Method::DE;
  double time_per_iteration = 0.0;
  double total_time = 0.0;
  int iterations = 0;
};

/// Median wall times over R timed runs after one discarded warm-up run, on
/// the full Grover Hamiltonian at the configured T. Writes timing.csv.
std::vector<TimingRow> timing_report(ScenarioConfig base, int n_lo, int n_hi);

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace aqp::bench
