#include "aqp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "csv_format.hpp"

namespace aqp::bench {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(ProblemKind k) {
  return k == ProblemKind::LandauZener ? "landau-zener" : "grover";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Linear: return "linear";
    case Method::RolandCerf: return "rc";
    case Method::DE: return "de";
    case Method::Dmorph: return "dmorph";
  }
  return "?";
}

ProblemKind parse_problem(const std::string& s) {
  if (s == "landau-zener" || s == "lz") return ProblemKind::LandauZener;
  if (s == "grover") return ProblemKind::Grover;
  throw ConfigError("unknown problem '" + s + "' (expected landau-zener or grover)");
}

Method parse_method(const std::string& s) {
  if (s == "linear") return Method::Linear;
  if (s == "rc") return Method::RolandCerf;
  if (s == "de") return Method::DE;
  if (s == "dmorph") return Method::Dmorph;
  throw ConfigError("unknown method '" + s + "' (expected linear, rc, de or dmorph)");
}

void ScenarioConfig::resolve() {
  if (problem == ProblemKind::Grover) {
    if (qubits < 1 || qubits > 10) throw ConfigError("grover qubit count must lie in [1, 10]");
    if (marked < 0 || marked >= (1LL << qubits)) {
      throw ConfigError("marked index " + std::to_string(marked) + " outside [0, 2^n)");
    }
    if (reduced && marked != 0) {
      throw ConfigError("the reduced Grover model is basis-free; leave marked at 0");
    }
  } else {
    if (reduced) throw ConfigError("--reduced only applies to the grover problem");
    qubits = 1;
    marked = 0;
  }
  if (!(duration > 0.0) || !std::isfinite(duration)) throw ConfigError("T must be positive");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be >= 0");
  if (slices < 2) throw ConfigError("M must be >= 2");
  if (repeats < 1) throw ConfigError("R must be >= 1");
  de.slices = slices;
  dmorph.slices = slices;
  try {
    de.validate();
    dmorph.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
}

std::string ScenarioConfig::to_json() const {
  json j;
  j["problem"] = to_string(problem);
  j["qubits"] = qubits;
  j["marked"] = marked;
  j["reduced"] = reduced;
  j["method"] = to_string(method);
  j["T"] = duration;
  j["alpha"] = alpha;
  j["M"] = slices;
  j["R"] = repeats;
  j["seed"] = seed;
  j["de"] = {{"S", de.scale},
             {"C", de.crossover},
             {"P", de.population},
             {"D", de.chromosome},
             {"N_c", de.harmonics},
             {"G_max", de.generations},
             {"threads", de.threads},
             {"init_coeff_range", {de.init.coeff_lo, de.init.coeff_hi}},
             {"init_omega_jitter", de.init.omega_jitter},
             {"envelope", "u1=1-s, u2=s"},
             {"selection", "batched per generation, ties accept trial"}};
  j["dmorph"] = {{"lambda0", dmorph.lambda0},
                 {"shrink", dmorph.shrink},
                 {"max_trials", dmorph.max_trials},
                 {"G_max", dmorph.iterations},
                 {"initial", "linear"},
                 {"step_memory", "step size retained after acceptance"}};
  if (output_dir) j["output_dir"] = output_dir->string();
  return j.dump(2);
}

AdiabaticProblem make_problem(const ScenarioConfig& c) {
  if (c.problem == ProblemKind::LandauZener) return landau_zener();
  return c.reduced ? grover_reduced(c.qubits) : grover(c.qubits, c.marked);
}

bool is_deterministic(Method m) { return m != Method::DE; }

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ScenarioFailure("cannot write " + path.string());
  out << text;
}

std::ofstream open_csv(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ScenarioFailure("cannot write " + path.string());
  return out;
}

long long hilbert_dim(const ScenarioConfig& c) {
  return c.problem == ProblemKind::Grover ? (1LL << c.qubits) : 2;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t cell, std::uint64_t repeat) {
  return splitmix64(base ^ splitmix64((cell << 20) ^ repeat));
}

Aggregate aggregate(const std::vector<RunRecord>& runs) {
  Aggregate a;
  a.runs = static_cast<int>(runs.size());
  if (runs.empty()) return a;
  std::size_t best = 0;
  a.max_F1 = runs.front().report.F1;
  a.max_F2 = runs.front().report.F2;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    a.max_F1 = std::max(a.max_F1, runs[r].report.F1);
    a.max_F2 = std::max(a.max_F2, runs[r].report.F2);
    a.mean_F += runs[r].report.F;
    a.mean_F1 += runs[r].report.F1;
    a.mean_F2 += runs[r].report.F2;
    if (runs[r].report.F > runs[best].report.F) best = r;
  }
  a.mean_F /= a.runs;
  a.mean_F1 /= a.runs;
  a.mean_F2 /= a.runs;
  a.best_F = runs[best].report.F;
  a.best_F1 = runs[best].report.F1;
  a.best_F2 = runs[best].report.F2;
  return a;
}

namespace {

RunRecord run_once(const ScenarioConfig& c, const AdiabaticProblem& p, std::uint64_t seed,
                   std::string* history_csv) {
  const auto start = std::chrono::steady_clock::now();
  switch (c.method) {
    case Method::Linear:
    case Method::RolandCerf: {
      auto sch = c.method == Method::Linear ? linear(c.slices)
                                            : roland_cerf(hilbert_dim(c), c.slices);
      auto report = objective(p, sch, c.duration, c.alpha);
      return RunRecord{seed, std::move(report), std::move(sch), 0, seconds_since(start)};
    }
    case Method::DE: {
      DeConfig de = c.de;
      de.seed = seed;
      auto result = de_optimize(p, c.duration, c.alpha, GuessEnvelope{}, de);
      if (history_csv) {
        std::ostringstream out;
        write_de_history_csv(out, result.history);
        *history_csv = out.str();
      }
      return RunRecord{seed, std::move(result.report), std::move(result.schedule),
                       result.generations, seconds_since(start)};
    }
    case Method::Dmorph: {
      auto result = dmorph_optimize(p, c.duration, c.alpha, linear(c.slices), c.dmorph);
      if (history_csv) {
        std::ostringstream out;
        write_dmorph_history_csv(out, result.history);
        *history_csv = out.str();
      }
      return RunRecord{seed, std::move(result.report), std::move(result.schedule),
                       result.iterations, seconds_since(start)};
    }
  }
  throw ConfigError("unhandled method");
}

void write_aggregate_csv(std::ostream& out, const Aggregate& a) {
  out << "runs,mean_F,mean_F1,mean_F2,best_F,best_F1,best_F2,max_F1,max_F2\n"
      << a.runs << ',' << csv::num(a.mean_F) << ',' << csv::num(a.mean_F1) << ','
      << csv::num(a.mean_F2) << ',' << csv::num(a.best_F) << ',' << csv::num(a.best_F1) << ','
      << csv::num(a.best_F2) << ',' << csv::num(a.max_F1) << ',' << csv::num(a.max_F2) << '\n';
}

json aggregate_json(const Aggregate& a) {
  return {{"runs", a.runs},       {"mean_F", a.mean_F}, {"mean_F1", a.mean_F1},
          {"mean_F2", a.mean_F2}, {"best_F", a.best_F}, {"best_F1", a.best_F1},
          {"best_F2", a.best_F2}, {"max_F1", a.max_F1}, {"max_F2", a.max_F2}};
}

}  // namespace

RunResult run_single(ScenarioConfig config, std::uint64_t cell) {
  config.resolve();
  const auto problem = make_problem(config);
  const int repeats = is_deterministic(config.method) ? 1 : config.repeats;
  const bool write = config.output_dir.has_value();
  if (write) fs::create_directories(*config.output_dir);

  RunResult result;
  json runs_meta = json::array();
  for (int r = 0; r < repeats; ++r) {
    const auto seed = derive_seed(config.seed, cell, static_cast<std::uint64_t>(r));
    std::string history;
    auto rec = run_once(config, problem, seed, write ? &history : nullptr);
    if (write) {
      const auto dir = *config.output_dir / ("run_" + std::to_string(r));
      fs::create_directories(dir);
      auto sch_out = open_csv(dir / "schedule.csv");
      write_schedule_csv(sch_out, rec.schedule);
      auto trace_out = open_csv(dir / "trace.csv");
      write_trace_csv(trace_out, rec.report, rec.schedule);
      if (!history.empty()) write_text(dir / "history.csv", history);
    }
    runs_meta.push_back({{"repeat", r},
                         {"seed", rec.seed},
                         {"F", rec.report.F},
                         {"F1", rec.report.F1},
                         {"F2", rec.report.F2},
                         {"iterations", rec.iterations},
                         {"wall_seconds", rec.seconds}});
    result.runs.push_back(std::move(rec));
  }
  result.summary = aggregate(result.runs);
  if (write) {
    auto agg_out = open_csv(*config.output_dir / "aggregate.csv");
    write_aggregate_csv(agg_out, result.summary);
    json meta;
    meta["scenario"] = "run";
    meta["config"] = json::parse(config.to_json());
    meta["effective_repeats"] = repeats;
    meta["cell"] = cell;
    meta["runs"] = runs_meta;
    meta["aggregate"] = aggregate_json(result.summary);
    write_text(*config.output_dir / "metadata.json", meta.dump(2) + "\n");
  }
  return result;
}

ScanResult grid_scan(ScenarioConfig base, const std::vector<double>& durations,
                     const std::vector<double>& alphas) {
  if (durations.empty() || alphas.empty()) throw ConfigError("grid axes must be nonempty");
  base.resolve();
  const auto out_dir = base.output_dir;
  base.output_dir.reset();
  ScanResult scan{durations, alphas, {}, {}};
  std::uint64_t cell = 0;
  for (double t : durations) {
    for (double a : alphas) {
      ScenarioConfig c = base;
      c.duration = t;
      c.alpha = a;
      const auto start = std::chrono::steady_clock::now();
      auto run = run_single(c, cell++);
      scan.cells.push_back({t, a, c.qubits, run.summary, seconds_since(start)});
    }
  }
  if (out_dir) {
    fs::create_directories(*out_dir);
    auto out = open_csv(*out_dir / "grid.csv");
    out << "T,alpha,F,F1,F2,best_F,best_F1,best_F2,seconds\n";
    for (const auto& c : scan.cells) {
      out << csv::num(c.duration) << ',' << csv::num(c.alpha) << ',' << csv::num(c.summary.mean_F)
          << ',' << csv::num(c.summary.mean_F1) << ',' << csv::num(c.summary.mean_F2) << ','
          << csv::num(c.summary.best_F) << ',' << csv::num(c.summary.best_F1) << ','
          << csv::num(c.summary.best_F2) << ',' << csv::num(c.seconds) << '\n';
    }
    json meta;
    meta["scenario"] = "grid-scan";
    meta["config"] = json::parse(base.to_json());
    meta["T_values"] = durations;
    meta["alpha_values"] = alphas;
    meta["aggregation"] = scan.aggregation;
    meta["cell_seed"] = "derive_seed(seed, cell_index, repeat)";
    write_text(*out_dir / "metadata.json", meta.dump(2) + "\n");
  }
  return scan;
}

double default_scan_step(const ScenarioConfig& c, double grover_factor) {
  if (c.problem == ProblemKind::LandauZener) return 0.25;
  return grover_factor * std::sqrt(static_cast<double>(hilbert_dim(c)));
}

namespace {

MinTimeResult scan_min_time(ScenarioConfig base, const MinTimeOptions& options,
                            std::uint64_t cell_base) {
  const double step = options.step > 0.0 ? options.step : default_scan_step(base, options.grover_step_factor);
  const double start = options.start > 0.0 ? options.start : step;
  if (options.max_steps < 2) throw ConfigError("scan needs max_steps >= 2");
  base.output_dir.reset();
  MinTimeResult out;
  double prev_F = 0.0;
  for (int i = 0; i < options.max_steps; ++i) {
    ScenarioConfig c = base;
    c.duration = start + i * step;
    const auto run = run_single(c, cell_base + static_cast<std::uint64_t>(i));
    const auto& s = run.summary;
    out.steps.push_back({c.duration, s.best_F, s.best_F1});
    if (i > 0 && std::abs(s.best_F - prev_F) < options.tolerance) {
      out.duration = c.duration;
      out.F = s.best_F;
      out.F1 = s.best_F1;
      out.F2 = s.best_F2;
      return out;
    }
    prev_F = s.best_F;
  }
  throw ScenarioFailure("minimum-time scan hit its cap of " + std::to_string(options.max_steps) +
                        " steps without |dF| < " + csv::num(options.tolerance));
}

void write_scan_steps(std::ostream& out, const MinTimeResult& r) {
  out << "T,F,F1\n";
  for (const auto& s : r.steps) {
    out << csv::num(s.duration) << ',' << csv::num(s.F) << ',' << csv::num(s.F1) << '\n';
  }
}

json scan_options_json(const ScenarioConfig& c, const MinTimeOptions& o) {
  const double step = o.step > 0.0 ? o.step : default_scan_step(c, o.grover_step_factor);
  return {{"T0", o.start > 0.0 ? o.start : step},
          {"dT", step},
          {"tolerance", o.tolerance},
          {"max_steps", o.max_steps},
          {"F_per_T", "best over repeats"}};
}

}  // namespace

MinTimeResult min_time_scan(ScenarioConfig base, MinTimeOptions options) {
  base.resolve();
  const auto out_dir = base.output_dir;
  auto result = scan_min_time(base, options, 0);
  if (out_dir) {
    fs::create_directories(*out_dir);
    auto out = open_csv(*out_dir / "min_time.csv");
    write_scan_steps(out, result);
    json meta;
    meta["scenario"] = "min-time-scan";
    meta["config"] = json::parse(base.to_json());
    meta["scan"] = scan_options_json(base, options);
    meta["result"] = {{"T_min", result.duration}, {"F", result.F}, {"F1", result.F1}};
    write_text(*out_dir / "metadata.json", meta.dump(2) + "\n");
  }
  return result;
}

std::vector<ScalingRow> qubit_scaling(ScenarioConfig base, int n_lo, int n_hi,
                                      MinTimeOptions options) {
  if (base.problem != ProblemKind::Grover) throw ConfigError("qubit scaling needs grover");
  if (n_lo < 1 || n_hi < n_lo) throw ConfigError("invalid qubit range");
  const auto out_dir = base.output_dir;
  base.output_dir.reset();
  std::vector<ScalingRow> rows;
  json scans = json::array();
  for (int n = n_lo; n <= n_hi; ++n) {
    ScenarioConfig c = base;
    c.qubits = n;
    c.resolve();
    // the increment scales with each n unless fixed explicitly
    auto scan = scan_min_time(c, options, static_cast<std::uint64_t>(n) << 32);
    scans.push_back({{"n", n}, {"scan", scan_options_json(c, options)}});
    rows.push_back({n, std::move(scan)});
  }
  if (out_dir) {
    fs::create_directories(*out_dir);
    auto out = open_csv(*out_dir / "scaling.csv");
    out << "n,T_min,F,F1\n";
    for (const auto& r : rows) {
      out << r.qubits << ',' << csv::num(r.scan.duration) << ',' << csv::num(r.scan.F) << ','
          << csv::num(r.scan.F1) << '\n';
    }
    for (const auto& r : rows) {
      auto steps = open_csv(*out_dir / ("scan_n" + std::to_string(r.qubits) + ".csv"));
      write_scan_steps(steps, r.scan);
    }
    base.qubits = n_lo;
    json meta;
    meta["scenario"] = "qubit-scaling";
    meta["config"] = json::parse(base.to_json());
    meta["n_range"] = {n_lo, n_hi};
    meta["scans"] = scans;
    write_text(*out_dir / "metadata.json", meta.dump(2) + "\n");
  }
  return rows;
}

std::vector<TimingRow> timing_report(ScenarioConfig base, int n_lo, int n_hi) {
  if (n_lo < 1 || n_hi < n_lo) throw ConfigError("invalid qubit range");
  if (base.method != Method::DE && base.method != Method::Dmorph) {
    throw ConfigError("timing applies to the de and dmorph methods");
  }
  base.problem = ProblemKind::Grover;
  base.reduced = false;
  const auto out_dir = base.output_dir;
  base.output_dir.reset();
  std::vector<TimingRow> rows;
  for (int n = n_lo; n <= n_hi; ++n) {
    ScenarioConfig c = base;
    c.qubits = n;
    c.marked = 0;
    c.resolve();
    const auto problem = make_problem(c);
    std::vector<double> totals, per_iter;
    int iterations = 0;
    for (int r = 0; r <= c.repeats; ++r) {
      const auto rec = run_once(c, problem, derive_seed(c.seed, static_cast<std::uint64_t>(n),
                                                        static_cast<std::uint64_t>(r)),
                                nullptr);
      if (r == 0) continue;  // warm-up
      iterations = rec.iterations;
      totals.push_back(rec.seconds);
      per_iter.push_back(rec.seconds / std::max(rec.iterations, 1));
    }
    auto median = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      const auto m = v.size() / 2;
      return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
    };
    rows.push_back({n, c.method, median(per_iter), median(totals), iterations});
  }
  if (out_dir) {
    fs::create_directories(*out_dir);
    auto out = open_csv(*out_dir / "timing.csv");
    out << "n,method,time_per_iteration,total_time,iterations\n";
    for (const auto& r : rows) {
      out << r.qubits << ',' << to_string(r.method) << ',' << csv::num(r.time_per_iteration)
          << ',' << csv::num(r.total_time) << ',' << r.iterations << '\n';
    }
    base.qubits = n_lo;
    json meta;
    meta["scenario"] = "timing";
    meta["config"] = json::parse(base.to_json());
    meta["n_range"] = {n_lo, n_hi};
    meta["clock"] = "steady_clock, median of R after one warm-up run";
    write_text(*out_dir / "metadata.json", meta.dump(2) + "\n");
  }
  return rows;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("slope needs >= 2 points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace aqp::bench
