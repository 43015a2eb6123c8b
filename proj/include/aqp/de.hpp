#pragma once

// Differential evolution (DE/best/2, binomial crossover) over CRAB
// coefficients, maximizing the weighted objective F = F1 + alpha * F2.
//
// One generation:
//   1. every member i pre-draws its donor indices, j_rand and D crossover
//      uniforms, in ascending i, from a single seeded stream;
//   2. donors V_i = X_best + S (X_r1 - X_r2) + S (X_r3 - X_r4) and trials are
//      built from the previous generation;
//   3. trials are scored (optionally on several threads);
//   4. selection is applied in ascending i; ties go to the trial.
// Serial and threaded runs therefore make identical decisions.

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <vector>

#include "aqp/dynamics.hpp"
#include "aqp/rng.hpp"
#include "aqp/schedules.hpp"

namespace aqp {

/// Sampling intervals for the initial population.
struct InitRanges {
  double coeff_lo = -0.5;  // a and b ~ U[coeff_lo, coeff_hi]
  double coeff_hi = 0.5;
  /// omega_l^k ~ 2 pi k (1 + U[-omega_jitter, omega_jitter])
  double omega_jitter = 0.5;
};

struct DeConfig {
  double scale = 0.6;      // S
  double crossover = 0.95; // C
  int population = 20;     // P
  int chromosome = 12;     // D, must equal 6 * harmonics
  int harmonics = 2;       // N_c
  int generations = 300;   // G_max
  std::uint64_t seed = 1;
  InitRanges init;
  int slices = 100;        // M used to render candidates
  int threads = 1;

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

inline constexpr double kInfeasible = -std::numeric_limits<double>::infinity();

struct GenerationRecord {
  int generation = 0;
  double best_F = 0.0;
  double best_F1 = 0.0;
  double best_F2 = 0.0;
  double mean_F = 0.0;  // over feasible members
};

struct DeState {
  std::vector<CrabParams> population;
  std::vector<double> scores;
  /// F1 and F2 of each member; NaN for infeasible members.
  std::vector<ObjectiveScores> details;
  int best_index = 0;
  int generation = 0;
  std::vector<GenerationRecord> history;
};

/// Randomness consumed by one member in one generation.
struct MemberDraw {
  std::array<int, 4> donors{};
  int j_rand = 0;
  std::vector<double> uniforms;  // one per gene
};

/// Scores a candidate. Must return kInfeasible for candidates that cannot
/// be rendered into a valid schedule.
using Evaluator = std::function<ObjectiveScores(const CrabParams&)>;

/// Step 1: population of P members; member 0 is the unperturbed guess
/// (a = b = 0, omega_l^k = 2 pi k). Scores stay unset until de_score_all.
DeState de_init(const DeConfig& config, Rng& rng);

/// Draws four mutually distinct donor indices (all != i), j_rand and the
/// crossover uniforms.
MemberDraw de_draw(int i, const DeConfig& config, Rng& rng);

CrabParams de_mutate(const DeState& state, const std::array<int, 4>& donors,
                     const DeConfig& config);
CrabParams de_mutate(const DeState& state, int i, const DeConfig& config, Rng& rng);

CrabParams de_crossover(const CrabParams& target, const CrabParams& donor, int j_rand,
                        const std::vector<double>& uniforms, const DeConfig& config);
CrabParams de_crossover(const CrabParams& target, const CrabParams& donor,
                        const DeConfig& config, Rng& rng);

/// Replaces member i by `trial` iff trial_score.F >= scores[i]; refreshes
/// best_index. Returns true when the trial was adopted.
bool de_select(DeState& state, int i, CrabParams trial, const ObjectiveScores& trial_score);
bool de_select(DeState& state, int i, CrabParams trial, const Evaluator& evaluate);

/// Scores every member and fills best_index; appends the generation-0 record.
void de_score_all(DeState& state, const Evaluator& evaluate);

/// One full generation (mutation, crossover, batched scoring, selection).
void de_generation(DeState& state, const DeConfig& config, Rng& rng, const Evaluator& evaluate,
                   const std::function<void(int, const MemberDraw&)>& on_draw = {});

/// Renders and constrains a candidate, then evaluates it. Infeasible
/// candidates score kInfeasible with NaN F1 and F2.
ObjectiveScores score_candidate(const AdiabaticProblem& p, const CrabParams& x,
                                const GuessEnvelope& envelope, int slices, double duration,
                                double alpha);

struct DeResult {
  CrabParams best;
  Schedule schedule;
  ObjectiveReport report;
  std::vector<GenerationRecord> history;
  int generations = 0;
};

struct DeObserver {
  std::function<void(int generation, int member, const MemberDraw&)> on_draw;
};

/// Steps 1-3 until G_max. Throws std::runtime_error when no feasible member
/// exists at the end of the run.
DeResult de_optimize(const AdiabaticProblem& p, double duration, double alpha,
                     const GuessEnvelope& envelope, const DeConfig& config,
                     const DeObserver& observer = {});

/// CSV with header "generation,best_F,best_F1,best_F2,mean_F".
void write_de_history_csv(std::ostream& out, const std::vector<GenerationRecord>& history);

}  // namespace aqp
