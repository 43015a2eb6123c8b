#include "aqp/de.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "csv_format.hpp"

namespace aqp {

void DeConfig::validate() const {
  auto fail = [](const std::string& what) { throw ValidationError("DE config: " + what); };
  if (population < 5) fail("population size P must be >= 5, got " + std::to_string(population));
  if (!(crossover >= 0.0 && crossover <= 1.0)) fail("crossover rate C must lie in [0, 1]");
  if (!std::isfinite(scale)) fail("scaling factor S must be finite");
  if (harmonics < 1) fail("harmonic count N_c must be >= 1");
  if (chromosome != 6 * harmonics) {
    fail("chromosome length D = " + std::to_string(chromosome) + " must equal 6 * N_c = " +
         std::to_string(6 * harmonics));
  }
  if (generations < 0) fail("G_max must be >= 0");
  if (slices < 2) fail("slice count M must be >= 2");
  if (threads < 1) fail("thread count must be >= 1");
  if (!(init.coeff_hi >= init.coeff_lo)) fail("init coefficient range is empty");
  if (!(init.omega_jitter >= 0.0)) fail("init omega jitter must be >= 0");
}

DeState de_init(const DeConfig& config, Rng& rng) {
  config.validate();
  DeState state;
  state.population.reserve(config.population);
  for (int i = 0; i < config.population; ++i) {
    CrabParams x(config.harmonics);
    for (int l = 0; l < 2; ++l) {
      for (int k = 0; k < config.harmonics; ++k) {
        const double principal = 2.0 * std::numbers::pi * (k + 1);
        if (i == 0) {
          x.omega(l, k) = principal;
          continue;
        }
        x.a(l, k) = rng.uniform(config.init.coeff_lo, config.init.coeff_hi);
        x.b(l, k) = rng.uniform(config.init.coeff_lo, config.init.coeff_hi);
        x.omega(l, k) =
            principal * (1.0 + rng.uniform(-config.init.omega_jitter, config.init.omega_jitter));
      }
    }
    state.population.push_back(std::move(x));
  }
  state.scores.assign(config.population, kInfeasible);
  state.details.assign(config.population, ObjectiveScores{kInfeasible, NAN, NAN, 0.0});
  return state;
}

MemberDraw de_draw(int i, const DeConfig& config, Rng& rng) {
  MemberDraw draw;
  for (std::size_t slot = 0; slot < draw.donors.size(); ++slot) {
    int r;
    do {
      r = rng.index(config.population);
    } while (r == i || std::find(draw.donors.begin(), draw.donors.begin() + slot, r) !=
                           draw.donors.begin() + slot);
    draw.donors[slot] = r;
  }
  draw.j_rand = rng.index(config.chromosome);
  draw.uniforms.resize(config.chromosome);
  for (double& u : draw.uniforms) u = rng.uniform();
  return draw;
}

CrabParams de_mutate(const DeState& state, const std::array<int, 4>& donors,
                     const DeConfig& config) {
  const auto& best = state.population[state.best_index].genes();
  const auto& x1 = state.population[donors[0]].genes();
  const auto& x2 = state.population[donors[1]].genes();
  const auto& x3 = state.population[donors[2]].genes();
  const auto& x4 = state.population[donors[3]].genes();
  std::vector<double> v(best.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    v[j] = best[j] + config.scale * (x1[j] - x2[j]) + config.scale * (x3[j] - x4[j]);
  }
  return CrabParams(config.harmonics, std::move(v));
}

CrabParams de_mutate(const DeState& state, int i, const DeConfig& config, Rng& rng) {
  return de_mutate(state, de_draw(i, config, rng).donors, config);
}

CrabParams de_crossover(const CrabParams& target, const CrabParams& donor, int j_rand,
                        const std::vector<double>& uniforms, const DeConfig& config) {
  if (target.size() != donor.size() || uniforms.size() != target.size()) {
    throw ValidationError("crossover operands differ in length");
  }
  std::vector<double> trial = target.genes();
  for (std::size_t j = 0; j < trial.size(); ++j) {
    if (uniforms[j] < config.crossover || static_cast<int>(j) == j_rand) {
      trial[j] = donor.genes()[j];
    }
  }
  return CrabParams(target.harmonics(), std::move(trial));
}

CrabParams de_crossover(const CrabParams& target, const CrabParams& donor,
                        const DeConfig& config, Rng& rng) {
  const int j_rand = rng.index(static_cast<int>(target.size()));
  std::vector<double> uniforms(target.size());
  for (double& u : uniforms) u = rng.uniform();
  return de_crossover(target, donor, j_rand, uniforms, config);
}

namespace {

void refresh_best(DeState& state) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(state.scores.size()); ++i) {
    if (state.scores[i] > state.scores[best]) best = i;
  }
  state.best_index = best;
}

void record_generation(DeState& state) {
  GenerationRecord rec;
  rec.generation = state.generation;
  const auto& best = state.details[state.best_index];
  rec.best_F = state.scores[state.best_index];
  rec.best_F1 = best.F1;
  rec.best_F2 = best.F2;
  double sum = 0.0;
  int feasible = 0;
  for (double s : state.scores) {
    if (s != kInfeasible) {
      sum += s;
      ++feasible;
    }
  }
  rec.mean_F = feasible > 0 ? sum / feasible : kInfeasible;
  state.history.push_back(rec);
}

std::vector<ObjectiveScores> score_batch(const std::vector<CrabParams>& batch,
                                         const Evaluator& evaluate, int threads) {
  std::vector<ObjectiveScores> out(batch.size());
  if (threads <= 1 || batch.size() < 2) {
    for (std::size_t i = 0; i < batch.size(); ++i) out[i] = evaluate(batch[i]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < batch.size(); i = next++) {
      try {
        out[i] = evaluate(batch[i]);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  const auto count = std::min<std::size_t>(static_cast<std::size_t>(threads), batch.size());
  for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace

bool de_select(DeState& state, int i, CrabParams trial, const ObjectiveScores& trial_score) {
  if (!(trial_score.F >= state.scores[i])) return false;
  state.population[i] = std::move(trial);
  state.scores[i] = trial_score.F;
  state.details[i] = trial_score;
  if (state.scores[i] > state.scores[state.best_index]) state.best_index = i;
  return true;
}

bool de_select(DeState& state, int i, CrabParams trial, const Evaluator& evaluate) {
  const auto score = evaluate(trial);
  return de_select(state, i, std::move(trial), score);
}

void de_score_all(DeState& state, const Evaluator& evaluate) {
  for (std::size_t i = 0; i < state.population.size(); ++i) {
    state.details[i] = evaluate(state.population[i]);
    state.scores[i] = state.details[i].F;
  }
  refresh_best(state);
  state.history.clear();
  record_generation(state);
}

void de_generation(DeState& state, const DeConfig& config, Rng& rng, const Evaluator& evaluate,
                   const std::function<void(int, const MemberDraw&)>& on_draw) {
  const int size = static_cast<int>(state.population.size());
  std::vector<MemberDraw> draws;
  draws.reserve(size);
  for (int i = 0; i < size; ++i) {
    draws.push_back(de_draw(i, config, rng));
    if (on_draw) on_draw(i, draws.back());
  }
  std::vector<CrabParams> trials;
  trials.reserve(size);
  for (int i = 0; i < size; ++i) {
    const auto donor = de_mutate(state, draws[i].donors, config);
    trials.push_back(
        de_crossover(state.population[i], donor, draws[i].j_rand, draws[i].uniforms, config));
  }
  const auto scores = score_batch(trials, evaluate, config.threads);
  for (int i = 0; i < size; ++i) de_select(state, i, std::move(trials[i]), scores[i]);
  ++state.generation;
  record_generation(state);
}

ObjectiveScores score_candidate(const AdiabaticProblem& p, const CrabParams& x,
                                const GuessEnvelope& envelope, int slices, double duration,
                                double alpha) {
  try {
    const auto sch = constrain(crab_render(x, envelope, slices), slices);
    return evaluate(p, sch, duration, alpha);
  } catch (const DegenerateCandidate&) {
    return ObjectiveScores{kInfeasible, NAN, NAN, alpha};
  }
}

DeResult de_optimize(const AdiabaticProblem& p, double duration, double alpha,
                     const GuessEnvelope& envelope, const DeConfig& config,
                     const DeObserver& observer) {
  config.validate();
  if (!(duration > 0.0)) throw ValidationError("adiabatic duration T must be positive");
  Rng rng(config.seed);
  const Evaluator evaluate = [&](const CrabParams& x) {
    return score_candidate(p, x, envelope, config.slices, duration, alpha);
  };
  auto state = de_init(config, rng);
  de_score_all(state, evaluate);
  for (int g = 0; g < config.generations; ++g) {
    std::function<void(int, const MemberDraw&)> hook;
    if (observer.on_draw) {
      hook = [&](int i, const MemberDraw& d) { observer.on_draw(state.generation + 1, i, d); };
    }
    de_generation(state, config, rng, evaluate, hook);
  }
  if (state.scores[state.best_index] == kInfeasible) {
    throw std::runtime_error("differential evolution found no feasible candidate");
  }
  const auto& best = state.population[state.best_index];
  auto sch = constrain(crab_render(best, envelope, config.slices), config.slices);
  auto report = objective(p, sch, duration, alpha);
  return DeResult{best, std::move(sch), std::move(report), std::move(state.history),
                  state.generation};
}

void write_de_history_csv(std::ostream& out, const std::vector<GenerationRecord>& history) {
  out << "generation,best_F,best_F1,best_F2,mean_F\n";
  for (const auto& r : history) {
    out << r.generation << ',' << csv::num(r.best_F) << ',' << csv::num(r.best_F1) << ','
        << csv::num(r.best_F2) << ',' << csv::num(r.mean_F) << '\n';
  }
}

}  // namespace aqp
