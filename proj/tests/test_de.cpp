#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "aqp/de.hpp"

using namespace aqp;

namespace {

DeConfig small_config(int generations = 10) {
  DeConfig c;
  c.population = 8;
  c.harmonics = 1;
  c.chromosome = 6;
  c.generations = generations;
  c.slices = 40;
  c.seed = 42;
  return c;
}

// Scalar oracle: sum of squares of the genes, negated, for fast tests.
ObjectiveScores sphere(const CrabParams& x) {
  double s = 0.0;
  for (double g : x.genes()) s += g * g;
  return {-s, -s, 0.0, 0.0};
}

DeState state_with(std::vector<std::vector<double>> genes, int harmonics = 1) {
  DeState st;
  for (auto& g : genes) st.population.emplace_back(harmonics, std::move(g));
  st.scores.assign(st.population.size(), 0.0);
  st.details.assign(st.population.size(), ObjectiveScores{});
  return st;
}

}  // namespace

TEST_SUITE("de") {
  TEST_CASE("configuration validation") {
    CHECK_NOTHROW(DeConfig{}.validate());
    auto c = DeConfig{};
    c.population = 4;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = DeConfig{};
    c.crossover = 1.5;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = DeConfig{};
    c.chromosome = 10;
    try {
      c.validate();
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("12") != std::string::npos);
    }
    c = DeConfig{};
    c.scale = NAN;
    CHECK_THROWS_AS(c.validate(), ValidationError);
  }

  TEST_CASE("initial population") {
    const auto config = DeConfig{};
    Rng rng(7);
    const auto st = de_init(config, rng);
    REQUIRE(st.population.size() == 20);
    const auto& zero = st.population[0];
    for (int l = 0; l < 2; ++l) {
      for (int k = 0; k < 2; ++k) {
        CHECK(zero.a(l, k) == 0.0);
        CHECK(zero.b(l, k) == 0.0);
        CHECK(zero.omega(l, k) == doctest::Approx(2.0 * std::numbers::pi * (k + 1)));
      }
    }
    const auto lin = constrain(crab_render(zero, GuessEnvelope{}, 100), 100);
    const auto ref = linear(100);
    for (int k = 0; k <= 100; ++k) CHECK(std::abs(lin.u2()[k] - ref.u2()[k]) < 1e-15);

    for (std::size_t i = 1; i < st.population.size(); ++i) {
      const auto& x = st.population[i];
      for (int l = 0; l < 2; ++l) {
        for (int k = 0; k < 2; ++k) {
          CHECK(x.a(l, k) >= -0.5);
          CHECK(x.a(l, k) <= 0.5);
          CHECK(x.b(l, k) >= -0.5);
          CHECK(x.b(l, k) <= 0.5);
          const double principal = 2.0 * std::numbers::pi * (k + 1);
          CHECK(x.omega(l, k) >= 0.5 * principal);
          CHECK(x.omega(l, k) <= 1.5 * principal);
        }
      }
    }

    Rng again(7), other(8);
    CHECK(de_init(config, again).population == st.population);
    CHECK_FALSE(de_init(config, other).population == st.population);
  }

  TEST_CASE("mutation") {
    auto config = small_config();
    config.population = 5;
    SUBCASE("identical donors return the best member") {
      auto st = state_with({{1, 2, 3, 4, 5, 6}, {0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0},
                            {0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0}});
      st.best_index = 0;
      const auto v = de_mutate(st, {1, 2, 3, 4}, config);
      CHECK(v.genes() == std::vector<double>{1, 2, 3, 4, 5, 6});
    }
    SUBCASE("S = 0 returns the best member") {
      config.scale = 0.0;
      auto st = state_with({{1, 1, 1, 1, 1, 1}, {9, 9, 9, 9, 9, 9}, {2, 2, 2, 2, 2, 2},
                            {5, 5, 5, 5, 5, 5}, {3, 3, 3, 3, 3, 3}});
      st.best_index = 3;
      CHECK(de_mutate(st, {0, 1, 2, 4}, config).genes() ==
            std::vector<double>(6, 5.0));
    }
    SUBCASE("hand-evaluated donor") {
      config.scale = 0.6;
      auto st = state_with({{0, 0, 0, 0, 0, 0}, {1, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0},
                            {0, 0, 2, 0, 0, 0}, {0, 0, 0, 3, 0, 0}});
      st.best_index = 0;
      const auto v = de_mutate(st, {1, 2, 3, 4}, config).genes();
      const std::vector<double> expected{0.6, -0.6, 1.2, -1.8, 0.0, 0.0};
      for (int j = 0; j < 6; ++j) CHECK(v[j] == doctest::Approx(expected[j]).epsilon(1e-15));
    }
  }

  TEST_CASE("crossover") {
    auto config = small_config();
    const CrabParams target(1, {1, 1, 1, 1, 1, 1});
    const CrabParams donor(1, {2, 2, 2, 2, 2, 2});
    const std::vector<double> mid(6, 0.5);
    config.crossover = 1.0;
    CHECK(de_crossover(target, donor, 3, mid, config) == donor);
    config.crossover = 0.0;
    const auto trial = de_crossover(target, donor, 3, mid, config);
    CHECK(trial.genes() == std::vector<double>{1, 1, 1, 2, 1, 1});

    SUBCASE("each gene is taken from the donor with probability C + (1 - C) / D") {
      config.crossover = 0.3;
      Rng rng(99);
      const int trials = 100000;
      std::vector<int> hits(6, 0);
      for (int t = 0; t < trials; ++t) {
        const auto out = de_crossover(target, donor, config, rng);
        for (int j = 0; j < 6; ++j) hits[j] += out.genes()[j] == 2.0;
      }
      const double p = 0.3 + 0.7 / 6.0;
      const double sigma = std::sqrt(trials * p * (1.0 - p));
      for (int j = 0; j < 6; ++j) CHECK(std::abs(hits[j] - trials * p) < 3.0 * sigma);
    }
  }

  TEST_CASE("selection keeps the better of target and trial") {
    auto st = state_with({{1, 0, 0, 0, 0, 0}, {2, 0, 0, 0, 0, 0}});
    st.scores = {-1.0, -4.0};
    st.best_index = 0;
    const CrabParams worse(1, {3, 0, 0, 0, 0, 0});
    CHECK_FALSE(de_select(st, 1, worse, sphere));
    CHECK(st.population[1].genes()[0] == 2.0);
    const CrabParams equal(1, {0, 2, 0, 0, 0, 0});
    CHECK(de_select(st, 1, equal, sphere));
    CHECK(st.population[1] == equal);
    const CrabParams better(1, {0.5, 0, 0, 0, 0, 0});
    CHECK(de_select(st, 1, better, sphere));
    CHECK(st.best_index == 1);
  }

  TEST_CASE("generation draws distinct donors and never lowers the best score") {
    const auto config = small_config();
    Rng rng(config.seed);
    auto st = de_init(config, rng);
    de_score_all(st, sphere);
    for (int g = 0; g < 30; ++g) {
      de_generation(st, config, rng, sphere, [&](int i, const MemberDraw& d) {
        std::set<int> seen(d.donors.begin(), d.donors.end());
        CHECK(seen.size() == 4);
        CHECK(seen.count(i) == 0);
        CHECK(d.j_rand >= 0);
        CHECK(d.j_rand < config.chromosome);
        CHECK(d.uniforms.size() == 6);
      });
    }
    REQUIRE(st.history.size() == 31);
    for (std::size_t g = 1; g < st.history.size(); ++g) {
      CHECK(st.history[g].best_F >= st.history[g - 1].best_F);
      CHECK(st.history[g].generation == static_cast<int>(g));
    }
    CHECK(st.history.back().best_F > st.history.front().best_F);
  }

  TEST_CASE("optimization on Landau-Zener improves on the linear start") {
    auto config = small_config(15);
    const auto p = landau_zener();
    const double start = evaluate(p, linear(config.slices), 3.0, 0.1).F;
    const auto result = de_optimize(p, 3.0, 0.1, GuessEnvelope{}, config);
    CHECK(result.generations == 15);
    CHECK(result.history.size() == 16);
    CHECK(result.history.front().best_F >= start);
    CHECK(result.report.F == doctest::Approx(result.history.back().best_F).epsilon(1e-14));
    CHECK(result.report.F > start);
    CHECK(result.schedule.pinned());
  }

  TEST_CASE("serial and threaded runs are bitwise identical") {
    auto config = small_config(8);
    const auto p = grover(2, 2);
    const auto serial = de_optimize(p, 4.0, 0.2, GuessEnvelope{}, config);
    config.threads = 4;
    const auto threaded = de_optimize(p, 4.0, 0.2, GuessEnvelope{}, config);
    CHECK(serial.best == threaded.best);
    std::ostringstream a, b;
    write_de_history_csv(a, serial.history);
    write_de_history_csv(b, threaded.history);
    CHECK(a.str() == b.str());
    CHECK(serial.schedule.u1() == threaded.schedule.u1());
  }

  TEST_CASE("observer sees every member in every generation") {
    const auto config = small_config(3);
    int calls = 0;
    DeObserver obs{[&](int generation, int member, const MemberDraw&) {
      CHECK(generation >= 1);
      CHECK(generation <= 3);
      CHECK(member == calls % config.population);
      ++calls;
    }};
    de_optimize(landau_zener(), 2.0, 0.1, GuessEnvelope{}, config, obs);
    CHECK(calls == 3 * config.population);
  }

  TEST_CASE("constant envelopes are infeasible") {
    GuessEnvelope flat{[](double) { return 0.0; }, [](double s) { return s; }};
    const CrabParams x(1, {0.1, 0.2, 6.0, 0.1, 0.1, 6.0});
    const auto s = score_candidate(landau_zener(), x, flat, 20, 3.0, 0.1);
    CHECK(s.F == kInfeasible);
    CHECK(std::isnan(s.F1));
    CHECK_THROWS_AS(de_optimize(landau_zener(), 3.0, 0.1, flat, small_config(2)),
                    std::runtime_error);
  }

  TEST_CASE("history CSV layout") {
    std::ostringstream out;
    write_de_history_csv(out, {{0, 1.0, 0.9, 1.0, 0.5}});
    CHECK(out.str() == "generation,best_F,best_F1,best_F2,mean_F\n0,1,0.90000000000000002,1,0.5\n");
  }
}
