#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "vinedesign/ga.hpp"

using namespace vine;

namespace {

Task straight_ahead_task() {
  Task t;
  t.home = {{0, 0}, kPi / 2};
  t.targets = {{{0, 1.5}, kPi / 2}};
  t.bounds.n_max = 4;
  t.bounds.length = {0.5, 2.0};
  return t;
}

Task obstacle_task() {
  Task t;
  t.home = {{0, 0}, kPi / 2};
  t.targets = {{{2, 8}, 1.3}, {{-3, 7}, 2.0}};
  t.obstacles = {{{0, 3}, 0.7}, {{-1.5, 5}, 0.5}, {{1.8, 5.2}, 0.5}};
  t.bounds.n_max = 10;
  t.bounds.length = {0.5, 1.5};
  t.segment_length = 3.0;
  return t;
}

GaParams small_params(std::uint64_t seed) {
  GaParams p;
  p.population_size = 40;
  p.generations = 10;
  p.seed = seed;
  return p;
}

RankedPopulation two_member_population() {
  RankedPopulation pop;
  pop.members.resize(2);
  pop.records.resize(2);
  for (std::size_t i = 0; i < 2; ++i) {
    pop.records[i].rank = static_cast<int>(i + 1);
    pop.records[i].pop_ref = i;
  }
  return pop;
}

std::vector<Individual> evaluated(const Task& t, Rng& rng, std::size_t n) {
  std::vector<Individual> out(n);
  for (auto& ind : out) {
    ind.solution = random_solution(t, rng, true);
    ind.evaluation = evaluate(ind.solution, t);
  }
  return out;
}

bool same_row(std::span<const double> a, std::span<const double> b) { return std::equal(a.begin(), a.end(), b.begin()); }

}  // namespace

TEST(GaParams, DefaultsAreValid) { EXPECT_TRUE(validate_params(GaParams{}).empty()); }

TEST(GaParams, RejectsBadValues) {
  GaParams p;
  p.population_size = 1;
  p.generations = 0;
  p.mutation_prob = 1.5;
  p.threads = 0;
  EXPECT_EQ(validate_params(p).size(), 4u);
}

TEST(Tournament, LowerRankWinsThreeQuarters) {
  const auto pop = two_member_population();
  Rng rng(61);
  int best = 0, total = 0;
  for (int k = 0; k < 5000; ++k) {
    for (auto idx : binary_tournament(pop, rng)) {
      best += idx == 0;
      ++total;
    }
  }
  EXPECT_EQ(total, 10000);
  EXPECT_NEAR(static_cast<double>(best) / total, 0.75, 0.02);
}

TEST(Tournament, EqualRanksGiveUniformPool) {
  auto pop = two_member_population();
  pop.records[1].rank = 1;
  Rng rng(62);
  int first = 0;
  for (int k = 0; k < 5000; ++k) {
    for (auto idx : binary_tournament(pop, rng)) first += idx == 0;
  }
  EXPECT_NEAR(first / 10000.0, 0.5, 0.02);
}

TEST(Blx, RangeArithmetic) {
  const Range r = blx_range(0.1, 0.3, 0.5, {-1.0, 1.0});
  EXPECT_NEAR(r.lo, 0.0, 1e-12);
  EXPECT_NEAR(r.hi, 0.4, 1e-12);
  const Range clamped = blx_range(0.1, 0.3, 0.5, {0.05, 0.35});
  EXPECT_DOUBLE_EQ(clamped.lo, 0.05);
  EXPECT_DOUBLE_EQ(clamped.hi, 0.35);
}

TEST(Blx, IdenticalParentsReproduce) {
  Task t = obstacle_task();
  t.obstacles.clear();
  Rng rng(63);
  const Solution p = random_solution(t, rng, false);
  const auto kids = blx_crossover(p, p, 0.5, t, true, rng);
  EXPECT_EQ(kids.first, p);
  EXPECT_EQ(kids.second, p);
}

TEST(Blx, LengthGenesFollowBlendRange) {
  Task t = obstacle_task();
  Rng rng(64);
  Solution p1 = random_solution(t, rng, false), p2 = p1;
  std::fill(p1.lengths.begin(), p1.lengths.end(), 1.0);
  std::fill(p2.lengths.begin(), p2.lengths.end(), 1.2);
  double lo = 10, hi = -10;
  for (int k = 0; k < 500; ++k) {
    const auto kids = blx_crossover(p1, p2, 0.5, t, true, rng);
    for (const Solution* c : {&kids.first, &kids.second}) {
      for (double l : c->lengths) {
        ASSERT_GE(l, 0.9 - 1e-12);
        ASSERT_LE(l, 1.3 + 1e-12);
        lo = std::min(lo, l);
        hi = std::max(hi, l);
      }
    }
  }
  EXPECT_LT(lo, 0.91);
  EXPECT_GT(hi, 1.29);
}

TEST(Blx, NonFallbackAnglesAvoidObstacles) {
  const Task t = obstacle_task();
  Rng rng(65);
  int checked = 0;
  for (int k = 0; k < 300; ++k) {
    const Solution p1 = random_solution(t, rng, true), p2 = random_solution(t, rng, true);
    const auto kids = blx_crossover(p1, p2, 0.5, t, true, rng);
    for (const Solution* c : {&kids.first, &kids.second}) {
      ASSERT_TRUE(within_bounds(*c, t));
      for (std::size_t i = 0; i < c->target_count(); ++i) {
        Point2 node = t.home.position;
        double heading = t.home.orientation;
        for (std::size_t j = 0; j < c->link_count(); ++j) {
          auto allowed = allowed_angle_ranges(node, unit_from_angle(heading), c->lengths[j], t.obstacles,
                                              t.bounds.joint_range(j));
          allowed.intersect(blx_range(p1.angles(i)[j], p2.angles(i)[j], 0.5, t.bounds.joint_range(j)));
          heading += c->angles(i)[j];
          const Point2 next = node + c->lengths[j] * unit_from_angle(heading);
          if (j > 0 && !allowed.empty()) {
            for (const auto& o : t.obstacles) EXPECT_EQ(segment_circle_intersects({node, next}, o), 0);
            ++checked;
          }
          node = next;
        }
      }
    }
  }
  EXPECT_GT(checked, 5000);
}

TEST(Mutate, ZeroProbabilityIsIdentity) {
  const Task t = obstacle_task();
  Rng rng(66);
  for (int k = 0; k < 100; ++k) {
    const Solution s = random_solution(t, rng, true);
    Solution m = s;
    mutate(m, 0.0, t, true, rng);
    EXPECT_EQ(m, s);
  }
}

TEST(Mutate, OneConfigurationRegenerated) {
  const Task t = obstacle_task();
  Rng rng(67);
  for (int k = 0; k < 1000; ++k) {
    const Solution s = random_solution(t, rng, true);
    Solution m = s;
    mutate(m, 1.0, t, true, rng);
    EXPECT_EQ(m.lengths, s.lengths);
    int changed = 0;
    for (std::size_t i = 0; i < s.target_count(); ++i) changed += !same_row(m.angles(i), s.angles(i));
    EXPECT_EQ(changed, 1);
    EXPECT_TRUE(within_bounds(m, t));
  }
}

TEST(Mutate, IndividualScopeRegeneratesEverything) {
  const Task t = obstacle_task();
  Rng rng(68);
  const Solution s = random_solution(t, rng, true);
  Solution m = s;
  mutate(m, 1.0, t, true, rng, MutationScope::individual);
  EXPECT_NE(m.lengths, s.lengths);
  for (std::size_t i = 0; i < s.target_count(); ++i) EXPECT_FALSE(same_row(m.angles(i), s.angles(i)));
}

TEST(Survive, WorseOffspringLeaveParents) {
  const Task t = obstacle_task();
  Rng rng(69);
  auto parents = rank_population(evaluated(t, rng, 20), {1.0, 5.0}, 0, 20);
  std::vector<Individual> offspring(20);
  for (auto& o : offspring) {
    o.solution = parents.members.front().solution;
    o.evaluation = parents.members.front().evaluation;
    o.evaluation.penalized_f12 = 1e9;
  }
  const auto before = parents.members;
  const auto next = survive(std::move(parents), std::move(offspring), {1.0, 5.0});
  ASSERT_EQ(next.members.size(), 20u);
  EXPECT_EQ(next.generation, 1);
  for (std::size_t i = 0; i < 20; ++i) EXPECT_EQ(next.members[i].evaluation, before[i].evaluation);
}

TEST(Survive, BetterOffspringTakesRankOne) {
  const Task t = obstacle_task();
  Rng rng(70);
  auto parents = rank_population(evaluated(t, rng, 20), {1.0, 5.0}, 0, 20);
  auto offspring = evaluated(t, rng, 20);
  offspring[7].evaluation.penalized_f12 = 0.0;
  offspring[7].evaluation.objectives = {};
  const auto marker = offspring[7].evaluation;
  const auto next = survive(std::move(parents), std::move(offspring), {1.0, 5.0});
  EXPECT_EQ(next.best().evaluation, marker);
  for (std::size_t i = 0; i < next.records.size(); ++i) {
    EXPECT_EQ(next.records[i].rank, static_cast<int>(i + 1));
    EXPECT_EQ(next.records[i].pop_ref, i);
  }
}

TEST(Run, StraightAheadTaskSolved) {
  GaParams p;
  p.population_size = 100;
  p.generations = 30;
  p.seed = 7;
  const auto result = run(straight_ahead_task(), p);
  const auto& best = result.population.best().evaluation;
  EXPECT_LE(best.penalized_f12, 1e-3);
  EXPECT_EQ(best.objectives.f31a, 0);
  EXPECT_TRUE(best.feasible());
}

TEST(Run, SeedDeterministic) {
  const Task t = obstacle_task();
  const auto a = run(t, small_params(5));
  const auto b = run(t, small_params(5));
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t g = 0; g < a.history.size(); ++g) {
    EXPECT_EQ(a.history[g].best_penalized_f12, b.history[g].best_penalized_f12);
    EXPECT_EQ(a.history[g].best, b.history[g].best);
    EXPECT_EQ(a.history[g].collisions_per_individual, b.history[g].collisions_per_individual);
  }
  EXPECT_EQ(a.population.best().solution, b.population.best().solution);
}

TEST(Run, ThreadCountDoesNotChangeResult) {
  const Task t = obstacle_task();
  auto p = small_params(9);
  const auto one = run(t, p);
  p.threads = 4;
  const auto four = run(t, p);
  ASSERT_EQ(one.population.members.size(), four.population.members.size());
  for (std::size_t i = 0; i < one.population.members.size(); ++i) {
    EXPECT_EQ(one.population.members[i].solution, four.population.members[i].solution);
    EXPECT_EQ(one.population.members[i].evaluation, four.population.members[i].evaluation);
  }
}

TEST(Run, HistoryAndObserver) {
  const Task t = obstacle_task();
  const auto p = small_params(11);
  std::size_t calls = 0;
  const auto r = run(t, p, [&](const Solution& s, const Evaluation&) {
    ++calls;
    EXPECT_TRUE(within_bounds(s, t));
    EXPECT_TRUE(s.evaluated());
  });
  EXPECT_EQ(calls, static_cast<std::size_t>(p.population_size * (p.generations + 1)));
  ASSERT_EQ(r.history.size(), static_cast<std::size_t>(p.generations + 1));
  for (std::size_t g = 1; g < r.history.size(); ++g) {
    EXPECT_EQ(r.history[g].generation, static_cast<int>(g));
    // rank one minimizes the f12 bin over a union that contains the previous best
    EXPECT_LE(bin_value(r.history[g].best_penalized_f12, p.bins.f12),
              bin_value(r.history[g - 1].best_penalized_f12, p.bins.f12));
  }
  for (const auto& m : r.population.members) EXPECT_TRUE(within_bounds(m.solution, t));
}

TEST(Run, AvoidanceLowersCollisionsPerIndividual) {
  const Task t = obstacle_task();
  double on = 0.0, off = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto p = small_params(seed);
    for (const auto& h : run(t, p).history) on += h.collisions_per_individual;
    p.avoidance = false;
    for (const auto& h : run(t, p).history) off += h.collisions_per_individual;
  }
  EXPECT_LT(on, off);
}

TEST(Run, InvalidInputThrows) {
  Task t = obstacle_task();
  GaParams p = small_params(1);
  p.population_size = 1;
  EXPECT_THROW(run(t, p), std::invalid_argument);
  t.targets.clear();
  EXPECT_THROW(run(t, small_params(1)), std::invalid_argument);
}
