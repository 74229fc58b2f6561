#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "vinedesign/fitness.hpp"
#include "vinedesign/model.hpp"
#include "vinedesign/rankpart.hpp"

namespace vine {

enum class MutationScope { configuration, individual };

struct GaParams {
  int population_size{500};
  int generations{150};
  double crossover_prob{0.9};
  double mutation_prob{0.4};
  double alpha{0.5};
  BinSizes bins{1.0, 5.0};
  PenaltyFactors penalty{kDefaultPenalty};
  bool avoidance{true};
  std::uint64_t seed{1};
  MutationScope mutation_scope{MutationScope::configuration};
  bool maximize_straight_links{false};
  // evaluator threads; results do not depend on this
  int threads{1};
};

inline std::vector<std::string> validate_params(const GaParams& p) {
  std::vector<std::string> issues;
  if (p.population_size < 2) issues.emplace_back("population size must be at least 2");
  if (p.generations < 1) issues.emplace_back("generations must be at least 1");
  if (!(p.crossover_prob >= 0.0 && p.crossover_prob <= 1.0)) issues.emplace_back("crossover probability outside [0,1]");
  if (!(p.mutation_prob >= 0.0 && p.mutation_prob <= 1.0)) issues.emplace_back("mutation probability outside [0,1]");
  if (!(p.alpha > 0.0)) issues.emplace_back("blx alpha must be positive");
  if (!(p.bins.f12 > 0.0) || !(p.bins.f32 > 0.0)) issues.emplace_back("bin sizes must be positive");
  if (std::any_of(p.penalty.begin(), p.penalty.end(), [](double r) { return r < 0.0; })) {
    issues.emplace_back("penalty factors must be nonnegative");
  }
  if (p.threads < 1) issues.emplace_back("threads must be at least 1");
  return issues;
}

struct Individual {
  Solution solution;
  Evaluation evaluation;
};

/// Members are stored in rank order: records[i].rank == i + 1 and
/// records[i].pop_ref == i.
struct RankedPopulation {
  std::vector<Individual> members;
  std::vector<FitnessRecord> records;
  int generation{0};

  const Individual& best() const { return members.front(); }
};

struct GenerationRecord {
  int generation{0};
  double best_penalized_f12{0.0};
  ObjectiveVector best;
  double collisions_per_individual{0.0};
};

struct RunResult {
  RankedPopulation population;
  std::vector<GenerationRecord> history;
  DrawCounters draws;
};

/// Called once per evaluated individual, in a fixed order.
using EvaluationObserver = std::function<void(const Solution&, const Evaluation&)>;

inline FitnessRecord make_record(const Evaluation& e, std::size_t ref) {
  FitnessRecord r;
  r.f12_raw = e.penalized_f12;
  r.f31a = e.objectives.f31a;
  r.f33 = e.objectives.f33;
  r.f31b = e.objectives.f31b;
  r.f32_raw = e.objectives.f32;
  r.pop_ref = ref;
  return r;
}

inline RankedPopulation rank_population(std::vector<Individual> members, const BinSizes& bins, int generation,
                                        std::size_t keep) {
  std::vector<FitnessRecord> records;
  records.reserve(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) records.push_back(make_record(members[i].evaluation, i));
  records = rank_partition(std::move(records), bins);

  keep = std::min(keep, records.size());
  RankedPopulation out;
  out.generation = generation;
  out.members.reserve(keep);
  out.records.assign(records.begin(), records.begin() + static_cast<std::ptrdiff_t>(keep));
  for (std::size_t i = 0; i < keep; ++i) {
    out.members.push_back(std::move(members[out.records[i].pop_ref]));
    out.records[i].pop_ref = i;
  }
  return out;
}

/// N tournaments with replacement; each keeps the lower rank of two uniform
/// draws. Returns member indices.
inline std::vector<std::size_t> binary_tournament(const RankedPopulation& pop, Rng& rng) {
  const std::size_t n = pop.members.size();
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> pool(n);
  for (auto& slot : pool) {
    const std::size_t a = pick(rng);
    const std::size_t b = pick(rng);
    slot = pop.records[a].rank <= pop.records[b].rank ? pop.records[a].pop_ref : pop.records[b].pop_ref;
  }
  return pool;
}

inline Range blx_range(double a, double b, double alpha, Range bounds) {
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  const double ext = alpha * (hi - lo);
  return {bounds.clamp(lo - ext), bounds.clamp(hi + ext)};
}

/// Blend crossover. Length genes are blended first; angle genes are then grown
/// node by node on each child's own chain so the blend range can be filtered
/// by the obstacle-free steering set.
inline std::pair<Solution, Solution> blx_crossover(const Solution& p1, const Solution& p2, double alpha,
                                                   const Task& task, bool avoidance, Rng& rng,
                                                   DrawCounters* counters = nullptr) {
  const auto& b = task.bounds;
  std::pair<Solution, Solution> kids{Solution(p1.target_count(), p1.link_count()),
                                     Solution(p1.target_count(), p1.link_count())};
  for (Solution* child : {&kids.first, &kids.second}) {
    for (std::size_t j = 0; j < p1.lengths.size(); ++j) {
      const Range r = blx_range(p1.lengths[j], p2.lengths[j], alpha, b.length);
      child->lengths[j] = uniform_in(rng, r.lo, r.hi);
    }
    for (std::size_t i = 0; i < p1.target_count(); ++i) {
      const auto a1 = p1.angles(i);
      const auto a2 = p2.angles(i);
      grow_angle_row(
          task, child->lengths, child->angles(i), rng, avoidance,
          [&](std::size_t j) { return blx_range(a1[j], a2[j], alpha, b.joint_range(j)); }, counters);
    }
  }
  return kids;
}

/// With probability `prob`, regenerates one uniformly chosen configuration
/// (or the whole individual) with the obstacle-aware generator.
inline void mutate(Solution& ind, double prob, const Task& task, bool avoidance, Rng& rng,
                   MutationScope scope = MutationScope::configuration, DrawCounters* counters = nullptr) {
  if (!(uniform_in(rng, 0.0, 1.0) < prob)) return;
  if (scope == MutationScope::individual) {
    ind = random_solution(task, rng, avoidance, counters);
    return;
  }
  std::uniform_int_distribution<std::size_t> pick(0, ind.target_count() - 1);
  const std::size_t i = pick(rng);
  random_angle_row(task, ind.lengths, ind.angles(i), rng, avoidance, counters);
  ind.completions.clear();
}

/// Evaluates every individual; work is split across `threads` but each
/// evaluation is independent, so results are identical for any split.
inline void evaluate_batch(std::vector<Individual>& batch, const Task& task, const GaParams& params) {
  const EvaluateOptions opt{params.maximize_straight_links};
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      batch[k].evaluation = evaluate(batch[k].solution, task, params.penalty, opt);
    }
  };
  const auto workers = static_cast<std::size_t>(std::max(1, params.threads));
  if (workers == 1 || batch.size() < 2 * workers) {
    work(0, batch.size());
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (batch.size() + workers - 1) / workers;
  for (std::size_t begin = 0; begin < batch.size(); begin += chunk) {
    pool.emplace_back(work, begin, std::min(batch.size(), begin + chunk));
  }
  for (auto& t : pool) t.join();
}

/// mu + lambda: parents and offspring are ranked together and the best
/// parents.size() survive.
inline RankedPopulation survive(RankedPopulation parents, std::vector<Individual> offspring, const BinSizes& bins) {
  const std::size_t keep = parents.members.size();
  std::vector<Individual> all = std::move(parents.members);
  all.reserve(all.size() + offspring.size());
  for (auto& o : offspring) all.push_back(std::move(o));
  return rank_population(std::move(all), bins, parents.generation + 1, keep);
}

namespace detail {

inline double mean_collisions(const std::vector<Individual>& batch) {
  if (batch.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& ind : batch) sum += ind.evaluation.violations[4];
  return sum / static_cast<double>(batch.size());
}

inline GenerationRecord summarize(const RankedPopulation& pop, double collisions) {
  GenerationRecord g;
  g.generation = pop.generation;
  g.best_penalized_f12 = pop.best().evaluation.penalized_f12;
  g.best = pop.best().evaluation.objectives;
  g.collisions_per_individual = collisions;
  return g;
}

inline void notify(const EvaluationObserver& observer, const std::vector<Individual>& batch) {
  if (!observer) return;
  for (const auto& ind : batch) observer(ind.solution, ind.evaluation);
}

}  // namespace detail

/// Random initialization, then `generations` rounds of tournament selection,
/// blend crossover, mutation, evaluation and elitist survival. Every random
/// draw comes from one generator seeded with params.seed.
inline RunResult run(const Task& task, const GaParams& params, const EvaluationObserver& observer = {}) {
  if (const auto issues = validate_task(task); !issues.empty()) {
    throw std::invalid_argument("run: invalid task: " + issues.front());
  }
  if (const auto issues = validate_params(params); !issues.empty()) {
    throw std::invalid_argument("run: invalid parameters: " + issues.front());
  }
  Rng rng(params.seed);
  RunResult result;
  const auto n = static_cast<std::size_t>(params.population_size);

  std::vector<Individual> batch(n);
  for (auto& ind : batch) ind.solution = random_solution(task, rng, params.avoidance, &result.draws);
  evaluate_batch(batch, task, params);
  detail::notify(observer, batch);
  double collisions = detail::mean_collisions(batch);
  RankedPopulation pop = rank_population(std::move(batch), params.bins, 0, n);
  result.history.push_back(detail::summarize(pop, collisions));

  for (int g = 1; g <= params.generations; ++g) {
    const auto pool = binary_tournament(pop, rng);
    std::vector<Individual> offspring;
    offspring.reserve(n + 1);
    for (std::size_t k = 0; k < n; k += 2) {
      const Solution& a = pop.members[pool[k]].solution;
      const Solution& b = pop.members[pool[(k + 1) % n]].solution;
      std::pair<Solution, Solution> kids;
      if (uniform_in(rng, 0.0, 1.0) < params.crossover_prob) {
        kids = blx_crossover(a, b, params.alpha, task, params.avoidance, rng, &result.draws);
      } else {
        kids = {a, b};
      }
      for (Solution* kid : {&kids.first, &kids.second}) {
        mutate(*kid, params.mutation_prob, task, params.avoidance, rng, params.mutation_scope, &result.draws);
      }
      offspring.push_back({std::move(kids.first), {}});
      if (offspring.size() < n) offspring.push_back({std::move(kids.second), {}});
    }
    evaluate_batch(offspring, task, params);
    detail::notify(observer, offspring);
    collisions = detail::mean_collisions(offspring);
    pop = survive(std::move(pop), std::move(offspring), params.bins);
    result.history.push_back(detail::summarize(pop, collisions));
  }
  result.population = std::move(pop);
  return result;
}

}  // namespace vine
