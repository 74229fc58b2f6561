// vinedesign: design a vine robot's link lengths for a set of target poses.
//
//   vinedesign --task tasks/task1.json --seed 3 --out-dir out
//   vinedesign --task tasks/comparative6.json --seeds 1-20 --out-dir batch
//
// Exit codes: 0 best solution feasible, 1 best solution infeasible,
// 2 bad input, 3 internal error.

#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vinedesign/vinedesign.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitFeasible = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "1-20", "3,5,8" or a mix such as "1-3,10".
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    if (item.empty()) throw InputError("--seeds: empty item in '" + text + "'");
    try {
      const std::size_t dash = item.find('-');
      if (dash == std::string::npos) {
        seeds.push_back(std::stoull(item));
      } else {
        const auto lo = std::stoull(item.substr(0, dash));
        const auto hi = std::stoull(item.substr(dash + 1));
        if (hi < lo) throw InputError("--seeds: descending range '" + item + "'");
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw InputError("--seeds: cannot parse '" + item + "'");
    }
    pos = comma + 1;
  }
  return seeds;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

struct SeedOutcome {
  vine::BatchRow row;
  bool feasible{false};
};

SeedOutcome run_once(const vine::Task& task, const vine::GaParams& params, const fs::path& dir) {
  fs::create_directories(dir);
  const auto t0 = std::chrono::steady_clock::now();
  const vine::RunResult result = vine::run(task, params);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const vine::Individual& best = result.population.best();
  write_file(dir / "report.json", vine::run_report(task, params, best).dump(2) + "\n");
  write_file(dir / "scene.svg", vine::render_svg(task, best.solution));
  write_file(dir / "convergence.csv", vine::convergence_csv(result.history));
  // kept apart from the report so reruns stay byte-identical
  nlohmann::json timing = {{"seed", params.seed},
                           {"wall_clock_s", seconds},
                           {"draws", result.draws.draws},
                           {"fallbacks", result.draws.fallbacks}};
  write_file(dir / "timing.json", timing.dump(2) + "\n");

  SeedOutcome out;
  const auto& o = best.evaluation.objectives;
  out.row = {params.seed, best.evaluation.penalized_f12, o.f31a, o.f33, o.f31b, o.f32, seconds,
             best.evaluation.feasible()};
  out.feasible = best.evaluation.feasible();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vine robot design by lexicographic genetic search"};
  std::string task_path;
  std::string seeds_text;
  std::string scope = "configuration";
  std::string out_dir = ".";
  vine::GaParams params;
  bool no_avoidance = false;

  app.add_option("--task", task_path, "Task JSON file")->required();
  app.add_option("--seed", params.seed, "Random seed for a single run")->capture_default_str();
  auto* seeds_opt = app.add_option("--seeds", seeds_text, "Seed list for a batch, e.g. 1-20 or 1,4,9");
  app.add_option("--population", params.population_size, "Population size")->capture_default_str();
  app.add_option("--generations", params.generations, "Number of generations")->capture_default_str();
  app.add_option("--bin-f12", params.bins.f12, "Bin size of the kinematic objective")->capture_default_str();
  app.add_option("--bin-f32", params.bins.f32, "Bin size of the robot length objective")->capture_default_str();
  app.add_flag("--no-avoidance", no_avoidance, "Sample steering angles without obstacle avoidance");
  app.add_flag("--maximize-straight-links", params.maximize_straight_links,
               "Set links past the deepest closest node to the upper length bound");
  app.add_option("--mutation-scope", scope, "What a mutation regenerates")
      ->check(CLI::IsMember({"configuration", "individual"}))
      ->capture_default_str();
  app.add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
  app.add_option("--threads", params.threads, "Evaluator threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }
  params.avoidance = !no_avoidance;
  params.mutation_scope = scope == "individual" ? vine::MutationScope::individual : vine::MutationScope::configuration;

  try {
    const vine::Task task = vine::parse_task_file(task_path);
    if (const auto issues = vine::validate_params(params); !issues.empty()) throw InputError(issues.front());

    if (seeds_opt->count() == 0) {
      const auto out = run_once(task, params, out_dir);
      std::printf("seed %llu: %s, penalized f12 %.6g, robot length %.6g\n",
                  static_cast<unsigned long long>(params.seed), out.feasible ? "feasible" : "INFEASIBLE",
                  out.row.f12, out.row.f32);
      return out.feasible ? kExitFeasible : kExitInfeasible;
    }

    const auto seeds = parse_seeds(seeds_text);
    std::vector<vine::BatchRow> rows;
    bool all_feasible = true;
    for (const auto seed : seeds) {
      params.seed = seed;
      const auto out = run_once(task, params, fs::path(out_dir) / ("seed_" + std::to_string(seed)));
      std::printf("seed %llu: %s, penalized f12 %.6g, f33 %.4g, %.2f s\n", static_cast<unsigned long long>(seed),
                  out.feasible ? "feasible" : "INFEASIBLE", out.row.f12, out.row.f33, out.row.runtime_s);
      std::fflush(stdout);
      rows.push_back(out.row);
      all_feasible = all_feasible && out.feasible;
    }
    write_file(fs::path(out_dir) / "batch.csv", vine::batch_csv(rows));
    return all_feasible ? kExitFeasible : kExitInfeasible;
  } catch (const vine::TaskFileError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  }
}
