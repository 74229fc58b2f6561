#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vinedesign/fitness.hpp"
#include "vinedesign/ga.hpp"
#include "vinedesign/model.hpp"

namespace vine {

inline std::string fmt_num(double v, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline const char* to_string(MutationScope s) {
  return s == MutationScope::individual ? "individual" : "configuration";
}

inline nlohmann::json params_to_json(const GaParams& p) {
  return {{"population", p.population_size},
          {"generations", p.generations},
          {"crossover_prob", p.crossover_prob},
          {"mutation_prob", p.mutation_prob},
          {"alpha", p.alpha},
          {"bin_f12", p.bins.f12},
          {"bin_f32", p.bins.f32},
          {"penalty", p.penalty},
          {"avoidance", p.avoidance},
          {"seed", p.seed},
          {"mutation_scope", to_string(p.mutation_scope)},
          {"maximize_straight_links", p.maximize_straight_links}};
}

/// Report of the rank-1 individual. Carries the full genotype so every number
/// can be re-derived by evaluating it again.
inline nlohmann::json run_report(const Task& task, const GaParams& params, const Individual& best) {
  using nlohmann::json;
  const Solution& s = best.solution;
  const Evaluation& e = best.evaluation;
  json j;
  j["seed"] = params.seed;
  j["feasible"] = e.feasible();
  j["unit"] = task.unit;
  j["design"] = design_of(s).lengths;
  j["configurations"] = json::array();
  for (std::size_t i = 0; i < s.target_count(); ++i) {
    const auto& c = s.completions[i];
    const auto row = s.angles(i);
    json cfg;
    cfg["target"] = i;
    cfg["angles"] = std::vector<double>(row.begin(), row.begin() + c.epsilon);
    cfg["epsilon"] = c.epsilon;
    cfg["theta_epsilon"] = c.theta_epsilon;
    cfg["n_bar"] = c.n_bar;
    cfg["last_len"] = c.last_len;
    cfg["shortfall"] = c.shortfall;
    j["configurations"].push_back(cfg);
  }
  j["objectives"] = {{"f12", e.objectives.f12}, {"f31a", e.objectives.f31a}, {"f33", e.objectives.f33},
                     {"f31b", e.objectives.f31b}, {"f32", e.objectives.f32}};
  j["penalized_f12"] = e.penalized_f12;
  j["violations"] = e.violations;
  json rows = json::array();
  for (std::size_t i = 0; i < s.target_count(); ++i) {
    const auto row = s.angles(i);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  j["genotype"] = {{"lengths", s.lengths}, {"angles", rows}};
  j["params"] = params_to_json(params);
  return j;
}

/// Rebuilds the genotype stored in a report.
inline Solution solution_from_report(const nlohmann::json& report) {
  const auto& g = report.at("genotype");
  const auto lengths = g.at("lengths").get<std::vector<double>>();
  const auto rows = g.at("angles").get<std::vector<std::vector<double>>>();
  Solution s(rows.size(), lengths.size());
  s.lengths = lengths;
  for (std::size_t i = 0; i < rows.size(); ++i) std::copy(rows[i].begin(), rows[i].end(), s.angles(i).begin());
  return s;
}

inline std::string convergence_csv(const std::vector<GenerationRecord>& history) {
  std::string out = "generation,f12,f31a,f33,f31b,f32,collisions_per_individual\n";
  for (const auto& g : history) {
    out += std::to_string(g.generation) + "," + fmt_num(g.best_penalized_f12) + "," + std::to_string(g.best.f31a) +
           "," + fmt_num(g.best.f33) + "," + std::to_string(g.best.f31b) + "," + fmt_num(g.best.f32) + "," +
           fmt_num(g.collisions_per_individual) + "\n";
  }
  return out;
}

struct BatchRow {
  std::uint64_t seed{0};
  double f12{0.0};  // penalized kinematic fitness of the rank-1 individual
  int f31a{0};
  double f33{0.0};
  int f31b{0};
  double f32{0.0};
  double runtime_s{0.0};
  bool feasible{true};
};

struct MeanSd {
  double mean{0.0};
  double sd{0.0};
};

/// Mean and sample standard deviation (zero for a single value).
inline MeanSd mean_sd(const std::vector<double>& v) {
  MeanSd m;
  if (v.empty()) return m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return m;
}

inline std::string format_mean_sd(const MeanSd& m) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.2f±%.2f", m.mean, m.sd);
  return buf;
}

inline std::string batch_csv(const std::vector<BatchRow>& rows) {
  std::string out = "seed,f12,f31a,f33,f31b,f32,runtime_s\n";
  std::vector<double> cols[6];
  for (const auto& r : rows) {
    out += std::to_string(r.seed) + "," + fmt_num(r.f12) + "," + std::to_string(r.f31a) + "," + fmt_num(r.f33) +
           "," + std::to_string(r.f31b) + "," + fmt_num(r.f32) + "," + fmt_num(r.runtime_s, 6) + "\n";
    cols[0].push_back(r.f12);
    cols[1].push_back(r.f31a);
    cols[2].push_back(r.f33);
    cols[3].push_back(r.f31b);
    cols[4].push_back(r.f32);
    cols[5].push_back(r.runtime_s);
  }
  out += "summary";
  for (const auto& c : cols) out += "," + format_mean_sd(mean_sd(c));
  out += "\n";
  return out;
}

/// Maps workspace coordinates to SVG user units: X = (x - min_x) * scale + margin,
/// Y = (max_y - y) * scale + margin.
struct Viewport {
  double min_x{0.0};
  double max_y{0.0};
  double scale{1.0};
  double margin{20.0};
  double width{0.0};
  double height{0.0};

  Point2 map(Point2 p) const { return {(p.x - min_x) * scale + margin, (max_y - p.y) * scale + margin}; }
};

inline Viewport fit_viewport(const Task& task, const std::vector<std::vector<Point2>>& chains,
                             double pixels = 800.0) {
  double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x;
  double lo_y = lo_x, hi_y = -lo_x;
  auto grow = [&](Point2 p, double pad) {
    lo_x = std::min(lo_x, p.x - pad);
    hi_x = std::max(hi_x, p.x + pad);
    lo_y = std::min(lo_y, p.y - pad);
    hi_y = std::max(hi_y, p.y + pad);
  };
  grow(task.home.position, 0.0);
  for (const auto& t : task.targets) grow(t.position, 0.0);
  for (const auto& o : task.obstacles) grow(o.center, o.radius);
  for (const auto& c : chains) {
    for (const auto& p : c) grow(p, 0.0);
  }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
  Viewport v;
  v.min_x = lo_x;
  v.max_y = hi_y;
  v.scale = pixels / span;
  v.width = (hi_x - lo_x) * v.scale + 2 * v.margin;
  v.height = (hi_y - lo_y) * v.scale + 2 * v.margin + 60.0;
  return v;
}

/// Static SVG 1.1 scene: obstacles, home base, targets with approach arrows,
/// one polyline per completed configuration, and the link-length bounds.
inline std::string render_svg(const Task& task, const Solution& s) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};
  std::vector<std::vector<Point2>> chains;
  for (std::size_t i = 0; i < s.target_count(); ++i) chains.push_back(completed_chain(s, i, task));
  const Viewport vp = fit_viewport(task, chains);
  const double arrow = 0.06 * 800.0 / vp.scale;

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt_num(vp.width, 8) << "\" height=\""
    << fmt_num(vp.height, 8) << "\">\n";
  o << "<!-- viewport: X = (x - " << fmt_num(vp.min_x) << ") * " << fmt_num(vp.scale) << " + " << fmt_num(vp.margin)
    << ", Y = (" << fmt_num(vp.max_y) << " - y) * " << fmt_num(vp.scale) << " + " << fmt_num(vp.margin) << " -->\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& ob : task.obstacles) {
    const Point2 c = vp.map(ob.center);
    o << "<circle class=\"obstacle\" cx=\"" << fmt_num(c.x) << "\" cy=\"" << fmt_num(c.y) << "\" r=\""
      << fmt_num(ob.radius * vp.scale) << "\" fill=\"#bbbbbb\" stroke=\"#555555\"/>\n";
  }
  const Point2 h = vp.map(task.home.position);
  o << "<rect class=\"home\" x=\"" << fmt_num(h.x - 6) << "\" y=\"" << fmt_num(h.y - 6)
    << "\" width=\"12\" height=\"12\" fill=\"black\"/>\n";
  for (std::size_t i = 0; i < chains.size(); ++i) {
    o << "<polyline class=\"configuration\" data-target=\"" << i << "\" fill=\"none\" stroke=\""
      << palette[i % 7] << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < chains[i].size(); ++k) {
      const Point2 p = vp.map(chains[i][k]);
      o << (k ? " " : "") << fmt_num(p.x) << "," << fmt_num(p.y);
    }
    o << "\"/>\n";
    for (const auto& node : chains[i]) {
      const Point2 p = vp.map(node);
      o << "<circle class=\"node\" cx=\"" << fmt_num(p.x) << "\" cy=\"" << fmt_num(p.y) << "\" r=\"2.5\" fill=\""
        << palette[i % 7] << "\"/>\n";
    }
  }
  for (std::size_t i = 0; i < task.targets.size(); ++i) {
    const auto& t = task.targets[i];
    const Point2 tip = vp.map(t.position);
    const Point2 tail = vp.map(t.position - arrow * unit_from_angle(t.orientation));
    o << "<line class=\"target\" x1=\"" << fmt_num(tail.x) << "\" y1=\"" << fmt_num(tail.y) << "\" x2=\""
      << fmt_num(tip.x) << "\" y2=\"" << fmt_num(tip.y) << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    o << "<circle cx=\"" << fmt_num(tip.x) << "\" cy=\"" << fmt_num(tip.y) << "\" r=\"4\" fill=\"none\" "
      << "stroke=\"black\"/>\n";
    o << "<text x=\"" << fmt_num(tip.x + 6) << "\" y=\"" << fmt_num(tip.y - 6) << "\" font-size=\"12\">t"
      << i + 1 << "</text>\n";
  }
  const double legend_y = vp.height - 40.0;
  const double lo_px = task.bounds.length.lo * vp.scale;
  const double hi_px = task.bounds.length.hi * vp.scale;
  o << "<g class=\"legend\" font-size=\"12\">\n";
  o << "<line x1=\"20\" y1=\"" << fmt_num(legend_y) << "\" x2=\"" << fmt_num(20 + lo_px) << "\" y2=\""
    << fmt_num(legend_y) << "\" stroke=\"black\" stroke-width=\"3\"/>\n";
  o << "<line x1=\"20\" y1=\"" << fmt_num(legend_y + 14) << "\" x2=\"" << fmt_num(20 + hi_px) << "\" y2=\""
    << fmt_num(legend_y + 14) << "\" stroke=\"black\" stroke-width=\"3\"/>\n";
  o << "<text x=\"" << fmt_num(30 + hi_px) << "\" y=\"" << fmt_num(legend_y + 10) << "\">link length bounds ["
    << fmt_num(task.bounds.length.lo, 6) << ", " << fmt_num(task.bounds.length.hi, 6) << "] " << task.unit
    << "</text>\n";
  o << "</g>\n</svg>\n";
  return o.str();
}

}  // namespace vine
