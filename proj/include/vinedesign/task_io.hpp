#pragma once

#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "vinedesign/model.hpp"

namespace vine {

class TaskFileError : public std::runtime_error {
 public:
  enum class Kind { io, syntax, schema, invariant };

  TaskFileError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

namespace detail {

using nlohmann::json;

inline std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

[[noreturn]] inline void schema_error(const std::string& path, const std::string& what) {
  throw TaskFileError(TaskFileError::Kind::schema, path + ": " + what);
}

inline const json& member(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(path, std::string("missing field '") + key + "'");
  return *it;
}

inline double number(const json& v, const std::string& path) {
  if (!v.is_number()) schema_error(path, "expected a number");
  return v.get<double>();
}

inline Range range_of(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) schema_error(path, "expected [lo, hi]");
  return {number(v[0], path + "/0"), number(v[1], path + "/1")};
}

inline Pose2 pose_of(const json& v, const std::string& path) {
  return {{number(member(v, "x", path), path + "/x"), number(member(v, "y", path), path + "/y")},
          number(member(v, "theta", path), path + "/theta")};
}

}  // namespace detail

/// Parses the task JSON schema:
///   {unit, home: {x,y,theta}, targets: [{x,y,theta}], obstacles: [{x,y,r}],
///    bounds: {n_max, theta: [lo,hi], length: [lo,hi], first_joint_free},
///    segment_length}
/// Angles are radians; `unit`, `obstacles`, `first_joint_free` and
/// `segment_length` are optional.
inline Task parse_task_json(const std::string& text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw TaskFileError(TaskFileError::Kind::syntax,
                        "malformed JSON at " + detail::line_col(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  if (!doc.is_object()) detail::schema_error("/", "task must be a JSON object");

  Task task;
  if (auto it = doc.find("unit"); it != doc.end()) {
    if (!it->is_string()) detail::schema_error("/unit", "expected a string");
    task.unit = it->get<std::string>();
  }
  task.home = detail::pose_of(detail::member(doc, "home", "/"), "/home");

  const json& targets = detail::member(doc, "targets", "/");
  if (!targets.is_array()) detail::schema_error("/targets", "expected an array");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    task.targets.push_back(detail::pose_of(targets[i], "/targets/" + std::to_string(i)));
  }

  if (auto it = doc.find("obstacles"); it != doc.end()) {
    if (!it->is_array()) detail::schema_error("/obstacles", "expected an array");
    for (std::size_t k = 0; k < it->size(); ++k) {
      const std::string path = "/obstacles/" + std::to_string(k);
      const json& o = (*it)[k];
      task.obstacles.push_back({{detail::number(detail::member(o, "x", path), path + "/x"),
                                 detail::number(detail::member(o, "y", path), path + "/y")},
                                detail::number(detail::member(o, "r", path), path + "/r")});
    }
  }

  const json& bounds = detail::member(doc, "bounds", "/");
  const json& n_max = detail::member(bounds, "n_max", "/bounds");
  if (!n_max.is_number_integer()) detail::schema_error("/bounds/n_max", "expected an integer");
  task.bounds.n_max = n_max.get<int>();
  task.bounds.theta = detail::range_of(detail::member(bounds, "theta", "/bounds"), "/bounds/theta");
  task.bounds.length = detail::range_of(detail::member(bounds, "length", "/bounds"), "/bounds/length");
  if (auto it = bounds.find("first_joint_free"); it != bounds.end()) {
    if (!it->is_boolean()) detail::schema_error("/bounds/first_joint_free", "expected a boolean");
    task.bounds.first_joint_free = it->get<bool>();
  }
  if (auto it = doc.find("segment_length"); it != doc.end() && !it->is_null()) {
    task.segment_length = detail::number(*it, "/segment_length");
  }

  if (const auto issues = validate_task(task); !issues.empty()) {
    std::string msg = "invalid task:";
    for (const auto& s : issues) msg += "\n  " + s;
    throw TaskFileError(TaskFileError::Kind::invariant, msg);
  }
  return task;
}

inline Task parse_task_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TaskFileError(TaskFileError::Kind::io, "cannot open task file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_task_json(ss.str());
  } catch (const TaskFileError& e) {
    throw TaskFileError(e.kind(), path + ": " + e.what());
  }
}

inline nlohmann::json task_to_json(const Task& task) {
  nlohmann::json j;
  j["unit"] = task.unit;
  j["home"] = {{"x", task.home.position.x}, {"y", task.home.position.y}, {"theta", task.home.orientation}};
  j["targets"] = nlohmann::json::array();
  for (const auto& t : task.targets) {
    j["targets"].push_back({{"x", t.position.x}, {"y", t.position.y}, {"theta", t.orientation}});
  }
  j["obstacles"] = nlohmann::json::array();
  for (const auto& o : task.obstacles) j["obstacles"].push_back({{"x", o.center.x}, {"y", o.center.y}, {"r", o.radius}});
  j["bounds"] = {{"n_max", task.bounds.n_max},
                 {"theta", {task.bounds.theta.lo, task.bounds.theta.hi}},
                 {"length", {task.bounds.length.lo, task.bounds.length.hi}},
                 {"first_joint_free", task.bounds.first_joint_free}};
  if (task.segment_length) j["segment_length"] = *task.segment_length;
  return j;
}

}  // namespace vine
