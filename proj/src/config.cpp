#include "hsbi/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace hsbi {

namespace {

using nlohmann::json;

double require_number(const json& j, const char* key) {
  if (!j.at(key).is_number())
    throw std::invalid_argument(std::string("config: '") + key +
                                "' must be a number");
  return j.at(key).get<double>();
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: malformed JSON: ") +
                                e.what());
  }
  if (!j.is_object())
    throw std::invalid_argument("config: top level must be an object");

  static const std::set<std::string> known = {
      "preset",           "dx",
      "strip_width",      "duration",
      "output_dir",       "snapshot_stride",
      "rupture_threshold", "max_kernel_history",
      "threads",          "deterministic",
      "cfl_safety"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key))
      throw std::invalid_argument("config: unknown key '" + key + "'");
  for (const char* req : {"preset", "dx", "output_dir"})
    if (!j.contains(req))
      throw std::invalid_argument(std::string("config: missing key '") + req +
                                  "'");

  RunConfig c;
  if (!j.at("preset").is_string())
    throw std::invalid_argument("config: 'preset' must be a string");
  c.preset = j.at("preset").get<std::string>();
  c.dx = require_number(j, "dx");
  if (!j.at("output_dir").is_string())
    throw std::invalid_argument("config: 'output_dir' must be a string");
  c.output_dir = j.at("output_dir").get<std::string>();

  if (j.contains("strip_width")) c.strip_width = require_number(j, "strip_width");
  if (j.contains("duration")) c.duration = require_number(j, "duration");
  if (j.contains("snapshot_stride")) {
    if (!j.at("snapshot_stride").is_number_integer())
      throw std::invalid_argument("config: 'snapshot_stride' must be integer");
    c.snapshot_stride = j.at("snapshot_stride").get<std::int64_t>();
  }
  if (j.contains("rupture_threshold"))
    c.rupture_threshold = require_number(j, "rupture_threshold");
  if (j.contains("max_kernel_history")) {
    if (!j.at("max_kernel_history").is_number_integer())
      throw std::invalid_argument(
          "config: 'max_kernel_history' must be integer");
    c.max_kernel_history = j.at("max_kernel_history").get<std::int64_t>();
  }
  if (j.contains("threads")) {
    if (!j.at("threads").is_number_integer())
      throw std::invalid_argument("config: 'threads' must be integer");
    c.threads = j.at("threads").get<int>();
  }
  if (j.contains("deterministic")) {
    if (!j.at("deterministic").is_boolean())
      throw std::invalid_argument("config: 'deterministic' must be boolean");
    c.deterministic = j.at("deterministic").get<bool>();
  }
  if (j.contains("cfl_safety")) c.cfl_safety = require_number(j, "cfl_safety");

  if (!(c.dx > 0.0)) throw std::invalid_argument("config: dx must be > 0");
  if (c.rupture_threshold <= 0.0)
    throw std::invalid_argument("config: rupture_threshold must be > 0");
  if (c.snapshot_stride < 0)
    throw std::invalid_argument("config: snapshot_stride must be >= 0");
  if (c.max_kernel_history < 0)
    throw std::invalid_argument("config: max_kernel_history must be >= 0");
  if (c.threads < 0)
    throw std::invalid_argument("config: threads must be >= 0");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string canonical_config(const RunConfig& c) {
  json j;  // nlohmann::json orders keys lexicographically
  j["preset"] = c.preset;
  j["dx"] = c.dx;
  j["strip_width"] = c.strip_width;
  j["duration"] = c.duration;
  j["output_dir"] = c.output_dir;
  j["snapshot_stride"] = c.snapshot_stride;
  j["rupture_threshold"] = c.rupture_threshold;
  j["max_kernel_history"] = c.max_kernel_history;
  j["threads"] = c.threads;
  j["deterministic"] = c.deterministic;
  j["cfl_safety"] = c.cfl_safety;
  return j.dump(2) + "\n";
}

Scenario scenario_of(const RunConfig& c) {
  Scenario s = preset(c.preset, c.dx, c.strip_width);
  if (c.duration > 0.0) s.duration = c.duration;
  s.cfl_safety = c.cfl_safety;
  validate(s);
  return s;
}

}  // namespace hsbi
