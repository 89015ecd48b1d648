/* Copyright 2026 The APE Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "ape/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ape/error.hpp"

namespace ape {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_number(const std::string& key, const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || !std::isfinite(v)) {
    throw ConfigError(key + ": expected a number, got '" + s + "'");
  }
  return v;
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& RunConfig::defaults() {
  static const std::vector<std::pair<std::string, std::string>> kDefaults = {
      // paths
      {"corpus", ""},
      {"val_corpus", ""},
      {"checkpoint", ""},
      {"init_checkpoint", ""},
      {"input", ""},
      {"hr", ""},
      {"output", ""},
      {"output_dir", "."},
      // model
      {"preset", "tiny"},
      {"scale", "2"},
      {"channels", ""},
      {"num_blocks", ""},
      {"exit_interval", ""},
      {"residual_scaling", ""},
      {"seed", "0"},
      // training
      {"stage", "multiexit"},
      {"epochs", "15"},
      {"steps_per_epoch", "100"},
      {"lr", "0.001"},
      {"lr_decay_epoch", "10"},
      {"batch_size", "16"},
      {"hr_patch", "32"},
      {"lambda", "1"},
      {"signal", "ic"},
      {"ap_scale", "50"},
      {"reduction", "mean"},
      {"regressor_only", "false"},
      {"log_every", "100"},
      // inference
      {"threshold", "0"},
      {"thresholds", "-1,-0.5,-0.2,-0.1,0,0.1,0.2,0.5,1"},
      {"signal_source", "regressor"},
      {"exit_output", "previous"},
      {"patch_size", "48"},
      {"stride", "46"},
      {"parallel_size", "16"},
      {"merge", "uniform"},
      {"exit_map", "false"},
      {"cell_px", "16"},
  };
  return kDefaults;
}

RunConfig::RunConfig() {
  for (const auto& [k, v] : defaults()) values_[k] = v;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second = value;
}

void RunConfig::set_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void RunConfig::merge_text(const std::string& text, const std::string& origin) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      set_assignment(line);
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void RunConfig::merge_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read config " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  merge_text(ss.str(), path.string());
}

bool RunConfig::has_value(const std::string& key) const { return !get(key).empty(); }

const std::string& RunConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  return it->second;
}

int RunConfig::get_int(const std::string& key) const {
  const std::string& s = get(key);
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError(key + ": expected an integer, got '" + s + "'");
  return v;
}

std::uint64_t RunConfig::get_u64(const std::string& key) const {
  const std::string& s = get(key);
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + s + "'");
  }
  return v;
}

double RunConfig::get_double(const std::string& key) const { return parse_number(key, get(key)); }

bool RunConfig::get_bool(const std::string& key) const {
  const std::string& s = get(key);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + s + "'");
}

std::vector<double> RunConfig::get_doubles(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(get(key));
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(key, trim(item)));
  if (out.empty()) throw ConfigError(key + ": expected a comma-separated list of numbers");
  return out;
}

std::filesystem::path RunConfig::get_path(const std::string& key) const {
  if (!has_value(key)) throw ConfigError("config key '" + key + "' is required");
  return get(key);
}

BackboneConfig RunConfig::backbone() const {
  const Preset preset = parse_preset(get("preset"));
  const int scale = get_int("scale");
  BackboneConfig c = preset == Preset::kEdsr ? BackboneConfig::edsr(scale) : BackboneConfig::tiny(scale);
  if (has_value("channels")) c.channels = get_int("channels");
  if (has_value("num_blocks")) c.num_blocks = get_int("num_blocks");
  if (has_value("exit_interval")) c.exit_interval = get_int("exit_interval");
  if (has_value("residual_scaling")) c.residual_scaling = get_double("residual_scaling");
  c.validate();
  return c;
}

TrainConfig RunConfig::train() const {
  TrainConfig t;
  t.stage = parse_stage(get("stage"));
  t.epochs = get_int("epochs");
  t.steps_per_epoch = get_int("steps_per_epoch");
  t.lr = get_double("lr");
  t.lr_decay_epoch = get_int("lr_decay_epoch");
  t.batch_size = get_int("batch_size");
  t.hr_patch = get_int("hr_patch");
  t.scale = get_int("scale");
  t.lambda = get_double("lambda");
  t.seed = get_u64("seed");
  t.signal = parse_exit_signal(get("signal"));
  t.ap_scale_db = get_double("ap_scale");
  const std::string& red = get("reduction");
  if (red == "mean") {
    t.reduction = Reduction::kMean;
  } else if (red == "sum") {
    t.reduction = Reduction::kSum;
  } else {
    throw ConfigError("reduction: expected mean or sum, got '" + red + "'");
  }
  t.regressor_only = get_bool("regressor_only");
  t.validate();
  return t;
}

ExitPolicy RunConfig::policy() const {
  ExitPolicy p;
  p.threshold = get_double("threshold");
  p.source = parse_signal_source(get("signal_source"));
  p.output = parse_exit_output(get("exit_output"));
  p.validate();
  return p;
}

InferenceOptions RunConfig::inference() const {
  InferenceOptions o;
  const int p = get_int("patch_size"), s = get_int("stride"), b = get_int("parallel_size");
  if (p <= 0 || s <= 0 || b <= 0) throw ConfigError("patch_size, stride and parallel_size must be positive");
  o.patch_size = static_cast<std::size_t>(p);
  o.stride = static_cast<std::size_t>(s);
  o.parallel_size = static_cast<std::size_t>(b);
  const std::string& m = get("merge");
  if (m == "uniform") {
    o.merge = MergeWeighting::kUniform;
  } else if (m == "cosine") {
    o.merge = MergeWeighting::kRaisedCosine;
  } else {
    throw ConfigError("merge: expected uniform or cosine, got '" + m + "'");
  }
  o.validate();
  return o;
}

std::string RunConfig::resolved_text() const {
  std::map<std::string, std::string> v = values_;
  const BackboneConfig c = backbone();
  v["channels"] = std::to_string(c.channels);
  v["num_blocks"] = std::to_string(c.num_blocks);
  v["exit_interval"] = std::to_string(c.exit_interval);
  v["residual_scaling"] = fmt_double(c.residual_scaling);
  std::string out;
  for (const auto& [k, val] : v) out += k + "=" + val + "\n";
  return out;
}

void RunConfig::write_resolved(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot write " + path.string());
  os << resolved_text();
}

}  // namespace ape
