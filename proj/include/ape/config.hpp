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

#ifndef APE_CONFIG_HPP_
#define APE_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ape/exit_engine.hpp"
#include "ape/model.hpp"
#include "ape/train.hpp"

namespace ape {

// Flat key=value run configuration. Lines are "key = value"; '#' starts a
// comment. Every key has a default; unknown keys are rejected. Backbone keys
// left empty take the preset's value.
class RunConfig {
 public:
  RunConfig();

  static const std::vector<std::pair<std::string, std::string>>& defaults();

  void set(const std::string& key, const std::string& value);
  // "key=value" as given on a command line.
  void set_assignment(const std::string& assignment);
  void merge_text(const std::string& text, const std::string& origin);
  void merge_file(const std::filesystem::path& path);

  bool has_value(const std::string& key) const;
  const std::string& get(const std::string& key) const;
  int get_int(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  double get_double(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::filesystem::path get_path(const std::string& key) const;  // ConfigError if empty

  BackboneConfig backbone() const;
  TrainConfig train() const;
  ExitPolicy policy() const;
  InferenceOptions inference() const;

  // Every key with its effective value, sorted; backbone keys resolved.
  std::string resolved_text() const;
  void write_resolved(const std::filesystem::path& path) const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace ape

#endif  // APE_CONFIG_HPP_
