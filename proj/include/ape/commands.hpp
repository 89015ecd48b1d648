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

#ifndef APE_COMMANDS_HPP_
#define APE_COMMANDS_HPP_

#include <ostream>
#include <string>
#include <vector>

#include "ape/config.hpp"

namespace ape {

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> kNames = {"train", "eval", "sr", "sweep", "flops", "exitmap"};
  return kNames;
}

// Each command writes its artifacts plus "<command>_config.txt" (the
// resolved configuration) and reports progress to `out`.
void cmd_train(const RunConfig& cfg, std::ostream& out);
void cmd_eval(const RunConfig& cfg, std::ostream& out);
void cmd_sr(const RunConfig& cfg, std::ostream& out);
void cmd_sweep(const RunConfig& cfg, std::ostream& out);
void cmd_flops(const RunConfig& cfg, std::ostream& out);
void cmd_exitmap(const RunConfig& cfg, std::ostream& out);

void run_command(const std::string& command, const RunConfig& cfg, std::ostream& out);

}  // namespace ape

#endif  // APE_COMMANDS_HPP_
