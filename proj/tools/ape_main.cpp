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

// ape: command-line front end.
//
//   ape [--threads N] <train|eval|sr|sweep|flops|exitmap> [--config FILE] [key=value ...]
//
// Exit codes: 0 ok, 1 usage, 2 shape, 3 config, 4 io, 5 format, 6 state.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ape/commands.hpp"
#include "ape/config.hpp"
#include "ape/error.hpp"
#include "ape/kernels.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Adaptive patch exiting for image super-resolution"};
  app.require_subcommand(1);
  std::string config_file;
  int threads = 0;
  std::vector<std::string> assignments;
  app.add_option("--threads", threads, "worker threads (0 = OpenMP default, 1 = reproducibility mode)")
      ->check(CLI::NonNegativeNumber);
  const std::map<std::string, std::string> about = {
      {"train", "train a model (stage=base|multiexit|joint)"},
      {"eval", "PSNR/SSIM and exit statistics over a corpus"},
      {"sr", "super-resolve one image"},
      {"sweep", "quality/cost trade-off over a threshold grid"},
      {"flops", "per-exit MAC table"},
      {"exitmap", "per-patch exit indices for one image"},
  };
  for (const auto& name : ape::command_names()) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--config", config_file, "key=value configuration file");
    sub->add_option("settings", assignments, "key=value overrides");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (threads > 0) ape::kernels::set_num_threads(threads);
    ape::RunConfig cfg;
    if (!config_file.empty()) cfg.merge_file(config_file);
    for (const auto& a : assignments) cfg.set_assignment(a);
    ape::run_command(command, cfg, std::cout);
  } catch (const ape::Error& e) {
    std::cerr << "error [" << e.category() << "]: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error [io]: " << e.what() << "\n";
    return static_cast<int>(ape::ErrorKind::kIo);
  }
  return 0;
}
