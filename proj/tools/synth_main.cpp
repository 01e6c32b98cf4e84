// Copyright 2026 The Panoptic-Nav Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Writes a synthetic walking sequence in the on-disk sequence format.

#include <fmt/format.h>

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "pnav/error.hpp"
#include "pnav/schema.hpp"
#include "pnav/sequence.hpp"
#include "pnav/synth.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic street-walk sequence", "pnav_synth"};
  app.option_defaults()->always_capture_default();
  pnav::WalkConfig cfg;
  std::string output;
  std::string schema_path;
  app.add_option("-o,--output", output, "Output sequence directory")->required();
  app.add_option("--width", cfg.width, "Frame width")->check(CLI::Range(1, 1920));
  app.add_option("--height", cfg.height, "Frame height")->check(CLI::Range(1, 1920));
  app.add_option("--frames", cfg.frames, "Number of frames");
  app.add_option("--cadence-us", cfg.cadence_us, "Time between frames");
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_flag("--rgb", cfg.with_rgb, "Include an RGB plane");
  app.add_option("--schema", schema_path, "Label schema JSON");
  CLI11_PARSE(app, argc, argv);
  try {
    const pnav::LabelSchema schema = schema_path.empty() ? pnav::default_schema() : pnav::load_schema_file(schema_path);
    pnav::write_sequence(pnav::synthesize_walk(cfg, schema), output);
    std::cout << fmt::format("wrote {} frames to {}\n", cfg.frames, output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
