/* Copyright 2026 The nmrdj Authors. All Rights Reserved.
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

#ifndef NMRDJ_CONFIG_HPP
#define NMRDJ_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nmrdj/experiment.hpp"

namespace nmrdj {

constexpr int kSchemaVersion = 1;

// Schema or invariant violation; `path` locates the offending field, e.g. "system.shifts_hz[2]".
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string &message)
      : Error(path + ": " + message), path_(std::move(path)) {}
  const std::string &path() const { return path_; }

 private:
  std::string path_;
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  SpinSystem system = three_spin_system();
  bool system_given = false;
  std::optional<std::string> preset;
  std::optional<BooleanFunction> function;
  InitialStateSpec init;
  PulseModel pulse;
  std::optional<AcquisitionParams> acquisition;
  DisplayMode display = DisplayMode::phased;
  PopsPath pops_path = PopsPath::subtraction;
  double selective_phase = 0.0;
  std::optional<double> zero_order_phase;
  std::filesystem::path output_dir = "nmrdj_out";
  bool plots = false;
  std::size_t workers = 1;
  // Outputs are a pure function of the config; there is no switch to turn this off.
  static constexpr bool deterministic = true;

  // Top-level keys set explicitly (by the document or command-line flags).
  std::set<std::string> explicit_fields;
  // Defaults applied, echoed into the run manifest.
  std::vector<std::string> defaults_used;

  // Every plan of the run, validated.
  std::vector<ExperimentPlan> plans() const;
};

// Parse a JSON document. Relative file references resolve against `base_dir`.
RunConfig parse_config(std::string_view document, const std::filesystem::path &base_dir = ".");
RunConfig load_config(const std::filesystem::path &file);

// Parse a stand-alone system document (the value of "system" or a system_file).
SpinSystem parse_system(std::string_view document);

// Record the defaults a config relies on (idempotent).
void note_defaults(RunConfig &cfg);

}  // namespace nmrdj

#endif  // NMRDJ_CONFIG_HPP
