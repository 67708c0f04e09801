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

#ifndef NMRDJ_RUNNER_HPP
#define NMRDJ_RUNNER_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "nmrdj/config.hpp"

namespace nmrdj {

struct PlanOutcome {
  ExperimentPlan plan;
  ExperimentResult result;
  Spectrum reference;  // no-op run of the same plan
  std::vector<Peak> peaks;
  std::vector<TransitionReading> readings;
  std::string verdict;  // constant | balanced | indeterminate | unsupported (...)
};

// Run one plan plus its no-op reference and classify it.
PlanOutcome run_plan(const ExperimentPlan &plan, PropagatorCache *cache = nullptr);

// Run `count` jobs on up to `workers` threads; job i's result lands in slot i.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)> &job);

enum ExitStatus : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

// Writes <name>.csv per plan, manifest.json, and <name>.svg when plots are on. Returns
// kExitOk, or kExitFailure after removing every file this run created.
int run_config(const RunConfig &cfg, std::ostream &log);

// Manifest document text (deterministic key order and number formatting).
std::string manifest_json(const RunConfig &cfg, const std::vector<PlanOutcome> &outcomes);

}  // namespace nmrdj

#endif  // NMRDJ_RUNNER_HPP
