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

// nmrdj: simulate NMR Deutsch-Jozsa experiments on 3- and 5-spin systems.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "nmrdj/compare.hpp"
#include "nmrdj/config.hpp"
#include "nmrdj/runner.hpp"

namespace {

using json = nlohmann::json;
using namespace nmrdj;

struct RunFlags {
  std::string config;
  std::string function;
  std::string preset;
  std::string init;
  std::string pulse;
  std::string mode;
  std::string system;
  std::string pops_path;
  std::string out = "nmrdj_out";
  std::string schedule;
  std::size_t workers = 1;
  bool plots = false;
};

void add_run_flags(CLI::App *cmd, RunFlags &f, bool with_experiment) {
  if (with_experiment) {
    cmd->add_option("--config", f.config, "JSON run configuration");
    cmd->add_option("--function", f.function, "truth table in parenthesis notation, e.g. 0110");
    cmd->add_option("--preset", f.preset, "fig2 | fig3 | fig4 | fig5 | fig6 | fig7sim | fig8sim");
    cmd->add_option("--init", f.init, "thermal | pseudopure:<bits> | pops:<bits>,<bits>");
    cmd->add_option("--pulse", f.pulse, "ideal | gaussian:<duration_ms>");
    cmd->add_option("--mode", f.mode, "phased | absolute");
    cmd->add_option("--pops-path", f.pops_path, "subtraction | direct");
    cmd->add_option("--schedule", f.schedule,
                    "also write the shaped function pulse schedule to this file");
  }
  cmd->add_option("--system", f.system, "three_spin | five_spin | path to a system JSON file");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--workers", f.workers, "concurrent plans")->check(CLI::PositiveNumber);
  cmd->add_flag("--plots", f.plots, "write an SVG plot per spectrum");
}

RunConfig config_from_flags(const RunFlags &f, CLI::App *cmd) {
  if (!f.config.empty()) {
    for (const char *flag : {"--function", "--preset", "--init", "--pulse", "--mode",
                             "--pops-path", "--system"})
      if (cmd->count(flag) > 0)
        throw ConfigError(flag, "cannot be combined with --config");
    RunConfig cfg = load_config(f.config);
    if (cmd->count("--out") > 0) {
      cfg.output_dir = f.out;
      cfg.explicit_fields.insert("output");
    }
    if (cmd->count("--workers") > 0) {
      cfg.workers = f.workers;
      cfg.explicit_fields.insert("workers");
    }
    cfg.plots = cfg.plots || f.plots;
    note_defaults(cfg);
    return cfg;
  }
  json doc;
  doc["schema_version"] = kSchemaVersion;
  if (!f.function.empty())
    doc["function"] = f.function;
  if (!f.preset.empty())
    doc["preset"] = f.preset;
  if (!f.system.empty()) {
    if (f.system == "three_spin" || f.system == "five_spin")
      doc["system"] = f.system;
    else
      doc["system_file"] = f.system;
  } else if (!f.function.empty() && f.function.size() == 16) {
    doc["system"] = "five_spin";
  }
  if (!f.init.empty())
    doc["init"] = f.init;
  if (!f.pulse.empty())
    doc["pulse"] = f.pulse;
  if (!f.mode.empty())
    doc["display"] = f.mode;
  if (!f.pops_path.empty())
    doc["pops_path"] = f.pops_path;
  doc["output"] = {{"dir", f.out}, {"plots", f.plots}};
  if (cmd->count("--workers") > 0)
    doc["workers"] = f.workers;
  return parse_config(doc.dump());
}

void write_schedule_file(const RunConfig &cfg, const std::string &path) {
  const ExperimentPlan plan = cfg.plans().front();
  if (plan.pulse.kind != PulseModelKind::gaussian)
    throw ConfigError("--schedule", "needs a gaussian pulse model");
  ShapedPulse pulse;
  pulse.harmonics = function_to_harmonics(
      plan.function, transition_table(plan.system, plan.system.work_spin()));
  for (auto &h : pulse.harmonics)
    h.phase = plan.selective_phase;
  pulse.envelope = GaussianEnvelope{plan.pulse.duration_s, plan.pulse.truncation,
                                    plan.pulse.samples};
  std::ofstream out(path);
  if (!out)
    throw Error("cannot write " + path);
  write_schedule(out, plan.system, pulse);
}

int run_command(const RunFlags &f, CLI::App *cmd) {
  RunConfig cfg;
  try {
    cfg = config_from_flags(f, cmd);
  } catch (const Error &e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  const int status = run_config(cfg, std::cerr);
  if (status != kExitOk)
    return status;
  if (!f.schedule.empty()) {
    try {
      write_schedule_file(cfg, f.schedule);
    } catch (const ConfigError &e) {
      std::cerr << "usage error: " << e.what() << '\n';
      return kExitUsage;
    } catch (const std::exception &e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitFailure;
    }
  }
  std::cout << "wrote " << cfg.plans().size() << " spectra and manifest.json to "
            << cfg.output_dir.string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"nmrdj: density-matrix simulation of NMR Deutsch-Jozsa experiments"};
  app.require_subcommand(1);

  RunFlags sim_flags;
  CLI::App *sim = app.add_subcommand("simulate", "run one function or a preset");
  add_run_flags(sim, sim_flags, true);

  RunFlags preset_flags;
  CLI::App *preset = app.add_subcommand("preset", "run a named preset");
  preset->add_option("name", preset_flags.preset, "preset name")->required();
  add_run_flags(preset, preset_flags, false);

  std::string cmp_a, cmp_b;
  CompareOptions cmp_opts;
  CLI::App *cmp = app.add_subcommand("compare", "compare two spectrum tables or run directories");
  cmp->add_option("first", cmp_a, "spectrum CSV or run directory")->required();
  cmp->add_option("second", cmp_b, "spectrum CSV or run directory")->required();
  cmp->add_option("--tol", cmp_opts.tolerance, "relative tolerance")->check(CLI::NonNegativeNumber);
  cmp->add_flag("--normalize", cmp_opts.normalize, "fit one complex scale before comparing");
  cmp->add_option("--peak-threshold", cmp_opts.peak_threshold, "relative peak height")
      ->check(CLI::Range(1e-6, 0.999999));

  int arity = 2;
  std::string only;
  CLI::App *list = app.add_subcommand("list-functions", "enumerate Boolean functions");
  list->add_option("--arity", arity, "data qubits (1 to 4)")->check(CLI::Range(1, 4));
  list->add_option("--only", only, "constant | balanced | neither");

  CLI::App *counts = app.add_subcommand("counts", "function and POPS counts");
  int max_k = 4;
  int spins = 5;
  counts->add_option("--max-k", max_k, "largest data-qubit count (1 to 5)")
      ->check(CLI::Range(1, 5));
  counts->add_option("--spins", spins, "spins for the POPS count")->check(CLI::Range(1, 6));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sim) {
      if (sim_flags.config.empty() && sim_flags.function.empty() == sim_flags.preset.empty()) {
        std::cerr << "usage error: give exactly one of --function or --preset (or --config)\n";
        return kExitUsage;
      }
      return run_command(sim_flags, sim);
    }
    if (*preset)
      return run_command(preset_flags, preset);
    if (*cmp) {
      const CompareReport r = compare_paths(cmp_a, cmp_b, cmp_opts);
      print_report(std::cout, r, cmp_opts);
      return r.pass ? kExitOk : kExitFailure;
    }
    if (*list) {
      if (!only.empty() && only != "constant" && only != "balanced" && only != "neither") {
        std::cerr << "usage error: --only expects constant, balanced, or neither\n";
        return kExitUsage;
      }
      for (const auto &f : all_functions(arity)) {
        const std::string c = to_string(classify(f));
        if (only.empty() || only == c)
          std::cout << '(' << f.notation() << ") " << c << '\n';
      }
      return kExitOk;
    }
    if (*counts) {
      for (int k = 1; k <= max_k; ++k) {
        const auto [c, b] = count_functions(k);
        std::cout << "k=" << k << " constant=" << c << " balanced=" << b << '\n';
      }
      const PopsCounts p = count_accessible_pops(spins);
      std::cout << "n=" << spins << " pseudopure_states=" << p.pseudopure_states
                << " pops_pairs=" << p.pairs << " accessible_pops=" << p.accessible << '\n';
      return kExitOk;
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
