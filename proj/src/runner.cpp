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

#include "nmrdj/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "nmrdj/svg_plot.hpp"

namespace nmrdj {

namespace {

using json = nlohmann::ordered_json;

double round6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return std::strtod(buf, nullptr);
}

void write_atomic(const std::filesystem::path &target, const std::string &content) {
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out)
        throw Error("cannot write " + tmp.string());
      out << content;
      out.flush();
      if (!out)
        throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

json system_json(const SpinSystem &sys) {
  json s;
  s["labels"] = sys.labels();
  std::vector<double> shifts;
  for (double v : sys.shifts_hz())
    shifts.push_back(v);
  s["shifts_hz"] = shifts;
  json c = json::object();
  for (int i = 0; i < sys.size(); ++i)
    for (int j = i + 1; j < sys.size(); ++j)
      c[sys.labels()[i] + "-" + sys.labels()[j]] = sys.coupling_hz(i, j);
  s["couplings_hz"] = c;
  s["work_spin"] = sys.labels()[sys.work_spin()];
  return s;
}

}  // namespace

PlanOutcome run_plan(const ExperimentPlan &plan, PropagatorCache *cache) {
  const CompiledPlan compiled = compile_plan(plan, cache);
  ExperimentResult result = run_experiment(plan, compiled);
  const ExperimentPlan ref_plan = noop_plan(plan);
  Spectrum reference = run_experiment(ref_plan, compile_plan(ref_plan, cache)).spectrum;

  const ClassifyThresholds th = default_thresholds(plan.pulse.kind);
  PlanOutcome out{plan, std::move(result), std::move(reference), {}, {}, ""};
  out.peaks = extract_peaks(out.result.spectrum, th.suppressed, all_transition_tables(plan.system));
  out.readings = read_transitions(out.result.spectrum, plan.system, th);
  if (plan.init.kind == StateKind::pseudopure && plan.display != DisplayMode::phased)
    out.verdict = "unsupported (pseudopure spectra need phased display)";
  else
    out.verdict = to_string(classify_from_spectrum(out.result.spectrum, plan.init.kind,
                                                   out.reference, plan.system, th));
  return out;
}

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)> &job) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i)
      job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure)
            failure = std::current_exception();
        }
      }
    });
  for (auto &t : pool)
    t.join();
  if (failure)
    std::rethrow_exception(failure);
}

std::string manifest_json(const RunConfig &cfg, const std::vector<PlanOutcome> &outcomes) {
  json m;
  m["schema_version"] = kSchemaVersion;
  m["tool"] = "nmrdj";
  if (cfg.preset)
    m["preset"] = *cfg.preset;
  else
    m["function"] = cfg.function->notation();
  m["deterministic"] = RunConfig::deterministic;
  m["system"] = system_json(outcomes.empty() ? cfg.system : outcomes.front().plan.system);
  m["defaults_used"] = cfg.defaults_used;

  json plans = json::array();
  for (const auto &o : outcomes) {
    const ExperimentPlan &p = o.plan;
    json j;
    j["name"] = p.name;
    j["function"] = p.function.notation();
    j["function_class"] = to_string(classify(p.function));
    j["init"] = p.init.notation();
    if (p.init.kind == StateKind::pops)
      j["pops_path"] = p.pops_path == PopsPath::subtraction ? "subtraction" : "direct";
    j["pulse"] = p.pulse.notation();
    j["display"] = to_string(p.display);
    j["acquisition"] = {{"points", p.acquisition.points},
                        {"spectral_width_hz", round6(p.acquisition.spectral_width_hz())},
                        {"t2_ms", round6(p.acquisition.t2_s * 1e3)}};
    j["zero_order_phase_rad"] = round6(o.result.zero_order_phase);
    j["spectrum_file"] = p.name + ".csv";
    if (cfg.plots)
      j["plot_file"] = p.name + ".svg";
    j["verdict"] = o.verdict;

    const int w = p.system.work_spin();
    json spins = json::object();
    bool any_data_peak = false;
    for (int s = 0; s < p.system.size(); ++s) {
      std::size_t present = 0, absent = 0, unclear = 0;
      for (const auto &r : o.readings) {
        if (r.transition.spin != s)
          continue;
        present += r.status == PeakStatus::present;
        absent += r.status == PeakStatus::absent;
        unclear += r.status == PeakStatus::indeterminate;
      }
      if (s != w)
        any_data_peak = any_data_peak || present > 0 || unclear > 0;
      spins[p.system.labels()[s]] = {{"role", s == w ? "work" : "data"},
                                     {"present", present},
                                     {"absent", absent},
                                     {"indeterminate", unclear}};
    }
    j["lines"] = spins;
    j["data_spin_peaks"] = any_data_peak ? "present" : "none";

    json peaks = json::array();
    for (const auto &pk : o.peaks) {
      json q;
      q["freq_hz"] = round6(pk.freq_hz);
      q["amplitude"] = round6(pk.amplitude);
      q["spin"] = pk.assigned_spin ? p.system.labels()[*pk.assigned_spin] : std::string("?");
      q["data_pattern"] = pk.data_pattern ? *pk.data_pattern : std::string();
      peaks.push_back(q);
    }
    j["peaks"] = peaks;
    plans.push_back(j);
  }
  m["plans"] = plans;
  return m.dump(2) + "\n";
}

int run_config(const RunConfig &cfg, std::ostream &log) {
  // Files this run wrote; earlier contents of the directory are left alone.
  std::vector<std::filesystem::path> created;
  std::mutex created_mutex;
  bool made_dir = false;
  auto write = [&](const std::filesystem::path &path, const std::string &text) {
    write_atomic(path, text);
    std::lock_guard<std::mutex> lock(created_mutex);
    created.push_back(path);
  };
  auto cleanup = [&] {
    std::error_code ec;
    for (const auto &f : created)
      std::filesystem::remove(f, ec);
    if (made_dir)
      std::filesystem::remove_all(cfg.output_dir, ec);
  };

  try {
    const std::vector<ExperimentPlan> plans = cfg.plans();
    if (!std::filesystem::exists(cfg.output_dir))
      made_dir = std::filesystem::create_directories(cfg.output_dir);

    PropagatorCache cache;
    std::vector<std::optional<PlanOutcome>> slots(plans.size());
    std::mutex log_mutex;
    parallel_for(plans.size(), cfg.workers, [&](std::size_t i) {
      PlanOutcome o = run_plan(plans[i], &cache);
      std::ostringstream csv;
      write_spectrum_csv(csv, o.result.spectrum);
      write(cfg.output_dir / (plans[i].name + ".csv"), csv.str());
      if (cfg.plots) {
        std::ostringstream svg;
        write_spectrum_svg(svg, o.result.spectrum, plans[i].name);
        write(cfg.output_dir / (plans[i].name + ".svg"), svg.str());
      }
      {
        std::lock_guard<std::mutex> lock(log_mutex);
        log << plans[i].name << ": " << o.verdict << '\n';
      }
      slots[i] = std::move(o);
    });
    std::vector<PlanOutcome> outcomes;
    for (auto &s : slots)
      outcomes.push_back(std::move(*s));
    write(cfg.output_dir / "manifest.json", manifest_json(cfg, outcomes));
    return kExitOk;
  } catch (const std::exception &e) {
    log << "error: " << e.what() << '\n';
    cleanup();
    return kExitFailure;
  }
}

}  // namespace nmrdj
