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

#include "nmrdj/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace nmrdj {

namespace {

BasisLabel parse_label(const std::string &text, const std::string &what) {
  if (text.empty())
    throw Error(what + ": empty basis label");
  try {
    return BasisLabel(text);
  } catch (const Error &e) {
    throw Error(what + ": " + e.what());
  }
}

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string system_key(const SpinSystem &sys) {
  std::ostringstream os;
  for (int i = 0; i < sys.size(); ++i)
    os << sys.labels()[i] << '=' << fmt_g(sys.shift_hz(i)) << ';';
  for (int i = 0; i < sys.size(); ++i)
    for (int j = i + 1; j < sys.size(); ++j)
      os << fmt_g(sys.coupling_hz(i, j)) << ',';
  os << "w" << sys.work_spin();
  return os.str();
}

std::string pulse_key(const PulseModel &p) {
  return p.notation() + "|" + fmt_g(p.truncation) + "|" + std::to_string(p.samples) + "|" +
         (p.remove_free_precession ? "r" : "k");
}

ShapedPulse make_shaped(const PulseModel &model, std::vector<Harmonic> harmonics, double phase) {
  for (auto &h : harmonics)
    h.phase = phase;
  ShapedPulse pulse;
  pulse.harmonics = std::move(harmonics);
  pulse.envelope = GaussianEnvelope{model.duration_s, model.truncation, model.samples};
  pulse.nominal_flip = kPi;
  return pulse;
}

Propagator shaped_or_identity(const ExperimentPlan &plan, const Operator &h,
                              const ShapedPulse &pulse) {
  if (pulse.harmonics.empty()) {
    if (plan.pulse.remove_free_precession)
      return Propagator::identity(plan.system.dim(), "empty gaussian pulse");
    return free_evolution(h, plan.pulse.duration_s);
  }
  Propagator u = shaped_pulse_propagator(plan.system, pulse, h);
  if (plan.pulse.remove_free_precession)
    return remove_free_evolution(u, h, plan.pulse.duration_s);
  return u;
}

template <typename Make>
Propagator cached(PropagatorCache *cache, const std::string &key, Make make) {
  if (cache) {
    if (auto hit = cache->find(key))
      return *hit;
  }
  Propagator p = make();
  if (cache)
    cache->insert(key, p);
  return p;
}

}  // namespace

InitialStateSpec InitialStateSpec::pseudopure(BasisLabel label) {
  InitialStateSpec s;
  s.kind = StateKind::pseudopure;
  s.first = std::move(label);
  return s;
}

InitialStateSpec InitialStateSpec::pops(BasisLabel a, BasisLabel b) {
  if (a == b)
    throw Error("POPS labels must differ: " + a.str());
  InitialStateSpec s;
  s.kind = StateKind::pops;
  s.first = std::move(a);
  s.second = std::move(b);
  return s;
}

InitialStateSpec InitialStateSpec::parse(const std::string &text) {
  if (text == "thermal")
    return thermal();
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "pseudopure" && colon != std::string::npos)
    return pseudopure(parse_label(tail, "pseudopure"));
  if (head == "pops" && colon != std::string::npos) {
    const auto comma = tail.find(',');
    if (comma == std::string::npos)
      throw Error("pops initial state needs two labels: pops:<bits>,<bits>");
    return pops(parse_label(tail.substr(0, comma), "pops"),
                parse_label(tail.substr(comma + 1), "pops"));
  }
  throw Error("unknown initial state '" + text +
              "' (expected thermal, pseudopure:<bits>, or pops:<bits>,<bits>)");
}

std::string InitialStateSpec::notation() const {
  switch (kind) {
    case StateKind::thermal:
      return "thermal";
    case StateKind::pseudopure:
      return "pseudopure:" + first->str();
    case StateKind::pops:
      return "pops:" + first->str() + "," + second->str();
    case StateKind::derived:
      break;
  }
  throw Error("derived states have no initial-state notation");
}

DensityState build_initial_state(const SpinSystem &sys, const InitialStateSpec &spec) {
  switch (spec.kind) {
    case StateKind::thermal:
      return thermal_state(sys);
    case StateKind::pseudopure:
      return pseudopure_state(sys, *spec.first);
    case StateKind::pops:
      return pops_state(sys, *spec.first, *spec.second);
    case StateKind::derived:
      break;
  }
  throw Error("a derived state cannot be used as an initial state");
}

PulseModel PulseModel::gaussian(double duration_s) {
  PulseModel m;
  m.kind = PulseModelKind::gaussian;
  m.duration_s = duration_s;
  return m;
}

PulseModel PulseModel::parse(const std::string &text) {
  if (text == "ideal")
    return ideal();
  if (text == "gaussian")
    return gaussian(kPresetGaussianDurationsS.back());
  const std::string prefix = "gaussian:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string num = text.substr(prefix.size());
    std::size_t used = 0;
    double ms = 0.0;
    try {
      ms = std::stod(num, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used == 0 || used != num.size() || !std::isfinite(ms) || ms <= 0.0)
      throw Error("gaussian pulse duration must be a positive number of milliseconds, got '" +
                  num + "'");
    return gaussian(ms * 1e-3);
  }
  throw Error("unknown pulse model '" + text + "' (expected ideal or gaussian:<duration_ms>)");
}

std::string PulseModel::notation() const {
  if (kind == PulseModelKind::ideal)
    return "ideal";
  char buf[64];
  std::snprintf(buf, sizeof buf, "gaussian:%g", duration_s * 1e3);
  return buf;
}

void validate_plan(const ExperimentPlan &plan) {
  const SpinSystem &sys = plan.system;
  if (plan.function.arity() != sys.size() - 1)
    throw Error("function arity " + std::to_string(plan.function.arity()) + " does not match " +
                std::to_string(sys.size() - 1) + " data qubits");
  for (const auto &label : {plan.init.first, plan.init.second})
    if (label && label->size() != sys.size())
      throw Error("initial-state label " + label->str() + " has " +
                  std::to_string(label->size()) + " bits, system has " +
                  std::to_string(sys.size()) + " spins");
  if (plan.init.kind == StateKind::pops && plan.pops_path == PopsPath::subtraction)
    pops_inversion_transition(plan);
  if (plan.init.kind == StateKind::derived)
    throw Error("a derived state cannot be used as an initial state");
  validate_acquisition(plan.acquisition, sys);
  if (!std::isfinite(plan.selective_phase))
    throw Error("selective pulse phase must be finite");
  if (plan.zero_order_phase && !std::isfinite(*plan.zero_order_phase))
    throw Error("zero-order phase must be finite");
  if (plan.pulse.kind == PulseModelKind::gaussian) {
    if (!(plan.pulse.duration_s > 0.0) || !std::isfinite(plan.pulse.duration_s))
      throw Error("gaussian pulse duration must be positive");
    if (!(plan.pulse.truncation > 0.0 && plan.pulse.truncation <= 1.0))
      throw Error("gaussian truncation level must lie in (0, 1]");
  }
}

Transition pops_inversion_transition(const ExperimentPlan &plan) {
  if (plan.init.kind != StateKind::pops)
    throw Error("inversion transition requested for a non-POPS plan");
  const SpinSystem &sys = plan.system;
  const BasisLabel &a = *plan.init.first;
  const BasisLabel &b = *plan.init.second;
  const int w = sys.work_spin();
  if (a.size() != sys.size() || b.size() != sys.size() || a.flipped(w) != b)
    throw Error("POPS labels " + a.str() + " and " + b.str() +
                " are not connected by a transition of work spin " + sys.labels()[w]);
  const BasisLabel &alpha = a.bit(w) ? b : a;
  for (const auto &t : transition_table(sys, w))
    if (t.alpha_level == alpha)
      return t;
  throw Error("inversion transition not in the work-spin table");
}

std::optional<Propagator> PropagatorCache::find(const std::string &key) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end())
    return std::nullopt;
  return it->second;
}

void PropagatorCache::insert(const std::string &key, const Propagator &p) {
  std::lock_guard<std::mutex> lock(mutex_);
  entries_.emplace(key, p);
}

std::size_t PropagatorCache::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return entries_.size();
}

Propagator function_propagator(const ExperimentPlan &plan, const Operator &hamiltonian,
                               PropagatorCache *cache) {
  const SpinSystem &sys = plan.system;
  const auto table = transition_table(sys, sys.work_spin());
  const auto selected = function_transitions(plan.function, table);
  if (plan.pulse.kind == PulseModelKind::ideal)
    return ideal_multitransition_pi(sys, selected, plan.selective_phase);
  const std::string key = system_key(sys) + "|f=" + plan.function.notation() + "|" +
                          pulse_key(plan.pulse) + "|" + fmt_g(plan.selective_phase);
  return cached(cache, key, [&] {
    return shaped_or_identity(
        plan, hamiltonian,
        make_shaped(plan.pulse, function_to_harmonics(plan.function, table),
                    plan.selective_phase));
  });
}

Propagator single_line_inversion(const ExperimentPlan &plan, const Operator &hamiltonian,
                                 const Transition &line, PropagatorCache *cache) {
  const SpinSystem &sys = plan.system;
  if (line.spin != sys.work_spin())
    throw Error("inversion transition not in the work-spin table");
  const Transition one[] = {line};
  if (plan.pulse.kind == PulseModelKind::ideal)
    return ideal_multitransition_pi(sys, one, plan.selective_phase);
  const std::string key = system_key(sys) + "|inv=" + line.alpha_level.str() + "|" +
                          pulse_key(plan.pulse) + "|" + fmt_g(plan.selective_phase);
  return cached(cache, key, [&] {
    return shaped_or_identity(
        plan, hamiltonian,
        make_shaped(plan.pulse, {Harmonic{line.freq_hz, 1.0, 0.0}}, plan.selective_phase));
  });
}

double thermal_reference_phase(const SpinSystem &sys, const AcquisitionParams &acq) {
  const Operator h = build_hamiltonian(sys);
  const DensityState rho = apply(hard_pulse_propagator(sys, HardPulse{}), thermal_state(sys));
  return reference_phase(acquire_fid(rho, h, acq));
}

CompiledPlan compile_plan(const ExperimentPlan &plan, PropagatorCache *cache) {
  validate_plan(plan);
  Operator h = build_hamiltonian(plan.system);
  Propagator hard = hard_pulse_propagator(plan.system, HardPulse{});
  Propagator fn = function_propagator(plan, h, cache);
  std::optional<Propagator> inv;
  if (plan.init.kind == StateKind::pops && plan.pops_path == PopsPath::subtraction)
    inv = single_line_inversion(plan, h, pops_inversion_transition(plan), cache);
  const double phase = plan.zero_order_phase
                           ? *plan.zero_order_phase
                           : thermal_reference_phase(plan.system, plan.acquisition);
  return CompiledPlan{std::move(h), std::move(hard), std::move(fn), std::move(inv), phase};
}

Fid evolve_and_acquire(const CompiledPlan &compiled, const ExperimentPlan &plan,
                       const DensityState &initial) {
  const DensityState excited = apply(compiled.readout_free_hadamard, initial);
  const DensityState final_state = apply(compiled.function_pulse, excited);
  return acquire_fid(final_state, compiled.hamiltonian, plan.acquisition);
}

Fid run_sequence_2(const ExperimentPlan &plan) { return run_sequence_2(plan, compile_plan(plan)); }

Fid run_sequence_2(const ExperimentPlan &plan, const CompiledPlan &compiled) {
  // A POPS plan's first acquisition starts from the thermal state.
  const DensityState rho0 = plan.init.kind == StateKind::pops
                                ? thermal_state(plan.system)
                                : build_initial_state(plan.system, plan.init);
  return evolve_and_acquire(compiled, plan, rho0);
}

Fid run_sequence_3(const ExperimentPlan &plan) { return run_sequence_3(plan, compile_plan(plan)); }

Fid run_sequence_3(const ExperimentPlan &plan, const CompiledPlan &compiled) {
  if (!compiled.inversion_pulse)
    throw Error("sequence 3 needs a POPS plan with a work-spin inversion transition");
  return run_sequence_3(plan, compiled, *compiled.inversion_pulse);
}

Fid run_sequence_3(const ExperimentPlan &plan, const CompiledPlan &compiled,
                   const Propagator &inversion) {
  const DensityState prepared = apply(inversion, thermal_state(plan.system));
  return evolve_and_acquire(compiled, plan, prepared);
}

PopsResult run_pops_experiment(const ExperimentPlan &plan) {
  return run_pops_experiment(plan, compile_plan(plan), plan.pops_path);
}

PopsResult run_pops_experiment(const ExperimentPlan &plan, const CompiledPlan &compiled,
                               PopsPath path) {
  if (plan.init.kind != StateKind::pops)
    throw Error("run_pops_experiment needs a POPS initial state");
  Fid fid = path == PopsPath::subtraction
                ? run_sequence_2(plan, compiled) - run_sequence_3(plan, compiled)
                : evolve_and_acquire(compiled, plan, build_initial_state(plan.system, plan.init));
  Spectrum spec = spectrum(fid, plan.display, SpectrumOptions{compiled.zero_order_phase, true});
  return PopsResult{std::move(fid), std::move(spec)};
}

ExperimentResult run_experiment(const ExperimentPlan &plan) {
  return run_experiment(plan, compile_plan(plan));
}

ExperimentResult run_experiment(const ExperimentPlan &plan, const CompiledPlan &compiled) {
  if (plan.init.kind == StateKind::pops) {
    PopsResult r = run_pops_experiment(plan, compiled, plan.pops_path);
    return ExperimentResult{std::move(r.fid), std::move(r.spectrum), compiled.zero_order_phase};
  }
  Fid fid = run_sequence_2(plan, compiled);
  Spectrum spec = spectrum(fid, plan.display, SpectrumOptions{compiled.zero_order_phase, true});
  return ExperimentResult{std::move(fid), std::move(spec), compiled.zero_order_phase};
}

ExperimentPlan noop_plan(const ExperimentPlan &plan) {
  ExperimentPlan out = plan;
  out.function = BooleanFunction::constant(plan.function.arity(), false);
  out.name = plan.name.empty() ? "noop" : plan.name + "_noop";
  return out;
}

std::string to_string(SpectralVerdict v) {
  switch (v) {
    case SpectralVerdict::constant:
      return "constant";
    case SpectralVerdict::balanced:
      return "balanced";
    case SpectralVerdict::indeterminate:
      return "indeterminate";
  }
  return "?";
}

ClassifyThresholds default_thresholds(PulseModelKind kind) {
  if (kind == PulseModelKind::gaussian)
    return ClassifyThresholds{0.05, 0.10};
  return ClassifyThresholds{0.01, 0.10};
}

std::vector<TransitionReading> read_transitions(const Spectrum &spec, const SpinSystem &sys,
                                                const ClassifyThresholds &thresholds) {
  if (!(thresholds.suppressed > 0.0 && thresholds.suppressed <= thresholds.present &&
        thresholds.present < 1.0))
    throw Error("thresholds must satisfy 0 < suppressed <= present < 1");
  const auto tables = all_transition_tables(sys);
  const auto peaks = extract_peaks(spec, thresholds.suppressed, tables);
  double gmax = 0.0;
  for (double v : spec.display_values())
    gmax = std::max(gmax, std::abs(v));

  std::vector<TransitionReading> out;
  for (const auto &table : tables) {
    for (const auto &t : table) {
      TransitionReading r{t};
      for (const auto &p : peaks) {
        if (p.assigned_spin != t.spin || p.data_pattern != t.data_pattern)
          continue;
        if (std::abs(p.amplitude) > std::abs(r.amplitude))
          r.amplitude = p.amplitude;
      }
      r.relative = gmax > 0.0 ? std::abs(r.amplitude) / gmax : 0.0;
      if (r.amplitude == 0.0)
        r.status = PeakStatus::absent;
      else if (r.relative >= thresholds.present)
        r.status = PeakStatus::present;
      else
        r.status = PeakStatus::indeterminate;
      out.push_back(std::move(r));
    }
  }
  return out;
}

SpectralVerdict classify_from_spectrum(const Spectrum &spec, StateKind init,
                                       const Spectrum &reference, const SpinSystem &sys,
                                       const ClassifyThresholds &thresholds) {
  if (spec.size() != reference.size() || spec.freqs() != reference.freqs())
    throw Error("spectrum and reference do not share a frequency axis");
  const int w = sys.work_spin();
  const auto readings = read_transitions(spec, sys, thresholds);

  if (init == StateKind::pops) {
    bool any_indeterminate = false;
    for (const auto &r : readings) {
      if (r.transition.spin == w)
        continue;
      if (r.status == PeakStatus::present)
        return SpectralVerdict::balanced;
      any_indeterminate = any_indeterminate || r.status == PeakStatus::indeterminate;
    }
    return any_indeterminate ? SpectralVerdict::indeterminate : SpectralVerdict::constant;
  }

  if (init == StateKind::pseudopure &&
      (spec.mode() != DisplayMode::phased || reference.mode() != DisplayMode::phased))
    throw Error("pseudopure spectra discriminate functions only in phased display mode");
  if (init != StateKind::thermal && init != StateKind::pseudopure)
    throw Error("classification needs a thermal, pseudopure, or POPS initial state");

  const auto ref = read_transitions(reference, sys, thresholds);
  bool any_absent = false;
  bool any_flipped = false;
  bool any_indeterminate = false;
  for (std::size_t i = 0; i < readings.size(); ++i) {
    const auto &r = readings[i];
    if (r.transition.spin == w || ref[i].status != PeakStatus::present)
      continue;
    any_absent = any_absent || r.status == PeakStatus::absent;
    any_indeterminate = any_indeterminate || r.status == PeakStatus::indeterminate;
    if (r.status == PeakStatus::present && (r.amplitude < 0.0) != (ref[i].amplitude < 0.0))
      any_flipped = true;
  }
  if (init == StateKind::thermal) {
    if (any_absent)
      return SpectralVerdict::balanced;
    return any_indeterminate ? SpectralVerdict::indeterminate : SpectralVerdict::constant;
  }
  if (any_indeterminate || any_absent)
    return SpectralVerdict::indeterminate;
  return any_flipped ? SpectralVerdict::balanced : SpectralVerdict::constant;
}

std::vector<BooleanFunction> select_demo_functions(int k) {
  if (k < 1 || k > 5)
    throw Error("demo functions need 1 to 5 data qubits, got " + std::to_string(k));
  std::vector<BooleanFunction> out{BooleanFunction::constant(k, false),
                                   BooleanFunction::constant(k, true)};
  for (int bit = 0; bit < k; ++bit)
    out.push_back(BooleanFunction::projection(k, bit));
  return out;
}

std::string to_string(PeakStatus s) {
  switch (s) {
    case PeakStatus::present:
      return "present";
    case PeakStatus::absent:
      return "absent";
    case PeakStatus::indeterminate:
      return "indeterminate";
  }
  return "?";
}

}  // namespace nmrdj

namespace nmrdj {

namespace {

struct PresetRecipe {
  PresetInfo info;
  int spins;
  InitialStateSpec init;
  DisplayMode display;
  PulseModel pulse;
  std::size_t balanced_limit;  // projections kept in the 5-spin sets
};

const std::vector<PresetRecipe> &recipes() {
  static const std::vector<PresetRecipe> r = [] {
    const PulseModel shaped = PulseModel::gaussian(kPresetGaussianDurationsS.back());
    return std::vector<PresetRecipe>{
        {{"fig2", "3-spin thermal state, all 8 functions, phased"},
         3, InitialStateSpec::thermal(), DisplayMode::phased, PulseModel::ideal(), 0},
        {{"fig3", "3-spin pseudopure |000>, all 8 functions, phased"},
         3, InitialStateSpec::pseudopure(BasisLabel("000")), DisplayMode::phased,
         PulseModel::ideal(), 0},
        {{"fig4", "3-spin POPS |000>-|100>, all 8 functions, phased"},
         3, InitialStateSpec::pops(BasisLabel("000"), BasisLabel("100")), DisplayMode::phased,
         PulseModel::ideal(), 0},
        {{"fig5", "5-spin thermal state, constants and 4 projections, absolute value"},
         5, InitialStateSpec::thermal(), DisplayMode::absolute, PulseModel::ideal(), 4},
        {{"fig6", "5-spin POPS |00000>-|00010>, constants and 4 projections, absolute value"},
         5, InitialStateSpec::pops(BasisLabel("00000"), BasisLabel("00010")),
         DisplayMode::absolute, PulseModel::ideal(), 4},
        {{"fig7sim", "5-spin thermal state, Gaussian pulses, constants and 2 projections"},
         5, InitialStateSpec::thermal(), DisplayMode::absolute, shaped, 2},
        {{"fig8sim", "5-spin POPS by subtraction, Gaussian pulses, constants and 2 projections"},
         5, InitialStateSpec::pops(BasisLabel("00000"), BasisLabel("00010")),
         DisplayMode::absolute, shaped, 2},
    };
  }();
  return r;
}

}  // namespace

const std::vector<PresetInfo> &preset_catalog() {
  static const std::vector<PresetInfo> c = [] {
    std::vector<PresetInfo> out;
    for (const auto &r : recipes())
      out.push_back(r.info);
    return out;
  }();
  return c;
}

bool is_preset(const std::string &name) {
  for (const auto &r : recipes())
    if (r.info.name == name)
      return true;
  return false;
}

std::vector<ExperimentPlan> expand_preset(const std::string &name,
                                          const std::optional<SpinSystem> &system) {
  const PresetRecipe *recipe = nullptr;
  for (const auto &r : recipes())
    if (r.info.name == name)
      recipe = &r;
  if (!recipe)
    throw Error("unknown preset '" + name + "'");
  SpinSystem sys = recipe->spins == 3 ? three_spin_system() : five_spin_system();
  if (system) {
    if (system->size() != recipe->spins)
      throw Error("preset " + name + " needs a " + std::to_string(recipe->spins) +
                  "-spin system, got " + std::to_string(system->size()));
    sys = *system;
  }
  const int k = sys.size() - 1;

  std::vector<BooleanFunction> functions;
  if (recipe->balanced_limit == 0) {
    functions = {BooleanFunction::constant(k, false), BooleanFunction::constant(k, true)};
    for (const auto &f : all_functions(k))
      if (classify(f) == Classification::balanced)
        functions.push_back(f);
  } else {
    functions = select_demo_functions(k);
    functions.erase(functions.begin() + static_cast<std::ptrdiff_t>(2 + recipe->balanced_limit),
                    functions.end());
  }

  ExperimentPlan base;
  base.system = sys;
  base.init = recipe->init;
  base.pulse = recipe->pulse;
  base.acquisition = default_acquisition(sys);
  base.display = recipe->display;
  base.zero_order_phase = thermal_reference_phase(sys, base.acquisition);

  std::vector<ExperimentPlan> plans;
  for (std::size_t i = 0; i < functions.size(); ++i) {
    ExperimentPlan p = base;
    p.function = functions[i];
    char idx[24];
    std::snprintf(idx, sizeof idx, "%02zu", i + 1);
    p.name = name + "_" + idx + "_" + functions[i].notation();
    validate_plan(p);
    plans.push_back(std::move(p));
  }
  return plans;
}

}  // namespace nmrdj
