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

#ifndef NMRDJ_EXPERIMENT_HPP
#define NMRDJ_EXPERIMENT_HPP

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "nmrdj/boolean_function.hpp"
#include "nmrdj/detect.hpp"
#include "nmrdj/pulses.hpp"
#include "nmrdj/spin_system.hpp"
#include "nmrdj/states.hpp"

namespace nmrdj {

// thermal | pseudopure:<bits> | pops:<bits>,<bits>
struct InitialStateSpec {
  StateKind kind = StateKind::thermal;
  std::optional<BasisLabel> first;
  std::optional<BasisLabel> second;

  static InitialStateSpec thermal() { return {}; }
  static InitialStateSpec pseudopure(BasisLabel label);
  static InitialStateSpec pops(BasisLabel a, BasisLabel b);
  static InitialStateSpec parse(const std::string &text);
  std::string notation() const;
};

DensityState build_initial_state(const SpinSystem &sys, const InitialStateSpec &spec);

enum class PulseModelKind { ideal, gaussian };

// ideal | gaussian:<duration_ms>
struct PulseModel {
  PulseModelKind kind = PulseModelKind::ideal;
  double duration_s = 0.04;
  double truncation = 0.01;
  std::size_t samples = 0;
  // Reference shaped-pulse output to the pulse start (first-order phase correction).
  bool remove_free_precession = true;

  static PulseModel ideal() { return {}; }
  static PulseModel gaussian(double duration_s);
  static PulseModel parse(const std::string &text);
  std::string notation() const;
};

// Selectable Gaussian durations; the longest is the default for shaped-pulse presets.
inline const std::vector<double> kPresetGaussianDurationsS = {0.01, 0.02, 0.04};

enum class PopsPath { subtraction, direct };

struct ExperimentPlan {
  std::string name;
  SpinSystem system = three_spin_system();
  InitialStateSpec init;
  BooleanFunction function = BooleanFunction::constant(2, false);
  PulseModel pulse;
  AcquisitionParams acquisition;
  DisplayMode display = DisplayMode::phased;
  PopsPath pops_path = PopsPath::subtraction;
  double selective_phase = 0.0;
  // Computed from the no-op thermal run of the same system when absent.
  std::optional<double> zero_order_phase;
};

// Throws unless the plan is internally consistent (arity, labels, acquisition).
void validate_plan(const ExperimentPlan &plan);

// The work-spin line whose level pair is the POPS label pair.
Transition pops_inversion_transition(const ExperimentPlan &plan);

// Propagators shared by every sequence of one plan.
struct CompiledPlan {
  Operator hamiltonian;
  Propagator readout_free_hadamard;  // hard pi/2, phase 0
  Propagator function_pulse;
  std::optional<Propagator> inversion_pulse;
  double zero_order_phase = 0.0;
};

// Thread-safe memo of pulse propagators keyed by system, pulse model, and selection.
class PropagatorCache {
 public:
  std::optional<Propagator> find(const std::string &key) const;
  void insert(const std::string &key, const Propagator &p);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, Propagator> entries_;
};

CompiledPlan compile_plan(const ExperimentPlan &plan, PropagatorCache *cache = nullptr);

// Propagator realising f on the work spin under the plan's pulse model.
Propagator function_propagator(const ExperimentPlan &plan, const Operator &hamiltonian,
                               PropagatorCache *cache = nullptr);
// Single-line pi inversion of one work-spin transition under the plan's pulse model.
Propagator single_line_inversion(const ExperimentPlan &plan, const Operator &hamiltonian,
                                 const Transition &line, PropagatorCache *cache = nullptr);

// Zero-order phase making the no-op thermal spectrum absorptive and positive.
double thermal_reference_phase(const SpinSystem &sys, const AcquisitionParams &acq);

// rho -> hard pi/2 -> function pulse -> FID.
Fid evolve_and_acquire(const CompiledPlan &compiled, const ExperimentPlan &plan,
                       const DensityState &initial);

// I_z (or a pseudopure state) - hard pi/2 - multi-frequency pi - FID.
Fid run_sequence_2(const ExperimentPlan &plan);
Fid run_sequence_2(const ExperimentPlan &plan, const CompiledPlan &compiled);

// I_z - single-frequency pi - hard pi/2 - multi-frequency pi - FID.
Fid run_sequence_3(const ExperimentPlan &plan);
Fid run_sequence_3(const ExperimentPlan &plan, const CompiledPlan &compiled);
// Variant with an explicit preparation propagator (identity reduces to sequence 2).
Fid run_sequence_3(const ExperimentPlan &plan, const CompiledPlan &compiled,
                   const Propagator &inversion);

struct PopsResult {
  Fid fid;
  Spectrum spectrum;
};

// spectrum(FID2 - FID3) for the subtraction path, or the POPS state run through sequence 2
// for the direct path.
PopsResult run_pops_experiment(const ExperimentPlan &plan);
PopsResult run_pops_experiment(const ExperimentPlan &plan, const CompiledPlan &compiled,
                               PopsPath path);

struct ExperimentResult {
  Fid fid;
  Spectrum spectrum;
  double zero_order_phase = 0.0;
};

// Dispatch on the plan's initial state.
ExperimentResult run_experiment(const ExperimentPlan &plan);
ExperimentResult run_experiment(const ExperimentPlan &plan, const CompiledPlan &compiled);

// The no-op ("doing nothing") reference of a plan: same plan with f == 0.
ExperimentPlan noop_plan(const ExperimentPlan &plan);

enum class SpectralVerdict { constant, balanced, indeterminate };
std::string to_string(SpectralVerdict v);

struct ClassifyThresholds {
  double suppressed = 0.01;  // below: peak absent
  double present = 0.10;     // at or above: peak present
};

// Ideal pulses suppress exactly; shaped pulses leak a little.
ClassifyThresholds default_thresholds(PulseModelKind kind);

enum class PeakStatus { present, absent, indeterminate };
std::string to_string(PeakStatus s);

// Per-transition status and largest assigned display amplitude (signed), relative to the
// spectrum's global maximum.
struct TransitionReading {
  Transition transition;
  PeakStatus status = PeakStatus::absent;
  double amplitude = 0.0;
  double relative = 0.0;
};

std::vector<TransitionReading> read_transitions(const Spectrum &spec, const SpinSystem &sys,
                                                const ClassifyThresholds &thresholds);

SpectralVerdict classify_from_spectrum(const Spectrum &spec, StateKind init,
                                       const Spectrum &reference, const SpinSystem &sys,
                                       const ClassifyThresholds &thresholds);

// Both constants followed by the projections f(x) = x_i onto each data bit.
std::vector<BooleanFunction> select_demo_functions(int k = 4);

struct PresetInfo {
  std::string name;
  std::string description;
};

// fig2 ... fig6 (ideal pulses) and fig7sim, fig8sim (Gaussian pulses).
const std::vector<PresetInfo> &preset_catalog();
bool is_preset(const std::string &name);

// Plans of one preset. `system` replaces the preset's default system of the same size.
std::vector<ExperimentPlan> expand_preset(const std::string &name,
                                          const std::optional<SpinSystem> &system = std::nullopt);

}  // namespace nmrdj

#endif  // NMRDJ_EXPERIMENT_HPP
