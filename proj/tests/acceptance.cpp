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

// Acceptance suite: one PASS/FAIL line per criterion. Every tolerance is a named constant
// below; none is adjusted per run.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nmrdj/compare.hpp"
#include "nmrdj/experiment.hpp"
#include "oracles.hpp"

using namespace nmrdj;

namespace {

// Pinned tolerances.
constexpr double kNoOpRelTol = 1e-9;          // constant vs no-op spectrum
constexpr double kIdealSuppressed = 0.01;     // ideal pulses: peak gone below 1% of max
constexpr double kShapedSuppressed = 0.05;    // shaped pulses: below 5% of max
constexpr double kPresent = 0.10;             // peak observed at or above 10% of max
constexpr double kMultisetRelTol = 1e-6;      // pseudopure magnitude multisets
constexpr double kPopsIdealRelTol = 1e-9;     // subtraction vs direct, ideal pulses
constexpr double kPopsShapedRelTol = 1e-3;    // subtraction vs direct, Gaussian pulses
constexpr double kMinShapedFidelity = 0.99;   // single-harmonic Gaussian pi vs ideal
constexpr double kLineTolHz = 1e-9;           // transition_table vs eigen-differences
constexpr double kLinearityTol = 1e-12;       // acquire_fid linearity, relative to max |s|
constexpr double kUnitarityTol = 1e-9;        // max |U+U - 1|

// Runtime budgets in seconds.
const std::map<int, double> kBudgetS = {{1, 5},  {2, 5},  {3, 5},   {4, 30}, {5, 30},
                                        {6, 1},  {7, 60}, {8, 120}, {9, 10}};

struct Outcome {
  bool pass = true;
  std::vector<std::string> facts;     // printed on the criterion line
  std::vector<std::string> failures;  // printed below a failing line

  void require(bool ok, const std::string &what) {
    if (!ok) {
      pass = false;
      failures.push_back(what);
    }
  }
  void fact(const std::string &s) { facts.push_back(s); }
};

std::string fmt(const char *f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double max_abs(const std::vector<Complex> &v) {
  double m = 0.0;
  for (const auto &x : v)
    m = std::max(m, std::abs(x));
  return m;
}

// Largest |display| of any local maximum assigned to each line, relative to the spectrum's
// global max. Keyed by (spin, data pattern).
using LineHeights = std::map<std::pair<int, std::string>, double>;

LineHeights line_heights(const Spectrum &spec, const SpinSystem &sys, double floor) {
  const auto tables = all_transition_tables(sys);
  double gmax = 0.0;
  for (double v : spec.display_values())
    gmax = std::max(gmax, std::abs(v));
  LineHeights out;
  for (const auto &table : tables)
    for (const auto &t : table)
      out[{t.spin, t.data_pattern}] = 0.0;
  for (const Peak &p : extract_peaks(spec, floor, tables))
    if (p.assigned()) {
      double &h = out[{*p.assigned_spin, *p.data_pattern}];
      h = std::max(h, std::abs(p.amplitude) / gmax);
    }
  return out;
}

// Every line of `spin` below `level`.
bool spin_suppressed(const LineHeights &h, int spin, double level) {
  for (const auto &[key, v] : h)
    if (key.first == spin && v >= level)
      return false;
  return true;
}

int lines_at_or_above(const LineHeights &h, int spin, double level) {
  int n = 0;
  for (const auto &[key, v] : h)
    n += key.first == spin && v >= level;
  return n;
}

struct Run {
  ExperimentPlan plan;
  Spectrum spec;
  Spectrum noop;
};

Run run(const ExperimentPlan &plan, PropagatorCache *cache) {
  const ExperimentPlan ref = noop_plan(plan);
  return Run{plan, run_experiment(plan, compile_plan(plan, cache)).spectrum,
             run_experiment(ref, compile_plan(ref, cache)).spectrum};
}

// FID of the data spins only (detection restricted to their coherences), thermal sequence.
std::vector<Complex> data_channel(const ExperimentPlan &plan, PropagatorCache *cache) {
  const CompiledPlan c = compile_plan(plan, cache);
  const DensityState rho = apply(c.function_pulse, apply(c.readout_free_hadamard,
                                                         build_initial_state(plan.system,
                                                                             plan.init)));
  const std::vector<int> data = plan.system.data_spins();
  return acquire_fid(rho, c.hamiltonian, plan.acquisition, data).samples;
}

// max |a - b| / max |a|
double rel_dev(const std::vector<Complex> &a, const std::vector<Complex> &b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m / max_abs(a);
}

// Constant f vs the no-op run, on the data-spin channel.
double constant_vs_noop(const ExperimentPlan &plan, PropagatorCache *cache) {
  return rel_dev(data_channel(noop_plan(plan), cache), data_channel(plan, cache));
}

std::vector<ExperimentPlan> with_pulse(std::vector<ExperimentPlan> plans, const PulseModel &m) {
  for (auto &p : plans)
    p.pulse = m;
  return plans;
}

std::string label(const ExperimentPlan &p) { return "(" + p.function.notation() + ")"; }

double longest_preset_duration() {
  return *std::max_element(kPresetGaussianDurationsS.begin(), kPresetGaussianDurationsS.end());
}

// Checks of criterion 1 on a set of 3-spin thermal phased runs.
void thermal_three_spin_checks(const std::vector<ExperimentPlan> &plans, double suppressed,
                               bool exact_constants, PropagatorCache *cache, Outcome &o,
                               const std::string &tag) {
  int constants = 0, balanced = 0;
  double worst_const = 0.0, worst_supp = 0.0;
  for (const auto &plan : plans) {
    const Run r = run(plan, cache);
    const SpinSystem &sys = plan.system;
    const Classification c = classify(plan.function);
    const LineHeights h = line_heights(r.spec.with_mode(DisplayMode::absolute), sys, suppressed);
    if (c == Classification::constant) {
      ++constants;
      if (exact_constants) {
        const double d = constant_vs_noop(plan, cache);
        worst_const = std::max(worst_const, d);
        o.require(d < kNoOpRelTol, tag + label(plan) + " differs from no-op by " + fmt("%.3g", d));
      } else {
        // Constants keep every data-spin line.
        for (int spin : sys.data_spins())
          o.require(lines_at_or_above(h, spin, kPresent) == static_cast<int>(sys.dim() / 2),
                    tag + label(plan) + " lost a line of spin " + sys.labels()[spin]);
      }
    } else if (c == Classification::balanced) {
      ++balanced;
      bool any = false;
      for (int spin : sys.data_spins()) {
        double top = 0.0;
        for (const auto &[key, v] : h)
          if (key.first == spin)
            top = std::max(top, v);
        if (top < suppressed) {
          any = true;
          worst_supp = std::max(worst_supp, top);
        }
      }
      o.require(any, tag + label(plan) + " suppresses no data spin below " +
                         fmt("%g%%", 100 * suppressed));
    }
    if (c == Classification::neither)
      continue;
    // Work-spin signs: (-1)^f(x), reference lines positive.
    for (const Transition &t : transition_table(sys, sys.work_spin())) {
      const double ref = r.noop.display_at(t.freq_hz);
      const double v = r.spec.display_at(t.freq_hz);
      o.require(ref > 0.0, tag + " no-op work line " + t.data_pattern + " not positive");
      o.require((v < 0.0) == plan.function(t.data_pattern),
                tag + label(plan) + " work line " + t.data_pattern + " has the wrong sign");
    }
  }
  o.require(constants == 2 && balanced == 6, tag + " expected 2 constant and 6 balanced plans");
  if (exact_constants)
    o.fact(tag + "const-vs-noop " + fmt("%.1e", worst_const));
  o.fact(tag + "suppressed<=" + fmt("%.1e", worst_supp));
}

void pops_three_spin_checks(const std::vector<ExperimentPlan> &plans, double suppressed,
                            PropagatorCache *cache, Outcome &o, const std::string &tag) {
  int agree = 0;
  double worst_const = 0.0, weakest_bal = 1.0;
  for (const auto &plan : plans) {
    const Run r = run(plan, cache);
    const SpinSystem &sys = plan.system;
    const Classification c = classify(plan.function);
    const LineHeights h = line_heights(r.spec.with_mode(DisplayMode::absolute), sys, suppressed);
    double top = 0.0;
    for (int spin : sys.data_spins())
      for (const auto &[key, v] : h)
        if (key.first == spin)
          top = std::max(top, v);
    if (c == Classification::constant) {
      worst_const = std::max(worst_const, top);
      o.require(top < suppressed, tag + label(plan) + " shows a data-spin peak at " +
                                      fmt("%.3g", top));
    } else if (c == Classification::balanced) {
      weakest_bal = std::min(weakest_bal, top);
      o.require(top >= kPresent, tag + label(plan) + " has no data-spin peak >= 10%");
    }
    ClassifyThresholds th = default_thresholds(plan.pulse.kind);
    th.suppressed = suppressed;
    const SpectralVerdict v = classify_from_spectrum(r.spec, plan.init.kind, r.noop, sys, th);
    const bool ok = (c == Classification::constant && v == SpectralVerdict::constant) ||
                    (c == Classification::balanced && v == SpectralVerdict::balanced);
    agree += ok;
    o.require(ok, tag + label(plan) + " classified " + to_string(v) + ", expected " +
                      to_string(c));
  }
  o.fact(tag + "verdicts " + std::to_string(agree) + "/" + std::to_string(plans.size()));
  o.fact(tag + "const data max " + fmt("%.1e", worst_const));
  o.fact(tag + "bal data min " + fmt("%.2f", weakest_bal));
}

// Data spin whose 16 lines are all below the ideal suppression level; -1 if not exactly one.
int erased_data_spin(const Run &r) {
  const SpinSystem &sys = r.plan.system;
  const LineHeights h = line_heights(r.spec.with_mode(DisplayMode::absolute), sys,
                                     kIdealSuppressed);
  int found = -1, count = 0;
  for (int spin : sys.data_spins())
    if (spin_suppressed(h, spin, kIdealSuppressed)) {
      found = spin;
      ++count;
    }
  return count == 1 ? found : -1;
}

// ---------------------------------------------------------------------------------------

Outcome criterion_1() {
  Outcome o;
  PropagatorCache cache;
  thermal_three_spin_checks(expand_preset("fig2"), kIdealSuppressed, true, &cache, o, "");
  return o;
}

Outcome criterion_2() {
  Outcome o;
  PropagatorCache cache;
  const auto plans = expand_preset("fig3");
  std::vector<double> ref_mags;
  std::vector<std::vector<int>> const_signs, bal_signs;
  double worst = 0.0;
  for (const auto &plan : plans) {
    const Run r = run(plan, &cache);
    const SpinSystem &sys = plan.system;
    // Peak magnitudes: one resolved peak per single-quantum coherence, its height set by the
    // coherence magnitude. Read from the coherences so Lorentzian tails of neighbouring lines
    // do not enter.
    const CompiledPlan c = compile_plan(plan, &cache);
    const DensityState rho = apply(c.function_pulse,
                                   apply(c.readout_free_hadamard,
                                         build_initial_state(sys, plan.init)));
    std::vector<double> mags;
    for (const Line &l : line_list(rho, c.hamiltonian))
      if (std::abs(l.amplitude) > 0.0)
        mags.push_back(std::abs(l.amplitude));
    std::sort(mags.begin(), mags.end());
    // Every line also appears as an assigned peak of the absolute-value spectrum.
    const LineHeights h = line_heights(r.spec.with_mode(DisplayMode::absolute), sys, kPresent);
    for (const auto &[key, v] : h)
      o.require(v >= kPresent, label(plan) + " line " + sys.labels()[key.first] + " " +
                                   key.second + " missing from the spectrum");
    if (ref_mags.empty())
      ref_mags = mags;
    if (mags.size() != ref_mags.size()) {
      o.require(false, label(plan) + " has " + std::to_string(mags.size()) + " lines, expected " +
                           std::to_string(ref_mags.size()));
    } else {
      for (std::size_t i = 0; i < mags.size(); ++i)
        worst = std::max(worst, std::abs(mags[i] - ref_mags[i]) / ref_mags.back());
    }
    // Phased sign pattern over all lines.
    std::vector<int> signs;
    for (const auto &table : all_transition_tables(sys))
      for (const auto &t : table)
        signs.push_back(r.spec.display_at(t.freq_hz) < 0.0 ? -1 : 1);
    (classify(plan.function) == Classification::constant ? const_signs : bal_signs)
        .push_back(signs);
  }
  o.require(ref_mags.size() == 12, "expected 12 peaks in the pseudopure spectrum");
  o.require(worst < kMultisetRelTol, "magnitude multisets differ by " + fmt("%.3g", worst));
  o.require(const_signs.size() == 2 && bal_signs.size() == 6, "expected 2 + 6 functions");
  int distinct = 0;
  for (const auto &b : bal_signs) {
    bool differs = true;
    for (const auto &c : const_signs)
      differs = differs && b != c;
    distinct += differs;
    o.require(differs, "a balanced sign pattern equals a constant one");
  }
  o.fact("magnitude dev " + fmt("%.1e", worst));
  o.fact("balanced sign patterns distinct " + std::to_string(distinct) + "/6");
  return o;
}

Outcome criterion_3() {
  Outcome o;
  PropagatorCache cache;
  auto plans = expand_preset("fig4");
  for (auto &p : plans)
    p.display = DisplayMode::absolute;
  pops_three_spin_checks(plans, kIdealSuppressed, &cache, o, "");
  return o;
}

Outcome criterion_4() {
  Outcome o;
  PropagatorCache cache;
  double worst = 0.0;
  int erased = 0;
  for (const auto &plan : expand_preset("fig5")) {
    const Run r = run(plan, &cache);
    const Classification c = classify(plan.function);
    if (c == Classification::constant) {
      const double d = constant_vs_noop(plan, &cache);
      worst = std::max(worst, d);
      o.require(d < kNoOpRelTol, label(plan) + " differs from no-op by " + fmt("%.3g", d));
      continue;
    }
    const int spin = erased_data_spin(r);
    o.require(spin >= 0, label(plan) + " does not erase exactly one data spin");
    if (spin >= 0) {
      ++erased;
      o.fact(plan.system.labels()[spin] + " erased by " + label(plan));
    }
  }
  o.require(erased == 4, "expected four projections each erasing one data spin");
  o.fact("const-vs-noop " + fmt("%.1e", worst));
  return o;
}

Outcome criterion_5() {
  Outcome o;
  PropagatorCache cache;
  const auto thermal = expand_preset("fig5");
  const auto pops = expand_preset("fig6");
  int matched = 0;
  for (std::size_t i = 0; i < pops.size(); ++i) {
    const ExperimentPlan &plan = pops[i];
    const SpinSystem &sys = plan.system;
    const Run r = run(plan, &cache);
    const LineHeights h = line_heights(r.spec.with_mode(DisplayMode::absolute), sys,
                                       kIdealSuppressed);
    std::vector<int> surviving;
    for (int spin : sys.data_spins()) {
      if (!spin_suppressed(h, spin, kIdealSuppressed))
        surviving.push_back(spin);
    }
    if (classify(plan.function) == Classification::constant) {
      o.require(surviving.empty(), label(plan) + " shows data-spin peaks");
      continue;
    }
    o.require(surviving.size() == 1, label(plan) + " keeps " +
                                         std::to_string(surviving.size()) + " data spins");
    if (surviving.size() != 1)
      continue;
    o.require(lines_at_or_above(h, surviving[0], kPresent) == 16,
              label(plan) + " surviving spin lacks some of its 16 peaks");
    // Same function in the thermal preset.
    const auto it = std::find_if(thermal.begin(), thermal.end(), [&](const ExperimentPlan &t) {
      return t.function == plan.function;
    });
    if (it == thermal.end()) {
      o.require(false, label(plan) + " missing from the thermal preset");
      continue;
    }
    const int erased = erased_data_spin(run(*it, &cache));
    o.require(erased == surviving[0], label(plan) + " survivor " + sys.labels()[surviving[0]] +
                                          " differs from the thermal erasure");
    matched += erased == surviving[0];
  }
  o.fact("projection survivors match thermal erasure " + std::to_string(matched) + "/4");
  return o;
}

Outcome criterion_6() {
  Outcome o;
  const std::vector<std::pair<std::uint64_t, std::uint64_t>> want = {{2, 6}, {2, 70}, {2, 12870}};
  for (int k = 2; k <= 4; ++k) {
    const auto got = count_functions(k);
    o.require(got == want[static_cast<std::size_t>(k - 2)],
              "k=" + std::to_string(k) + " gives (" + std::to_string(got.first) + ", " +
                  std::to_string(got.second) + ")");
  }
  const PopsCounts p = count_accessible_pops(5);
  o.require(p.pseudopure_states == 32 && p.pairs == 496 && p.accessible == 80,
            "n=5 gives " + std::to_string(p.pseudopure_states) + "/" + std::to_string(p.pairs) +
                "/" + std::to_string(p.accessible));
  o.fact("(2,6) (2,70) (2,12870); 32/496/80");
  return o;
}

Outcome criterion_7() {
  Outcome o;
  PropagatorCache cache;
  CompareOptions opt;
  opt.normalize = true;
  const PulseModel shaped = PulseModel::gaussian(longest_preset_duration());
  struct Group {
    std::string tag;
    std::vector<ExperimentPlan> plans;
    double tol;
  };
  const std::vector<Group> groups = {
      {"3-spin ideal", expand_preset("fig4"), kPopsIdealRelTol},
      {"5-spin ideal", expand_preset("fig6"), kPopsIdealRelTol},
      {"3-spin " + shaped.notation(), with_pulse(expand_preset("fig4"), shaped), kPopsShapedRelTol},
      {"5-spin " + shaped.notation(), expand_preset("fig8sim"), kPopsShapedRelTol},
  };
  for (const auto &g : groups) {
    double worst = 0.0;
    for (ExperimentPlan plan : g.plans) {
      plan.pops_path = PopsPath::subtraction;
      const CompiledPlan c = compile_plan(plan, &cache);
      const Spectrum sub = run_pops_experiment(plan, c, PopsPath::subtraction).spectrum;
      const Spectrum dir = run_pops_experiment(plan, c, PopsPath::direct).spectrum;
      const SpectrumDiff d = compare_spectra(sub, dir, opt);
      worst = std::max(worst, d.max_rel);
      o.require(d.max_rel < g.tol, g.tag + " " + label(plan) + ": deviation " +
                                       fmt("%.3g", d.max_rel) + " >= " + fmt("%g", g.tol));
    }
    o.fact(g.tag + " " + fmt("%.1e", worst));
  }
  return o;
}

Outcome criterion_8() {
  Outcome o;
  PropagatorCache cache;
  const PulseModel shaped = PulseModel::gaussian(longest_preset_duration());

  // Single-harmonic pi on each work-spin line of the 3-spin system.
  ExperimentPlan probe = expand_preset("fig2").front();
  probe.pulse = shaped;
  const Operator h = build_hamiltonian(probe.system);
  const DensityState th = thermal_state(probe.system);
  double lowest = 1.0;
  for (const Transition &t : transition_table(probe.system, probe.system.work_spin())) {
    const Propagator u = single_line_inversion(probe, h, t, &cache);
    const std::vector<Transition> one{t};
    const double f = state_fidelity(u, ideal_multitransition_pi(probe.system, one), th);
    lowest = std::min(lowest, f);
    o.require(f >= kMinShapedFidelity, "line " + t.data_pattern + " fidelity " + fmt("%.4f", f));
  }
  o.fact("min fidelity " + fmt("%.5f", lowest));

  thermal_three_spin_checks(with_pulse(expand_preset("fig2"), shaped), kShapedSuppressed, false,
                            &cache, o, "c1/" + shaped.notation() + " ");
  auto pops = with_pulse(expand_preset("fig4"), shaped);
  for (auto &p : pops)
    p.display = DisplayMode::absolute;
  pops_three_spin_checks(pops, kShapedSuppressed, &cache, o, "c3/" + shaped.notation() + " ");
  return o;
}

Outcome criterion_9() {
  Outcome o;
  double worst_line = 0.0;
  for (const SpinSystem &s : {three_spin_system(), five_spin_system()})
    for (int spin = 0; spin < s.size(); ++spin) {
      std::vector<double> table;
      for (const auto &t : transition_table(s, spin))
        table.push_back(t.freq_hz);
      const auto ref = oracle::brute_force_lines(s.shifts_hz(), s.couplings_hz(), spin);
      if (ref.size() != table.size()) {
        o.require(false, "line count mismatch for spin " + s.labels()[spin]);
        continue;
      }
      for (std::size_t k = 0; k < ref.size(); ++k)
        worst_line = std::max(worst_line, std::abs(ref[k] - table[k]));
    }
  o.require(worst_line <= kLineTolHz, "transition tables off by " + fmt("%.3g", worst_line) + " Hz");
  o.fact("lines " + fmt("%.1e", worst_line) + " Hz");

  std::mt19937_64 rng(9);
  double worst_lin = 0.0;
  for (const SpinSystem &s : {three_spin_system(), five_spin_system()}) {
    const Operator h = build_hamiltonian(s);
    const AcquisitionParams acq = default_acquisition(s);
    for (int trial = 0; trial < 3; ++trial) {
      const auto dim = static_cast<Eigen::Index>(s.dim());
      Matrix a = oracle::random_hermitian(rng, dim), b = oracle::random_hermitian(rng, dim);
      a -= (a.trace() / static_cast<double>(dim)) * Matrix::Identity(dim, dim);
      b -= (b.trace() / static_cast<double>(dim)) * Matrix::Identity(dim, dim);
      const DensityState ra(a, StateKind::derived, TraceConvention::deviation);
      const DensityState rb(b, StateKind::derived, TraceConvention::deviation);
      const DensityState rd(a - b, StateKind::derived, TraceConvention::deviation);
      const Fid lhs = acquire_fid(rd, h, acq);
      const Fid rhs = acquire_fid(ra, h, acq) - acquire_fid(rb, h, acq);
      double err = 0.0;
      for (std::size_t k = 0; k < lhs.points(); ++k)
        err = std::max(err, std::abs(lhs.samples[k] - rhs.samples[k]));
      worst_lin = std::max(worst_lin, err / max_abs(rhs.samples));
    }
  }
  o.require(worst_lin < kLinearityTol, "acquire_fid linearity error " + fmt("%.3g", worst_lin));
  o.fact("linearity " + fmt("%.1e", worst_lin));

  // Every propagator the presets build, plus Gaussian models: all 3-spin functions at the
  // shortest preset duration, (0110) at the longer ones, and one balanced 5-spin function at
  // the shortest.
  PropagatorCache cache;
  double worst_u = 0.0;
  std::size_t checked = 0;
  auto check = [&](const Propagator &u) {
    worst_u = std::max(worst_u, u.unitarity_error());
    ++checked;
  };
  std::vector<ExperimentPlan> plans;
  for (const char *name : {"fig2", "fig3", "fig4", "fig5", "fig6"})
    for (auto &p : expand_preset(name))
      plans.push_back(p);
  const double shortest =
      *std::min_element(kPresetGaussianDurationsS.begin(), kPresetGaussianDurationsS.end());
  for (double d : kPresetGaussianDurationsS)
    for (auto &p : with_pulse(expand_preset("fig4"), PulseModel::gaussian(d)))
      if (d == shortest || p.function.notation() == "0110")
        plans.push_back(p);
  for (auto &p : with_pulse(expand_preset("fig8sim"), PulseModel::gaussian(shortest)))
    if (classify(p.function) == Classification::balanced) {
      plans.push_back(p);
      break;
    }
  for (const auto &p : plans) {
    const CompiledPlan c = compile_plan(p, &cache);
    check(c.readout_free_hadamard);
    check(c.function_pulse);
    if (c.inversion_pulse)
      check(*c.inversion_pulse);
    check(free_evolution(c.hamiltonian, p.acquisition.dwell_s));
  }
  o.require(worst_u < kUnitarityTol, "unitarity error " + fmt("%.3g", worst_u));
  o.fact(std::to_string(checked) + " propagators, max |U+U-1| " + fmt("%.1e", worst_u));
  return o;
}

const std::map<int, std::pair<std::string, std::function<Outcome()>>> kCriteria = {
    {1, {"3-spin thermal, all 8 functions", criterion_1}},
    {2, {"3-spin pseudopure", criterion_2}},
    {3, {"3-spin POPS", criterion_3}},
    {4, {"5-spin thermal projections", criterion_4}},
    {5, {"5-spin POPS projections", criterion_5}},
    {6, {"function and POPS counts", criterion_6}},
    {7, {"POPS subtraction vs direct", criterion_7}},
    {8, {"shaped-pulse fidelity and end-to-end runs", criterion_8}},
    {9, {"oracle equivalences", criterion_9}},
};

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"nmrdj acceptance suite"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "criterion number (repeatable); default all")
      ->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);
  if (selected.empty())
    for (const auto &[n, c] : kCriteria)
      selected.push_back(n);

  int failed = 0;
  for (int n : selected) {
    const auto &[title, fn] = kCriteria.at(n);
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception &e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double budget = kBudgetS.at(n);
    o.require(secs < budget, "runtime " + fmt("%.2f", secs) + " s exceeds " +
                                 fmt("%g", budget) + " s");
    std::ostringstream line;
    line << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << "  " << title << "  [";
    for (std::size_t i = 0; i < o.facts.size(); ++i)
      line << (i ? "; " : "") << o.facts[i];
    line << "]  " << fmt("%.2f", secs) << " s / " << budget << " s";
    std::printf("%s\n", line.str().c_str());
    for (const auto &f : o.failures)
      std::printf("    %s\n", f.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
