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

#ifndef NMRDJ_PULSES_HPP
#define NMRDJ_PULSES_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nmrdj/boolean_function.hpp"
#include "nmrdj/spin_system.hpp"
#include "nmrdj/states.hpp"

namespace nmrdj {

constexpr double kUnitarityTolerance = 1e-9;

// Unitary 2^n x 2^n matrix with a short description of how it was made.
class Propagator {
 public:
  Propagator(Matrix matrix, std::string provenance);
  static Propagator identity(std::size_t dim, std::string provenance = "identity");

  const Matrix &matrix() const { return matrix_; }
  const std::string &provenance() const { return provenance_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  // max |U^dagger U - 1|
  double unitarity_error() const;

  // Apply this after `first`: (this * first).
  Propagator after(const Propagator &first) const;

 private:
  Matrix matrix_;
  std::string provenance_;
};

// Non-selective rotation of every spin; phase 0 is the x axis.
struct HardPulse {
  double flip_angle = kPi / 2;
  double phase = 0.0;
};

Propagator hard_pulse_propagator(const SpinSystem &sys, const HardPulse &pulse);

// Product of two-level pi rotations, one per transition, each embedded on the transition's
// level pair. All transitions must belong to the work spin.
Propagator ideal_multitransition_pi(const SpinSystem &sys, std::span<const Transition> transitions,
                                    double phase = 0.0);

// exp(-i H t) for Hermitian H.
Propagator free_evolution(const Operator &hamiltonian, double t);

// Truncated Gaussian centred at T/2. `truncation` is the envelope value at both edges as a
// fraction of the peak; truncation == 1 degenerates to a rectangular envelope. A sample count
// of 0 means "choose the smallest count satisfying the step criterion".
struct GaussianEnvelope {
  double duration_s = 0.04;
  double truncation = 0.01;
  std::size_t samples = 0;

  double sigma_s() const;
  // Unit-peak envelope value at time t in [0, T].
  double operator()(double t) const;
  double area() const;
};

struct Harmonic {
  double freq_hz = 0.0;
  double amplitude = 1.0;
  double phase = 0.0;
};

struct ShapedPulse {
  std::vector<Harmonic> harmonics;
  GaussianEnvelope envelope;
  double nominal_flip = kPi;
};

constexpr std::size_t kMinPulseSamples = 64;
// Time-step criterion: dt <= 1 / (kStepsPerCycle * f_max).
constexpr double kStepsPerCycle = 20.0;

// Peak RF amplitude (rad/s) giving the nominal flip on resonance: A * area = flip.
double calibrate_amplitude(const GaussianEnvelope &envelope, double nominal_flip);

// Largest |frequency| among harmonics, chemical shifts, and transition frequencies.
double step_reference_hz(const SpinSystem &sys, const ShapedPulse &pulse);
// Smallest sample count satisfying the step criterion (and >= kMinPulseSamples).
std::size_t required_samples(const SpinSystem &sys, const ShapedPulse &pulse);

// Time-ordered product over `samples` intervals of two piecewise-constant factors
// exp(-i (H + H_rf,k) dt/2), the effective RF of each factor being the fourth-order
// commutator-free Magnus combination of the RF at the interval's Gauss-Legendre nodes.
// The RF acts on all spins; free evolution under H runs throughout.
Propagator shaped_pulse_propagator(const SpinSystem &sys, const ShapedPulse &pulse,
                                   const Operator &hamiltonian);

// exp(+i H T) * U: the pulse propagator with the free precession accumulated over its
// duration removed, i.e. referenced to the start of the pulse.
Propagator remove_free_evolution(const Propagator &u, const Operator &hamiltonian,
                                 double duration_s);

// One harmonic per transition with f(data_pattern) = 1; an all-zero function yields none.
std::vector<Harmonic> function_to_harmonics(const BooleanFunction &f,
                                            std::span<const Transition> table);

// Transitions of `table` selected by f.
std::vector<Transition> function_transitions(const BooleanFunction &f,
                                             std::span<const Transition> table);

// Normalised overlap Tr(U rho U+ V rho V+) / sqrt(Tr((U rho U+)^2) Tr((V rho V+)^2)).
double state_fidelity(const Propagator &u, const Propagator &v, const DensityState &rho);

// Plain-text schedule: t_s, envelope, one wrapped instantaneous phase column per harmonic.
void write_schedule(std::ostream &os, const SpinSystem &sys, const ShapedPulse &pulse);

}  // namespace nmrdj

#endif  // NMRDJ_PULSES_HPP
