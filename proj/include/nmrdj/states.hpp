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

#ifndef NMRDJ_STATES_HPP
#define NMRDJ_STATES_HPP

#include <cstdint>
#include <string>

#include "nmrdj/spin_system.hpp"

namespace nmrdj {

enum class StateKind { thermal, pseudopure, pops, derived };
enum class TraceConvention { deviation, unit_trace };

std::string to_string(StateKind kind);

// Density matrix over the computational basis. Thermal and POPS states are stored as
// traceless deviation matrices; pseudopure states as unit-trace projectors.
class DensityState {
 public:
  DensityState(Matrix matrix, StateKind kind, TraceConvention convention);

  const Matrix &matrix() const { return matrix_; }
  StateKind kind() const { return kind_; }
  TraceConvention trace_convention() const { return convention_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

 private:
  Matrix matrix_;
  StateKind kind_;
  TraceConvention convention_;
};

constexpr double kHermitianTolerance = 1e-12;

// Sum of Iz over all spins, identity part dropped and no Boltzmann prefactor.
DensityState thermal_state(const SpinSystem &sys);

DensityState pseudopure_state(const SpinSystem &sys, const BasisLabel &label);

// |a><a| - |b><b|. Throws when a == b.
DensityState pops_state(const SpinSystem &sys, const BasisLabel &a, const BasisLabel &b);

struct PopsCounts {
  std::uint64_t pseudopure_states = 0;
  std::uint64_t pairs = 0;
  // pairs differing in exactly one spin's bit, i.e. reachable by inverting one line
  std::uint64_t accessible = 0;
};

PopsCounts count_accessible_pops(int n);

}  // namespace nmrdj

#endif  // NMRDJ_STATES_HPP
