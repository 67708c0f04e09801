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

#ifndef NMRDJ_SPIN_SYSTEM_HPP
#define NMRDJ_SPIN_SYSTEM_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nmrdj {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
// Dense 2^n x 2^n operator over the computational basis.
using Operator = Matrix;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Thrown on any violated precondition or invariant.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr int kMinSpins = 1;
constexpr int kMaxSpins = 6;

enum class Axis { x, y, z };

// Computational-basis ket |b0 b1 ... b(n-1)>, spin 0 leftmost and most significant.
// Bit 0 is the +1/2 (alpha) state of Iz.
class BasisLabel {
 public:
  explicit BasisLabel(std::string bits);
  static BasisLabel from_index(std::size_t index, int n);

  int size() const { return static_cast<int>(bits_.size()); }
  bool bit(int spin) const { return bits_.at(spin) == '1'; }
  const std::string &str() const { return bits_; }
  BasisLabel flipped(int spin) const;
  std::size_t index() const;

  bool operator==(const BasisLabel &) const = default;

 private:
  std::string bits_;
};

// Throws if the label length differs from n.
std::size_t label_to_index(const BasisLabel &label, int n);

class SpinSystem {
 public:
  // couplings_hz is the full symmetric n x n table of effective splittings with zero diagonal.
  SpinSystem(std::vector<std::string> labels, std::vector<double> shifts_hz,
             Eigen::MatrixXd couplings_hz, int work_spin);

  int size() const { return static_cast<int>(shifts_.size()); }
  std::size_t dim() const { return std::size_t{1} << size(); }
  const std::vector<std::string> &labels() const { return labels_; }
  const std::vector<double> &shifts_hz() const { return shifts_; }
  double shift_hz(int spin) const { return shifts_.at(spin); }
  const Eigen::MatrixXd &couplings_hz() const { return couplings_; }
  double coupling_hz(int i, int j) const { return couplings_(i, j); }
  int work_spin() const { return work_spin_; }
  std::vector<int> data_spins() const;

  // Index of the spin carrying the given label, or throws.
  int spin_index(const std::string &label) const;
  // Bit mask selecting this spin's bit in a basis index.
  std::size_t spin_mask(int spin) const { return std::size_t{1} << (size() - 1 - spin); }

  SpinSystem with_work_spin(int work_spin) const;

 private:
  std::vector<std::string> labels_;
  std::vector<double> shifts_;
  Eigen::MatrixXd couplings_;
  int work_spin_;
};

// Three-spin system of the first simulation series: shifts -20000/0/+15000 Hz,
// couplings AB=6000, AC=2000, BC=500 Hz, work spin A.
SpinSystem three_spin_system();

// Five-spin system (A,B protons; C,D,E fluorines) with work spin D. The shifts are the
// published simulation values; the couplings are an illustrative default chosen so every
// line in the 80-line spectrum is resolved (not measured values).
SpinSystem five_spin_system();

// Tensor-product spin-1/2 operator I_axis on spin i.
Operator single_spin_operator(const SpinSystem &sys, int spin, Axis axis);

// Sum over all spins of I_axis.
Operator total_spin_operator(const SpinSystem &sys, Axis axis);

// Secular weak-coupling Hamiltonian 2*pi*(sum nu_i Iz_i + sum_{i<j} D_ij Iz_i Iz_j), rad/s.
Operator build_hamiltonian(const SpinSystem &sys);

// Diagonal of build_hamiltonian as a real vector (rad/s).
Eigen::VectorXd hamiltonian_diagonal(const SpinSystem &sys);

// One single-quantum line of a spin: the level pair differing only in that spin's bit.
struct Transition {
  int spin = 0;
  double freq_hz = 0.0;
  BasisLabel alpha_level{"0"};  // spin bit 0
  BasisLabel beta_level{"1"};   // spin bit 1
  std::string data_pattern;     // spectator bits in spin order, this spin removed
};

// 2^(n-1) lines of one spin sorted by frequency. A spectator in state 0 contributes
// +D/2, in state 1 contributes -D/2.
std::vector<Transition> transition_table(const SpinSystem &sys, int spin);

// transition_table for every spin, in spin order.
std::vector<std::vector<Transition>> all_transition_tables(const SpinSystem &sys);

// Largest |transition frequency| over all spins.
double max_abs_transition_hz(const SpinSystem &sys);

}  // namespace nmrdj

#endif  // NMRDJ_SPIN_SYSTEM_HPP
