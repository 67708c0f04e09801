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

#include "nmrdj/spin_system.hpp"

#include <algorithm>
#include <cmath>

namespace nmrdj {

BasisLabel::BasisLabel(std::string bits) : bits_(std::move(bits)) {
  if (bits_.empty())
    throw Error("basis label is empty");
  for (char c : bits_)
    if (c != '0' && c != '1')
      throw Error("basis label '" + bits_ + "' must contain only 0 and 1");
}

BasisLabel BasisLabel::from_index(std::size_t index, int n) {
  if (n < 1 || index >= (std::size_t{1} << n))
    throw Error("basis index " + std::to_string(index) + " out of range for " +
                std::to_string(n) + " spins");
  std::string bits(n, '0');
  for (int i = 0; i < n; ++i)
    if (index & (std::size_t{1} << (n - 1 - i)))
      bits[i] = '1';
  return BasisLabel(bits);
}

BasisLabel BasisLabel::flipped(int spin) const {
  std::string bits = bits_;
  bits.at(spin) = bits[spin] == '0' ? '1' : '0';
  return BasisLabel(bits);
}

std::size_t BasisLabel::index() const {
  std::size_t idx = 0;
  for (char c : bits_)
    idx = (idx << 1) | static_cast<std::size_t>(c == '1');
  return idx;
}

std::size_t label_to_index(const BasisLabel &label, int n) {
  if (label.size() != n)
    throw Error("basis label '" + label.str() + "' has length " + std::to_string(label.size()) +
                ", expected " + std::to_string(n));
  return label.index();
}

SpinSystem::SpinSystem(std::vector<std::string> labels, std::vector<double> shifts_hz,
                       Eigen::MatrixXd couplings_hz, int work_spin)
    : labels_(std::move(labels)),
      shifts_(std::move(shifts_hz)),
      couplings_(std::move(couplings_hz)),
      work_spin_(work_spin) {
  const int n = static_cast<int>(shifts_.size());
  if (n < kMinSpins || n > kMaxSpins)
    throw Error("spin count " + std::to_string(n) + " outside supported range [" +
                std::to_string(kMinSpins) + ", " + std::to_string(kMaxSpins) + "]");
  if (static_cast<int>(labels_.size()) != n)
    throw Error("expected " + std::to_string(n) + " spin labels, got " +
                std::to_string(labels_.size()));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (labels_[i] == labels_[j])
        throw Error("duplicate spin label '" + labels_[i] + "'");
  if (couplings_.rows() != n || couplings_.cols() != n)
    throw Error("coupling table must be " + std::to_string(n) + "x" + std::to_string(n));
  for (int i = 0; i < n; ++i) {
    if (couplings_(i, i) != 0.0)
      throw Error("coupling table diagonal must be zero (spin " + labels_[i] + ")");
    for (int j = i + 1; j < n; ++j)
      if (couplings_(i, j) != couplings_(j, i))
        throw Error("coupling table must be symmetric: D(" + labels_[i] + "," + labels_[j] +
                    ") != D(" + labels_[j] + "," + labels_[i] + ")");
  }
  for (double v : shifts_)
    if (!std::isfinite(v))
      throw Error("chemical shifts must be finite");
  if (!couplings_.allFinite())
    throw Error("couplings must be finite");
  if (work_spin_ < 0 || work_spin_ >= n)
    throw Error("work spin index " + std::to_string(work_spin_) + " out of range [0, " +
                std::to_string(n) + ")");
}

std::vector<int> SpinSystem::data_spins() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (i != work_spin_)
      out.push_back(i);
  return out;
}

int SpinSystem::spin_index(const std::string &label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end())
    throw Error("unknown spin label '" + label + "'");
  return static_cast<int>(it - labels_.begin());
}

SpinSystem SpinSystem::with_work_spin(int work_spin) const {
  return SpinSystem(labels_, shifts_, couplings_, work_spin);
}

namespace {

Eigen::MatrixXd symmetric_table(int n, const std::vector<double> &upper) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      d(i, j) = upper.at(k);
      d(j, i) = upper.at(k);
      ++k;
    }
  return d;
}

void check_spin(const SpinSystem &sys, int spin) {
  if (spin < 0 || spin >= sys.size())
    throw Error("spin index " + std::to_string(spin) + " out of range [0, " +
                std::to_string(sys.size()) + ")");
}

}  // namespace

SpinSystem three_spin_system() {
  return SpinSystem({"A", "B", "C"}, {-20000.0, 0.0, 15000.0},
                    symmetric_table(3, {6000.0, 2000.0, 500.0}), 0);
}

SpinSystem five_spin_system() {
  // AB AC AD AE BC BD BE CD CE DE
  return SpinSystem({"A", "B", "C", "D", "E"}, {9770.0, 9647.0, -2961.0, -7815.0, -13082.0},
                    symmetric_table(5, {3050.0, 660.0, 900.0, 470.0, 470.0, 230.0, 900.0,
                                        1030.0, 280.0, 1540.0}),
                    3);
}

Operator single_spin_operator(const SpinSystem &sys, int spin, Axis axis) {
  check_spin(sys, spin);
  const std::size_t dim = sys.dim();
  const std::size_t mask = sys.spin_mask(spin);
  Operator op = Operator::Zero(dim, dim);
  for (std::size_t a = 0; a < dim; ++a) {
    const bool up = (a & mask) == 0;
    switch (axis) {
      case Axis::z:
        op(a, a) = up ? 0.5 : -0.5;
        break;
      case Axis::x:
        op(a, a ^ mask) = 0.5;
        break;
      case Axis::y:
        // <0|Iy|1> = -i/2, <1|Iy|0> = +i/2
        op(a, a ^ mask) = up ? Complex(0.0, -0.5) : Complex(0.0, 0.5);
        break;
    }
  }
  return op;
}

Operator total_spin_operator(const SpinSystem &sys, Axis axis) {
  Operator total = Operator::Zero(sys.dim(), sys.dim());
  for (int i = 0; i < sys.size(); ++i)
    total += single_spin_operator(sys, i, axis);
  return total;
}

Eigen::VectorXd hamiltonian_diagonal(const SpinSystem &sys) {
  const int n = sys.size();
  const std::size_t dim = sys.dim();
  Eigen::VectorXd e(dim);
  for (std::size_t a = 0; a < dim; ++a) {
    double hz = 0.0;
    for (int i = 0; i < n; ++i) {
      const double mi = (a & sys.spin_mask(i)) ? -0.5 : 0.5;
      hz += sys.shift_hz(i) * mi;
      for (int j = i + 1; j < n; ++j) {
        const double mj = (a & sys.spin_mask(j)) ? -0.5 : 0.5;
        hz += sys.coupling_hz(i, j) * mi * mj;
      }
    }
    e(a) = kTwoPi * hz;
  }
  return e;
}

Operator build_hamiltonian(const SpinSystem &sys) {
  return hamiltonian_diagonal(sys).cast<Complex>().asDiagonal();
}

std::vector<Transition> transition_table(const SpinSystem &sys, int spin) {
  check_spin(sys, spin);
  const int n = sys.size();
  std::vector<Transition> table;
  table.reserve(sys.dim() / 2);
  for (std::size_t a = 0; a < sys.dim(); ++a) {
    if (a & sys.spin_mask(spin))
      continue;
    Transition t;
    t.spin = spin;
    t.alpha_level = BasisLabel::from_index(a, n);
    t.beta_level = t.alpha_level.flipped(spin);
    double hz = sys.shift_hz(spin);
    for (int j = 0; j < n; ++j) {
      if (j == spin)
        continue;
      const bool spectator_up = !t.alpha_level.bit(j);
      hz += (spectator_up ? 0.5 : -0.5) * sys.coupling_hz(spin, j);
      t.data_pattern.push_back(spectator_up ? '0' : '1');
    }
    t.freq_hz = hz;
    table.push_back(std::move(t));
  }
  std::stable_sort(table.begin(), table.end(),
                   [](const Transition &x, const Transition &y) { return x.freq_hz < y.freq_hz; });
  return table;
}

std::vector<std::vector<Transition>> all_transition_tables(const SpinSystem &sys) {
  std::vector<std::vector<Transition>> tables;
  for (int i = 0; i < sys.size(); ++i)
    tables.push_back(transition_table(sys, i));
  return tables;
}

double max_abs_transition_hz(const SpinSystem &sys) {
  double m = 0.0;
  for (const auto &table : all_transition_tables(sys))
    for (const auto &t : table)
      m = std::max(m, std::abs(t.freq_hz));
  return m;
}

}  // namespace nmrdj
