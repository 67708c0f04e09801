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

#include "nmrdj/states.hpp"

#include <cmath>

namespace nmrdj {

std::string to_string(StateKind kind) {
  switch (kind) {
    case StateKind::thermal:
      return "thermal";
    case StateKind::pseudopure:
      return "pseudopure";
    case StateKind::pops:
      return "pops";
    case StateKind::derived:
      return "derived";
  }
  return "?";
}

DensityState::DensityState(Matrix matrix, StateKind kind, TraceConvention convention)
    : matrix_(std::move(matrix)), kind_(kind), convention_(convention) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 2 ||
      (matrix_.rows() & (matrix_.rows() - 1)) != 0)
    throw Error("density matrix must be square with power-of-two dimension");
  const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance * scale)
    throw Error("density matrix is not Hermitian");
  const double tr = matrix_.trace().real();
  if ((kind_ == StateKind::thermal || kind_ == StateKind::pops) &&
      std::abs(tr) > kHermitianTolerance * scale)
    throw Error(to_string(kind_) + " state must be traceless");
  if (kind_ == StateKind::pseudopure && std::abs(tr - 1.0) > kHermitianTolerance)
    throw Error("pseudopure state must have unit trace");
}

DensityState thermal_state(const SpinSystem &sys) {
  return DensityState(total_spin_operator(sys, Axis::z), StateKind::thermal,
                      TraceConvention::deviation);
}

DensityState pseudopure_state(const SpinSystem &sys, const BasisLabel &label) {
  const std::size_t idx = label_to_index(label, sys.size());
  Matrix rho = Matrix::Zero(sys.dim(), sys.dim());
  rho(idx, idx) = 1.0;
  return DensityState(std::move(rho), StateKind::pseudopure, TraceConvention::unit_trace);
}

DensityState pops_state(const SpinSystem &sys, const BasisLabel &a, const BasisLabel &b) {
  const std::size_t ia = label_to_index(a, sys.size());
  const std::size_t ib = label_to_index(b, sys.size());
  if (ia == ib)
    throw Error("POPS labels must differ (|" + a.str() + "><" + a.str() + "| - itself is zero)");
  Matrix rho = Matrix::Zero(sys.dim(), sys.dim());
  rho(ia, ia) = 1.0;
  rho(ib, ib) = -1.0;
  return DensityState(std::move(rho), StateKind::pops, TraceConvention::deviation);
}

PopsCounts count_accessible_pops(int n) {
  if (n < 1 || n > 31)
    throw Error("count_accessible_pops supports 1 <= n <= 31");
  PopsCounts c;
  c.pseudopure_states = std::uint64_t{1} << n;
  c.pairs = c.pseudopure_states * (c.pseudopure_states - 1) / 2;
  c.accessible = static_cast<std::uint64_t>(n) << (n - 1);
  return c;
}

}  // namespace nmrdj
