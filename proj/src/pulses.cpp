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

#include "nmrdj/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace nmrdj {

Propagator::Propagator(Matrix matrix, std::string provenance)
    : matrix_(std::move(matrix)), provenance_(std::move(provenance)) {
  if (matrix_.rows() != matrix_.cols())
    throw Error("propagator must be square (" + provenance_ + ")");
  const double err = unitarity_error();
  if (!(err < kUnitarityTolerance)) {
    std::ostringstream msg;
    msg << "propagator is not unitary: |U+U - 1|max = " << err << " (" << provenance_ << ")";
    throw Error(msg.str());
  }
}

Propagator Propagator::identity(std::size_t dim, std::string provenance) {
  return Propagator(Matrix::Identity(dim, dim), std::move(provenance));
}

double Propagator::unitarity_error() const {
  const Matrix d = matrix_.adjoint() * matrix_ - Matrix::Identity(matrix_.rows(), matrix_.cols());
  return d.cwiseAbs().maxCoeff();
}

Propagator Propagator::after(const Propagator &first) const {
  if (first.dim() != dim())
    throw Error("propagator dimension mismatch");
  return Propagator(matrix_ * first.matrix_, provenance_ + " after " + first.provenance_);
}

namespace {

bool is_diagonal(const Operator &h) {
  for (Eigen::Index j = 0; j < h.cols(); ++j)
    for (Eigen::Index i = 0; i < h.rows(); ++i)
      if (i != j && h(i, j) != Complex(0.0, 0.0))
        return false;
  return true;
}

// exp(-i M dt) for Hermitian M
Matrix hermitian_exp(const Matrix &m, double dt, Eigen::SelfAdjointEigenSolver<Matrix> &solver) {
  solver.compute(m);
  const Eigen::VectorXd &w = solver.eigenvalues();
  const Matrix &v = solver.eigenvectors();
  Eigen::VectorXcd phases(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i)
    phases(i) = std::polar(1.0, -w(i) * dt);
  return v * phases.asDiagonal() * v.adjoint();
}

void check_dims(const SpinSystem &sys, const Operator &h) {
  if (static_cast<std::size_t>(h.rows()) != sys.dim() ||
      static_cast<std::size_t>(h.cols()) != sys.dim())
    throw Error("Hamiltonian dimension does not match the spin system");
}

}  // namespace

Propagator hard_pulse_propagator(const SpinSystem &sys, const HardPulse &pulse) {
  if (!(pulse.flip_angle >= 0.0 && pulse.flip_angle <= kTwoPi))
    throw Error("hard pulse flip angle must lie in [0, 2pi]");
  const double c = std::cos(pulse.flip_angle / 2);
  const double s = std::sin(pulse.flip_angle / 2);
  // exp(-i theta (Ix cos phi + Iy sin phi)) on one spin
  Eigen::Matrix2cd r;
  r << c, Complex(0.0, -s) * std::polar(1.0, -pulse.phase), Complex(0.0, -s) * std::polar(1.0, pulse.phase), c;
  Matrix u = Matrix::Identity(1, 1);
  for (int i = 0; i < sys.size(); ++i)
    u = Eigen::kroneckerProduct(u, r).eval();
  std::ostringstream what;
  what << "hard pulse(" << pulse.flip_angle << " rad, phase " << pulse.phase << ")";
  return Propagator(std::move(u), what.str());
}

Propagator ideal_multitransition_pi(const SpinSystem &sys, std::span<const Transition> transitions,
                                    double phase) {
  const int work = sys.work_spin();
  Matrix u = Matrix::Identity(sys.dim(), sys.dim());
  std::vector<bool> touched(sys.dim(), false);
  std::string what = "ideal pi[";
  for (const auto &t : transitions) {
    if (t.spin != work || t.alpha_level.size() != sys.size() || t.beta_level.size() != sys.size() ||
        t.alpha_level.bit(work) || t.alpha_level.flipped(work) != t.beta_level)
      throw Error("transition " + t.alpha_level.str() + "<->" + t.beta_level.str() +
                  " does not belong to the work spin " + sys.labels()[work]);
    const std::size_t p = t.alpha_level.index();
    const std::size_t q = t.beta_level.index();
    if (touched[p] || touched[q])
      throw Error("transitions must address disjoint level pairs");
    touched[p] = touched[q] = true;
    // exp(-i pi sigma_phi / 2) = -i sigma_phi on the pair
    u(p, p) = 0.0;
    u(q, q) = 0.0;
    u(p, q) = Complex(0.0, -1.0) * std::polar(1.0, -phase);
    u(q, p) = Complex(0.0, -1.0) * std::polar(1.0, phase);
    what += t.data_pattern + " ";
  }
  what += "]";
  return Propagator(std::move(u), what);
}

Propagator free_evolution(const Operator &hamiltonian, double t) {
  std::ostringstream what;
  what << "free evolution(" << t << " s)";
  if (is_diagonal(hamiltonian)) {
    Matrix u = Matrix::Zero(hamiltonian.rows(), hamiltonian.cols());
    for (Eigen::Index i = 0; i < hamiltonian.rows(); ++i)
      u(i, i) = std::polar(1.0, -hamiltonian(i, i).real() * t);
    return Propagator(std::move(u), what.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  return Propagator(hermitian_exp(hamiltonian, t, solver), what.str());
}

double GaussianEnvelope::sigma_s() const {
  if (truncation >= 1.0)
    return std::numeric_limits<double>::infinity();
  return 0.5 * duration_s / std::sqrt(2.0 * std::log(1.0 / truncation));
}

double GaussianEnvelope::operator()(double t) const {
  if (truncation >= 1.0)
    return 1.0;
  const double x = (t - 0.5 * duration_s) / sigma_s();
  return std::exp(-0.5 * x * x);
}

double GaussianEnvelope::area() const {
  if (!(duration_s > 0.0) || !(truncation > 0.0))
    return 0.0;
  if (truncation >= 1.0)
    return duration_s;
  const double sigma = sigma_s();
  return sigma * std::sqrt(kTwoPi) * std::erf(0.5 * duration_s / (std::sqrt(2.0) * sigma));
}

double calibrate_amplitude(const GaussianEnvelope &envelope, double nominal_flip) {
  if (!(envelope.duration_s > 0.0))
    throw Error("pulse duration must be positive");
  const double area = envelope.area();
  if (!(area > 0.0))
    throw Error("pulse envelope has zero area");
  return nominal_flip / area;
}

double step_reference_hz(const SpinSystem &sys, const ShapedPulse &pulse) {
  double f = max_abs_transition_hz(sys);
  for (double v : sys.shifts_hz())
    f = std::max(f, std::abs(v));
  for (const auto &h : pulse.harmonics)
    f = std::max(f, std::abs(h.freq_hz));
  return f;
}

std::size_t required_samples(const SpinSystem &sys, const ShapedPulse &pulse) {
  const double f = step_reference_hz(sys, pulse);
  const double n = std::ceil(pulse.envelope.duration_s * kStepsPerCycle * f - 1e-9);
  return std::max(kMinPulseSamples, static_cast<std::size_t>(std::max(0.0, n)));
}

namespace {

void validate(const SpinSystem &sys, const ShapedPulse &pulse) {
  if (!(pulse.envelope.duration_s > 0.0))
    throw Error("shaped pulse duration must be positive");
  if (!(pulse.envelope.truncation > 0.0 && pulse.envelope.truncation <= 1.0))
    throw Error("envelope truncation must lie in (0, 1]");
  for (std::size_t i = 0; i < pulse.harmonics.size(); ++i) {
    if (!(pulse.harmonics[i].amplitude >= 0.0))
      throw Error("harmonic amplitudes must be non-negative");
    for (std::size_t j = i + 1; j < pulse.harmonics.size(); ++j)
      if (pulse.harmonics[i].freq_hz == pulse.harmonics[j].freq_hz)
        throw Error("harmonic frequencies must be distinct");
  }
  const std::size_t samples = pulse.envelope.samples;
  if (samples != 0) {
    if (samples < kMinPulseSamples)
      throw Error("shaped pulse needs at least " + std::to_string(kMinPulseSamples) + " samples");
    const double dt = pulse.envelope.duration_s / static_cast<double>(samples);
    const double f = step_reference_hz(sys, pulse);
    if (dt * kStepsPerCycle * f > 1.0 + 1e-9) {
      std::ostringstream msg;
      msg << "shaped pulse time step under-resolved: dt = " << dt << " s exceeds 1/(20*"
          << f << " Hz) = " << 1.0 / (kStepsPerCycle * f) << " s; use at least "
          << required_samples(sys, pulse) << " samples";
      throw Error(msg.str());
    }
  }
}

}  // namespace

Propagator shaped_pulse_propagator(const SpinSystem &sys, const ShapedPulse &pulse,
                                   const Operator &hamiltonian) {
  check_dims(sys, hamiltonian);
  validate(sys, pulse);
  const GaussianEnvelope &env = pulse.envelope;
  const std::size_t samples = env.samples != 0 ? env.samples : required_samples(sys, pulse);
  const double dt = env.duration_s / static_cast<double>(samples);
  const double amp = calibrate_amplitude(env, pulse.nominal_flip);

  std::ostringstream what;
  what << "gaussian pulse(" << env.duration_s * 1e3 << " ms, " << pulse.harmonics.size()
       << " harmonics, " << samples << " steps)";

  bool silent = true;
  for (const auto &h : pulse.harmonics)
    silent = silent && h.amplitude == 0.0;
  if (silent)
    return Propagator(free_evolution(hamiltonian, env.duration_s).matrix(), what.str());

  const Matrix fx = total_spin_operator(sys, Axis::x);
  const Matrix fy = total_spin_operator(sys, Axis::y);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(static_cast<Eigen::Index>(sys.dim()));
  Matrix u = Matrix::Identity(sys.dim(), sys.dim());
  auto rf = [&](double t) {
    double bx = 0.0;
    double by = 0.0;
    for (const auto &h : pulse.harmonics) {
      const double theta = kTwoPi * h.freq_hz * t + h.phase;
      bx += h.amplitude * std::cos(theta);
      by += h.amplitude * std::sin(theta);
    }
    const double scale = amp * env(t);
    return std::pair{scale * bx, scale * by};
  };
  // Fourth-order commutator-free Magnus step: RF sampled at the two Gauss-Legendre nodes,
  // two half-step exponentials per interval.
  const double r3 = std::sqrt(3.0);
  const double c1 = 0.5 - r3 / 6;
  const double c2 = 0.5 + r3 / 6;
  const double w1 = (3 - 2 * r3) / 6;
  const double w2 = (3 + 2 * r3) / 6;
  Matrix m(sys.dim(), sys.dim());
  for (std::size_t k = 0; k < samples; ++k) {
    const double t0 = static_cast<double>(k) * dt;
    const auto [x1, y1] = rf(t0 + c1 * dt);
    const auto [x2, y2] = rf(t0 + c2 * dt);
    m.noalias() = hamiltonian + (w2 * x1 + w1 * x2) * fx + (w2 * y1 + w1 * y2) * fy;
    u = hermitian_exp(m, dt / 2, solver) * u;
    m.noalias() = hamiltonian + (w1 * x1 + w2 * x2) * fx + (w1 * y1 + w2 * y2) * fy;
    u = hermitian_exp(m, dt / 2, solver) * u;
  }
  return Propagator(std::move(u), what.str());
}

Propagator remove_free_evolution(const Propagator &u, const Operator &hamiltonian,
                                 double duration_s) {
  Propagator back = free_evolution(hamiltonian, -duration_s);
  return Propagator(back.matrix() * u.matrix(), u.provenance() + " (free precession removed)");
}

std::vector<Transition> function_transitions(const BooleanFunction &f,
                                             std::span<const Transition> table) {
  std::vector<Transition> out;
  for (const auto &t : table) {
    if (static_cast<int>(t.data_pattern.size()) != f.arity())
      throw Error("function arity " + std::to_string(f.arity()) +
                  " does not match the data-qubit count " +
                  std::to_string(t.data_pattern.size()));
    if (t.spin != table.front().spin)
      throw Error("transition table mixes spins");
    if (f(t.data_pattern))
      out.push_back(t);
  }
  return out;
}

std::vector<Harmonic> function_to_harmonics(const BooleanFunction &f,
                                            std::span<const Transition> table) {
  std::vector<Harmonic> out;
  for (const auto &t : function_transitions(f, table))
    out.push_back(Harmonic{t.freq_hz, 1.0, 0.0});
  return out;
}

double state_fidelity(const Propagator &u, const Propagator &v, const DensityState &rho) {
  const Matrix a = u.matrix() * rho.matrix() * u.matrix().adjoint();
  const Matrix b = v.matrix() * rho.matrix() * v.matrix().adjoint();
  const double ab = (a * b).trace().real();
  const double aa = (a * a).trace().real();
  const double bb = (b * b).trace().real();
  if (!(aa > 0.0 && bb > 0.0))
    throw Error("fidelity undefined for a zero state");
  return ab / std::sqrt(aa * bb);
}

void write_schedule(std::ostream &os, const SpinSystem &sys, const ShapedPulse &pulse) {
  validate(sys, pulse);
  const std::size_t samples =
      pulse.envelope.samples != 0 ? pulse.envelope.samples : required_samples(sys, pulse);
  const double dt = pulse.envelope.duration_s / static_cast<double>(samples);
  os << "t_s,envelope";
  for (const auto &h : pulse.harmonics)
    os << ",phase_" << std::setprecision(10) << h.freq_hz << "_hz";
  os << '\n' << std::scientific << std::setprecision(16);
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = (static_cast<double>(k) + 0.5) * dt;
    os << t << ',' << pulse.envelope(t);
    for (const auto &h : pulse.harmonics) {
      double ph = std::fmod(kTwoPi * h.freq_hz * t + h.phase, kTwoPi);
      if (ph < 0.0)
        ph += kTwoPi;
      os << ',' << ph;
    }
    os << '\n';
  }
}

}  // namespace nmrdj
