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

#include "nmrdj/detect.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>

#include <fftw3.h>

namespace nmrdj {

std::string to_string(DisplayMode mode) {
  return mode == DisplayMode::phased ? "phased" : "absolute";
}

DisplayMode parse_display_mode(const std::string &s) {
  if (s == "phased")
    return DisplayMode::phased;
  if (s == "absolute" || s == "absolute-value" || s == "magnitude")
    return DisplayMode::absolute;
  throw Error("unknown display mode '" + s + "' (expected phased or absolute)");
}

AcquisitionParams default_acquisition(const SpinSystem &sys) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto &table : all_transition_tables(sys))
    for (const auto &t : table) {
      lo = std::min(lo, t.freq_hz);
      hi = std::max(hi, t.freq_hz);
    }
  const double max_abs = std::max(std::abs(lo), std::abs(hi));
  double sw = 1.25 * (hi - lo);
  if (sw <= 2.0 * max_abs)
    sw = 2.5 * max_abs;
  if (!(sw > 0.0))
    sw = 1000.0;
  AcquisitionParams p;
  p.dwell_s = 1.0 / sw;
  return p;
}

void validate_acquisition(const AcquisitionParams &params, const SpinSystem &sys) {
  if (params.points < kMinFidPoints || (params.points & (params.points - 1)) != 0)
    throw Error("FID points must be a power of two >= " + std::to_string(kMinFidPoints));
  if (!(params.dwell_s > 0.0))
    throw Error("dwell time must be positive");
  if (!(params.t2_s > 0.0))
    throw Error("T2 must be positive");
  const double fmax = max_abs_transition_hz(sys);
  if (!(params.spectral_width_hz() > 2.0 * fmax)) {
    std::ostringstream msg;
    msg << "spectral width " << params.spectral_width_hz()
        << " Hz must exceed twice the largest |transition frequency| (" << 2.0 * fmax << " Hz)";
    throw Error(msg.str());
  }
}

DensityState apply(const Propagator &u, const DensityState &rho) {
  if (u.dim() != rho.dim())
    throw Error("propagator dimension " + std::to_string(u.dim()) +
                " does not match state dimension " + std::to_string(rho.dim()));
  Matrix out = u.matrix() * rho.matrix() * u.matrix().adjoint();
  return DensityState(std::move(out), StateKind::derived, rho.trace_convention());
}

std::vector<Line> line_list(const DensityState &rho, const Operator &hamiltonian,
                            std::span<const int> detect_spins) {
  const std::size_t dim = rho.dim();
  if (static_cast<std::size_t>(hamiltonian.rows()) != dim)
    throw Error("Hamiltonian and state dimensions differ");
  int n = 0;
  while ((std::size_t{1} << n) < dim)
    ++n;
  for (Eigen::Index j = 0; j < hamiltonian.cols(); ++j)
    for (Eigen::Index i = 0; i < hamiltonian.rows(); ++i)
      if (i != j && hamiltonian(i, j) != Complex(0.0, 0.0))
        throw Error("detection requires a Hamiltonian diagonal in the computational basis");

  std::vector<int> spins(detect_spins.begin(), detect_spins.end());
  if (spins.empty())
    for (int i = 0; i < n; ++i)
      spins.push_back(i);

  std::vector<Line> lines;
  for (int spin : spins) {
    if (spin < 0 || spin >= n)
      throw Error("detection spin index out of range");
    const std::size_t mask = std::size_t{1} << (n - 1 - spin);
    for (std::size_t a = 0; a < dim; ++a) {
      if (a & mask)
        continue;
      const std::size_t b = a | mask;
      // Tr(rho(t) I+) picks rho_ba, which evolves as exp(+i (E_a - E_b) t)
      Line l;
      l.spin = spin;
      l.alpha_index = a;
      l.beta_index = b;
      l.amplitude = rho.matrix()(b, a);
      l.freq_hz = (hamiltonian(a, a).real() - hamiltonian(b, b).real()) / kTwoPi;
      lines.push_back(l);
    }
  }
  return lines;
}

Fid operator-(const Fid &a, const Fid &b) {
  if (a.points() != b.points() || a.dwell_s != b.dwell_s)
    throw Error("cannot subtract FIDs with different sampling");
  Fid out = a;
  for (std::size_t k = 0; k < out.samples.size(); ++k)
    out.samples[k] -= b.samples[k];
  return out;
}

Fid operator*(Complex scale, const Fid &a) {
  Fid out = a;
  for (auto &s : out.samples)
    s *= scale;
  return out;
}

Fid acquire_fid(const DensityState &rho, const Operator &hamiltonian,
                const AcquisitionParams &params, std::span<const int> detect_spins) {
  if (params.points < kMinFidPoints || (params.points & (params.points - 1)) != 0)
    throw Error("FID points must be a power of two >= " + std::to_string(kMinFidPoints));
  if (!(params.dwell_s > 0.0) || !(params.t2_s > 0.0))
    throw Error("dwell and T2 must be positive");
  const auto lines = line_list(rho, hamiltonian, detect_spins);
  double fmax = 0.0;
  for (const auto &l : lines)
    fmax = std::max(fmax, std::abs(l.freq_hz));
  if (!(params.spectral_width_hz() > 2.0 * fmax))
    throw Error("spectral width must exceed twice the largest |transition frequency|");

  Fid fid;
  fid.dwell_s = params.dwell_s;
  fid.t2_s = params.t2_s;
  fid.samples.assign(params.points, Complex(0.0, 0.0));
  for (std::size_t k = 0; k < params.points; ++k) {
    const double t = static_cast<double>(k) * params.dwell_s;
    Complex s(0.0, 0.0);
    for (const auto &l : lines)
      if (l.amplitude != Complex(0.0, 0.0))
        s += l.amplitude * std::polar(1.0, kTwoPi * l.freq_hz * t);
    fid.samples[k] = s * std::exp(-t / params.t2_s);
  }
  return fid;
}

std::vector<double> frequency_axis(std::size_t points, double dwell_s) {
  std::vector<double> f(points);
  const double df = 1.0 / (static_cast<double>(points) * dwell_s);
  const long half = static_cast<long>(points / 2);
  for (std::size_t i = 0; i < points; ++i)
    f[i] = static_cast<double>(static_cast<long>(i) - half + 1) * df;
  return f;
}

namespace {

// FFTW's planner is not re-entrant.
std::mutex &planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex *>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!data)
      throw Error("FFTW allocation failed");
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer &) = delete;
  FftwBuffer &operator=(const FftwBuffer &) = delete;
  fftw_complex *data;
};

}  // namespace

std::vector<Complex> centered_dft(std::span<const Complex> samples) {
  const std::size_t n = samples.size();
  if (n == 0)
    return {};
  FftwBuffer in(n);
  FftwBuffer out(n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), in.data, out.data, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (std::size_t k = 0; k < n; ++k) {
    in.data[k][0] = samples[k].real();
    in.data[k][1] = samples[k].imag();
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  std::vector<Complex> spec(n);
  const long half = static_cast<long>(n / 2);
  for (std::size_t i = 0; i < n; ++i) {
    const long m = static_cast<long>(i) - half + 1;
    const std::size_t j = static_cast<std::size_t>((m + static_cast<long>(n)) % static_cast<long>(n));
    spec[i] = Complex(out.data[j][0], out.data[j][1]);
  }
  return spec;
}

Spectrum::Spectrum(std::vector<double> freqs, std::vector<Complex> values, DisplayMode mode)
    : freqs_(std::move(freqs)), values_(std::move(values)), mode_(mode) {
  if (freqs_.size() != values_.size())
    throw Error("spectrum axis and values differ in length");
}

double Spectrum::bin_width() const {
  return freqs_.size() > 1 ? freqs_[1] - freqs_[0] : 0.0;
}

double Spectrum::display(std::size_t i) const {
  return mode_ == DisplayMode::phased ? values_.at(i).real() : std::abs(values_.at(i));
}

std::vector<double> Spectrum::display_values() const {
  std::vector<double> d(values_.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    d[i] = display(i);
  return d;
}

std::size_t Spectrum::nearest_bin(double freq_hz) const {
  if (freqs_.empty())
    throw Error("empty spectrum");
  auto it = std::lower_bound(freqs_.begin(), freqs_.end(), freq_hz);
  if (it == freqs_.end())
    return freqs_.size() - 1;
  std::size_t i = static_cast<std::size_t>(it - freqs_.begin());
  if (i > 0 && std::abs(freqs_[i - 1] - freq_hz) <= std::abs(freqs_[i] - freq_hz))
    --i;
  return i;
}

double Spectrum::display_at(double freq_hz) const {
  return display(nearest_bin(freq_hz));
}

Spectrum spectrum(const Fid &fid, DisplayMode mode, const SpectrumOptions &options) {
  std::vector<Complex> s = fid.samples;
  if (options.halve_first_point && !s.empty())
    s[0] *= 0.5;
  std::vector<Complex> values = centered_dft(s);
  const Complex rot = std::polar(1.0, options.zero_order_phase);
  for (auto &v : values)
    v *= rot;
  return Spectrum(frequency_axis(fid.points(), fid.dwell_s), std::move(values), mode);
}

double reference_phase(const Fid &reference) {
  if (reference.samples.empty() || std::abs(reference.samples.front()) == 0.0)
    throw Error("reference FID has no signal to phase against");
  return -std::arg(reference.samples.front());
}

std::vector<Peak> extract_peaks(const Spectrum &spec, double threshold,
                                const std::vector<std::vector<Transition>> &tables) {
  if (spec.size() == 0)
    throw Error("cannot extract peaks from an empty spectrum");
  if (!(threshold > 0.0 && threshold < 1.0))
    throw Error("peak threshold must lie in (0, 1)");
  const std::vector<double> d = spec.display_values();
  double gmax = 0.0;
  for (double v : d)
    gmax = std::max(gmax, std::abs(v));
  std::vector<Peak> peaks;
  if (gmax == 0.0)
    return peaks;

  std::vector<const Transition *> predicted;
  for (const auto &table : tables)
    for (const auto &t : table)
      predicted.push_back(&t);
  std::vector<double> distinct;
  for (const auto *t : predicted)
    distinct.push_back(t->freq_hz);
  std::sort(distinct.begin(), distinct.end());
  double min_spacing = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < distinct.size(); ++i) {
    const double gap = distinct[i] - distinct[i - 1];
    if (gap > 1e-9)
      min_spacing = std::min(min_spacing, gap);
  }
  const double window = 0.5 * min_spacing;

  const double floor = threshold * gmax;
  for (std::size_t i = 1; i + 1 < d.size(); ++i) {
    const double a = std::abs(d[i]);
    if (a < floor || !(a > std::abs(d[i - 1])) || !(a >= std::abs(d[i + 1])))
      continue;
    Peak p;
    p.freq_hz = spec.freqs()[i];
    p.amplitude = d[i];
    const Transition *best = nullptr;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const auto *t : predicted) {
      const double dist = std::abs(t->freq_hz - p.freq_hz);
      if (dist < best_dist) {
        best_dist = dist;
        best = t;
      }
    }
    if (best && best_dist <= window) {
      p.assigned_spin = best->spin;
      p.data_pattern = best->data_pattern;
    }
    peaks.push_back(std::move(p));
  }
  return peaks;
}

void write_spectrum_csv(std::ostream &os, const Spectrum &spec) {
  os << "freq_hz,real,imag,magnitude\n";
  char buf[160];
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const Complex v = spec.values()[i];
    std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e,%.16e\n", spec.freqs()[i], v.real(),
                  v.imag(), std::abs(v));
    os << buf;
  }
}

Spectrum read_spectrum_csv(std::istream &is, DisplayMode mode) {
  std::string line;
  if (!std::getline(is, line) || line != "freq_hz,real,imag,magnitude")
    throw Error("spectrum table must start with header freq_hz,real,imag,magnitude");
  std::vector<double> freqs;
  std::vector<Complex> values;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty())
      continue;
    double f = 0, re = 0, im = 0, mag = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &f, &re, &im, &mag) != 4)
      throw Error("malformed spectrum row " + std::to_string(row));
    freqs.push_back(f);
    values.emplace_back(re, im);
  }
  return Spectrum(std::move(freqs), std::move(values), mode);
}

}  // namespace nmrdj
