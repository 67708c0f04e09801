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

#ifndef NMRDJ_DETECT_HPP
#define NMRDJ_DETECT_HPP

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nmrdj/pulses.hpp"
#include "nmrdj/spin_system.hpp"
#include "nmrdj/states.hpp"

namespace nmrdj {

enum class DisplayMode { phased, absolute };

std::string to_string(DisplayMode mode);
DisplayMode parse_display_mode(const std::string &s);

struct AcquisitionParams {
  std::size_t points = 8192;
  double dwell_s = 0.0;
  double t2_s = 0.02;

  double spectral_width_hz() const { return 1.0 / dwell_s; }
};

constexpr std::size_t kMinFidPoints = 1024;

// 8192 points, T2 = 20 ms, spectral width 1.25x the span of all transition frequencies
// (widened to 2.5x the largest |frequency| when that span would alias).
AcquisitionParams default_acquisition(const SpinSystem &sys);

// Throws unless points is a power of two >= 1024, dwell > 0, t2 > 0, and the spectral
// width exceeds twice the largest |transition frequency|.
void validate_acquisition(const AcquisitionParams &params, const SpinSystem &sys);

// U rho U+. The result keeps the trace convention and is marked derived.
DensityState apply(const Propagator &u, const DensityState &rho);

// A single-quantum coherence contributing to the signal: amplitude * exp(i 2 pi f t).
struct Line {
  int spin = 0;
  double freq_hz = 0.0;
  Complex amplitude;
  std::size_t alpha_index = 0;
  std::size_t beta_index = 0;
};

// Lines seen by the detector sum_i (Ix_i + i Iy_i) over `detect_spins` (all spins when
// empty). H must be diagonal.
std::vector<Line> line_list(const DensityState &rho, const Operator &hamiltonian,
                            std::span<const int> detect_spins = {});

struct Fid {
  std::vector<Complex> samples;
  double dwell_s = 0.0;
  double t2_s = 0.0;

  std::size_t points() const { return samples.size(); }
};

Fid operator-(const Fid &a, const Fid &b);
Fid operator*(Complex scale, const Fid &a);

// s_k = Tr(rho(t_k) sum_i I+_i) exp(-t_k / t2), t_k = k * dwell, evaluated line by line in
// the eigenbasis of the diagonal H.
Fid acquire_fid(const DensityState &rho, const Operator &hamiltonian,
                const AcquisitionParams &params, std::span<const int> detect_spins = {});

// Frequency axis of a centred spectrum: k / (points * dwell) for k in (-points/2, points/2].
std::vector<double> frequency_axis(std::size_t points, double dwell_s);

// Unnormalised DFT sum_k x_k exp(-i 2 pi f t_k) on frequency_axis ordering.
std::vector<Complex> centered_dft(std::span<const Complex> samples);

struct SpectrumOptions {
  double zero_order_phase = 0.0;  // radians, applied as exp(i phase)
  bool halve_first_point = true;
};

class Spectrum {
 public:
  Spectrum(std::vector<double> freqs, std::vector<Complex> values, DisplayMode mode);

  const std::vector<double> &freqs() const { return freqs_; }
  const std::vector<Complex> &values() const { return values_; }
  DisplayMode mode() const { return mode_; }
  std::size_t size() const { return values_.size(); }
  double bin_width() const;
  // Real part in phased mode, magnitude in absolute-value mode.
  double display(std::size_t i) const;
  std::vector<double> display_values() const;
  // Display value of the bin nearest to `freq_hz`.
  double display_at(double freq_hz) const;
  std::size_t nearest_bin(double freq_hz) const;
  Spectrum with_mode(DisplayMode mode) const { return Spectrum(freqs_, values_, mode); }

 private:
  std::vector<double> freqs_;
  std::vector<Complex> values_;
  DisplayMode mode_;
};

Spectrum spectrum(const Fid &fid, DisplayMode mode, const SpectrumOptions &options = {});

// Zero-order phase that makes the first FID point real and positive. Applied to a no-op
// thermal reference this renders every line absorptive and positive.
double reference_phase(const Fid &reference);

struct Peak {
  double freq_hz = 0.0;
  double amplitude = 0.0;  // display-mode value (signed in phased mode)
  std::optional<int> assigned_spin;
  std::optional<std::string> data_pattern;

  bool assigned() const { return assigned_spin.has_value(); }
};

// Local maxima of |display| at or above threshold * global max, each assigned to the nearest
// predicted transition lying within half the minimum line spacing.
std::vector<Peak> extract_peaks(const Spectrum &spec, double threshold,
                                const std::vector<std::vector<Transition>> &tables);

// freq_hz,real,imag,magnitude with 17 significant digits.
void write_spectrum_csv(std::ostream &os, const Spectrum &spec);
Spectrum read_spectrum_csv(std::istream &is, DisplayMode mode);

}  // namespace nmrdj

#endif  // NMRDJ_DETECT_HPP
