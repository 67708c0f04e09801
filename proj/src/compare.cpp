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

#include "nmrdj/compare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

namespace nmrdj {

namespace {

std::vector<double> peak_freqs(const Spectrum &s, double threshold) {
  std::vector<double> out;
  for (const auto &p : extract_peaks(s.with_mode(DisplayMode::absolute), threshold, {}))
    out.push_back(p.freq_hz);
  return out;
}

Spectrum load(const std::filesystem::path &p) {
  std::ifstream in(p);
  if (!in)
    throw Error("cannot open spectrum table " + p.string());
  try {
    return read_spectrum_csv(in, DisplayMode::absolute);
  } catch (const Error &e) {
    throw Error(p.string() + ": " + e.what());
  }
}

std::vector<std::string> csv_names(const std::filesystem::path &dir) {
  std::vector<std::string> out;
  for (const auto &e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".csv")
      out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

SpectrumDiff compare_spectra(const Spectrum &a, const Spectrum &b, const CompareOptions &options,
                             const std::string &name) {
  if (a.size() != b.size())
    throw Error("axis mismatch: " + std::to_string(a.size()) + " vs " +
                std::to_string(b.size()) + " points");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.freqs()[i] != b.freqs()[i])
      throw Error("axis mismatch at point " + std::to_string(i));

  SpectrumDiff d;
  d.name = name;
  if (options.normalize) {
    Complex num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      num += std::conj(b.values()[i]) * a.values()[i];
      den += std::norm(b.values()[i]);
    }
    if (den > 0.0)
      d.scale = num / den;
  }
  double amax = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d.max_abs = std::max(d.max_abs, std::abs(a.values()[i] - d.scale * b.values()[i]));
    amax = std::max(amax, std::abs(a.values()[i]));
  }
  d.max_rel = amax > 0.0 ? d.max_abs / amax
                         : (d.max_abs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());

  const auto pa = peak_freqs(a, options.peak_threshold);
  const auto pb = peak_freqs(b, options.peak_threshold);
  std::set_difference(pa.begin(), pa.end(), pb.begin(), pb.end(),
                      std::back_inserter(d.peaks_only_a));
  std::set_difference(pb.begin(), pb.end(), pa.begin(), pa.end(),
                      std::back_inserter(d.peaks_only_b));
  d.pass = d.max_rel <= options.tolerance;
  return d;
}

CompareReport compare_paths(const std::filesystem::path &a, const std::filesystem::path &b,
                            const CompareOptions &options) {
  for (const auto &p : {a, b})
    if (!std::filesystem::exists(p))
      throw Error("no such file or directory: " + p.string());
  CompareReport r;
  const bool da = std::filesystem::is_directory(a);
  const bool db = std::filesystem::is_directory(b);
  if (da != db)
    throw Error("compare needs two files or two directories");
  if (!da) {
    r.spectra.push_back(compare_spectra(load(a), load(b), options, a.filename().string()));
  } else {
    const auto na = csv_names(a);
    const auto nb = csv_names(b);
    std::set_difference(na.begin(), na.end(), nb.begin(), nb.end(),
                        std::back_inserter(r.only_in_a));
    std::set_difference(nb.begin(), nb.end(), na.begin(), na.end(),
                        std::back_inserter(r.only_in_b));
    for (const auto &n : na)
      if (std::binary_search(nb.begin(), nb.end(), n))
        r.spectra.push_back(compare_spectra(load(a / n), load(b / n), options, n));
    if (r.spectra.empty() && r.only_in_a.empty() && r.only_in_b.empty())
      throw Error("no spectrum tables found in " + a.string());
  }
  r.pass = r.only_in_a.empty() && r.only_in_b.empty();
  for (const auto &s : r.spectra)
    r.pass = r.pass && s.pass;
  return r;
}

void print_report(std::ostream &os, const CompareReport &report, const CompareOptions &options) {
  char buf[256];
  for (const auto &s : report.spectra) {
    std::snprintf(buf, sizeof buf, "%s: max_abs %.6e max_rel %.6e", s.name.c_str(), s.max_abs,
                  s.max_rel);
    os << buf;
    if (options.normalize) {
      std::snprintf(buf, sizeof buf, " scale (%.6g, %.6g)", s.scale.real(), s.scale.imag());
      os << buf;
    }
    os << " peaks +" << s.peaks_only_a.size() << "/-" << s.peaks_only_b.size() << ' '
       << (s.pass ? "PASS" : "FAIL") << '\n';
    for (double f : s.peaks_only_a) {
      std::snprintf(buf, sizeof buf, "  only in first:  %.6g Hz\n", f);
      os << buf;
    }
    for (double f : s.peaks_only_b) {
      std::snprintf(buf, sizeof buf, "  only in second: %.6g Hz\n", f);
      os << buf;
    }
  }
  for (const auto &n : report.only_in_a)
    os << "missing from second run: " << n << '\n';
  for (const auto &n : report.only_in_b)
    os << "missing from first run: " << n << '\n';
  std::snprintf(buf, sizeof buf, "tolerance %.3e: %s\n", options.tolerance,
                report.pass ? "PASS" : "FAIL");
  os << buf;
}

}  // namespace nmrdj
