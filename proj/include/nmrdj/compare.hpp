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

#ifndef NMRDJ_COMPARE_HPP
#define NMRDJ_COMPARE_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nmrdj/detect.hpp"

namespace nmrdj {

struct CompareOptions {
  double tolerance = 1e-9;
  // Fit one complex scale c minimising |a - c b| before measuring the deviation.
  bool normalize = false;
  // Relative height for the peak-set diff (magnitude spectra).
  double peak_threshold = 0.1;
};

struct SpectrumDiff {
  std::string name;
  double max_abs = 0.0;
  // max |a - c b| / max |a|
  double max_rel = 0.0;
  Complex scale{1.0, 0.0};
  std::vector<double> peaks_only_a;
  std::vector<double> peaks_only_b;
  bool pass = false;
};

struct CompareReport {
  std::vector<SpectrumDiff> spectra;
  std::vector<std::string> only_in_a;
  std::vector<std::string> only_in_b;
  bool pass = false;
};

// Throws on axis mismatch.
SpectrumDiff compare_spectra(const Spectrum &a, const Spectrum &b, const CompareOptions &options,
                             const std::string &name = "");

// Two spectrum CSV files, or two run directories matched by file name.
CompareReport compare_paths(const std::filesystem::path &a, const std::filesystem::path &b,
                            const CompareOptions &options);

void print_report(std::ostream &os, const CompareReport &report, const CompareOptions &options);

}  // namespace nmrdj

#endif  // NMRDJ_COMPARE_HPP
