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

#include "nmrdj/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace nmrdj {

namespace {

constexpr double kWidth = 900.0;
constexpr double kHeight = 300.0;
constexpr double kMargin = 40.0;

std::string escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

void write_spectrum_svg(std::ostream &os, const Spectrum &spec, const std::string &title) {
  const std::vector<double> y = spec.display_values();
  const double fmin = spec.freqs().front();
  const double fmax = spec.freqs().back();
  double lo = 0.0;
  double hi = 0.0;
  for (double v : y) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi == lo)
    hi = lo + 1.0;
  const double pw = kWidth - 2 * kMargin;
  const double ph = kHeight - 2 * kMargin;
  auto px = [&](double f) { return kMargin + (fmax - f) / (fmax - fmin) * pw; };
  auto py = [&](double v) { return kMargin + (hi - v) / (hi - lo) * ph; };

  char buf[128];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kMargin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">"
     << escape(title) << " (" << to_string(spec.mode()) << ")</text>\n";
  std::snprintf(buf, sizeof buf, "%.2f", py(0.0));
  os << "<line x1=\"" << kMargin << "\" x2=\"" << kWidth - kMargin << "\" y1=\"" << buf
     << "\" y2=\"" << buf << "\" stroke=\"#bbb\"/>\n";
  os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"0.8\" points=\"";
  for (std::size_t i = 0; i < y.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(spec.freqs()[i]), py(y[i]));
    os << buf;
  }
  os << "\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double f = fmax - (fmax - fmin) * k / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"11\" "
                  "text-anchor=\"middle\">%.0f</text>\n",
                  px(f), kHeight - 12.0, f);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "%.2f", kWidth / 2);
  os << "<text x=\"" << buf << "\" y=\"" << kHeight - 1.0
     << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">Hz</text>\n";
  os << "</svg>\n";
}

}  // namespace nmrdj
