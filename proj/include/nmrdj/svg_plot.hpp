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

#ifndef NMRDJ_SVG_PLOT_HPP
#define NMRDJ_SVG_PLOT_HPP

#include <iosfwd>
#include <string>

#include "nmrdj/detect.hpp"

namespace nmrdj {

// Static line plot of the display values, frequency decreasing to the right.
void write_spectrum_svg(std::ostream &os, const Spectrum &spec, const std::string &title);

}  // namespace nmrdj

#endif  // NMRDJ_SVG_PLOT_HPP
