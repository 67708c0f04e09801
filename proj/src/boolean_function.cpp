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

#include "nmrdj/boolean_function.hpp"

#include <algorithm>

#include "nmrdj/spin_system.hpp"

namespace nmrdj {

std::string to_string(Classification c) {
  switch (c) {
    case Classification::constant:
      return "constant";
    case Classification::balanced:
      return "balanced";
    case Classification::neither:
      return "neither";
  }
  return "?";
}

BooleanFunction::BooleanFunction(int arity, std::vector<std::uint8_t> table)
    : arity_(arity), table_(std::move(table)) {
  if (arity_ < 0 || arity_ > 20)
    throw Error("function arity " + std::to_string(arity_) + " unsupported");
  if (table_.size() != (std::size_t{1} << arity_))
    throw Error("truth table of arity " + std::to_string(arity_) + " must have " +
                std::to_string(std::size_t{1} << arity_) + " entries, got " +
                std::to_string(table_.size()));
  for (auto &v : table_)
    if (v > 1)
      throw Error("truth table entries must be 0 or 1");
}

BooleanFunction BooleanFunction::parse(std::string_view bits) {
  std::string s(bits);
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')')
    s = s.substr(1, s.size() - 2);
  int arity = 0;
  while ((std::size_t{1} << arity) < s.size())
    ++arity;
  if (s.size() < 2 || (std::size_t{1} << arity) != s.size())
    throw Error("function notation '" + std::string(bits) +
                "' must have a power-of-two length >= 2");
  std::vector<std::uint8_t> table;
  for (char c : s) {
    if (c != '0' && c != '1')
      throw Error("function notation '" + std::string(bits) + "' must contain only 0 and 1");
    table.push_back(c == '1');
  }
  return BooleanFunction(arity, std::move(table));
}

BooleanFunction BooleanFunction::constant(int arity, bool value) {
  return BooleanFunction(arity, std::vector<std::uint8_t>(std::size_t{1} << arity, value));
}

BooleanFunction BooleanFunction::projection(int arity, int bit) {
  if (bit < 0 || bit >= arity)
    throw Error("projection bit " + std::to_string(bit) + " out of range");
  std::vector<std::uint8_t> table(std::size_t{1} << arity);
  for (std::size_t x = 0; x < table.size(); ++x)
    table[x] = (x >> (arity - 1 - bit)) & 1u;
  return BooleanFunction(arity, std::move(table));
}

bool BooleanFunction::operator()(std::string_view input_bits) const {
  if (static_cast<int>(input_bits.size()) != arity_)
    throw Error("function input '" + std::string(input_bits) + "' does not match arity " +
                std::to_string(arity_));
  std::size_t x = 0;
  for (char c : input_bits) {
    if (c != '0' && c != '1')
      throw Error("function input must be a bit string");
    x = (x << 1) | static_cast<std::size_t>(c == '1');
  }
  return (*this)(x);
}

std::string BooleanFunction::notation() const {
  std::string s;
  for (auto v : table_)
    s.push_back(v ? '1' : '0');
  return s;
}

std::size_t BooleanFunction::ones() const {
  return static_cast<std::size_t>(std::count(table_.begin(), table_.end(), 1));
}

Classification classify(const BooleanFunction &f) {
  const std::size_t ones = f.ones();
  if (ones == 0 || ones == f.size())
    return Classification::constant;
  if (2 * ones == f.size())
    return Classification::balanced;
  return Classification::neither;
}

std::pair<std::uint64_t, std::uint64_t> count_functions(int k) {
  if (k < 1 || k > 5)
    throw Error("count_functions supports 1 <= k <= 5");
  const std::uint64_t n = std::uint64_t{1} << k;
  // C(n, n/2) by the multiplicative formula; exact for n <= 32
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i <= n / 2; ++i)
    c = c * (n / 2 + i) / i;
  return {2, c};
}

std::vector<BooleanFunction> all_functions(int arity) {
  if (arity < 1 || arity > 4)
    throw Error("all_functions supports 1 <= arity <= 4");
  const std::size_t len = std::size_t{1} << arity;
  const std::size_t count = std::size_t{1} << len;
  std::vector<BooleanFunction> out;
  out.reserve(count);
  for (std::size_t code = 0; code < count; ++code) {
    std::vector<std::uint8_t> table(len);
    for (std::size_t x = 0; x < len; ++x)
      table[x] = (code >> (len - 1 - x)) & 1u;
    out.emplace_back(arity, std::move(table));
  }
  return out;
}

}  // namespace nmrdj
