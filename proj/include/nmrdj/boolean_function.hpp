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

#ifndef NMRDJ_BOOLEAN_FUNCTION_HPP
#define NMRDJ_BOOLEAN_FUNCTION_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nmrdj {

enum class Classification { constant, balanced, neither };

std::string to_string(Classification c);

// f: {0,1}^k -> {0,1} stored as a truth table ordered by input value, input 00...0 first
// and the first input bit most significant.
class BooleanFunction {
 public:
  BooleanFunction(int arity, std::vector<std::uint8_t> table);

  // Parenthesis notation, e.g. "0110" for k = 2. Length must be a power of two >= 2.
  static BooleanFunction parse(std::string_view bits);
  static BooleanFunction constant(int arity, bool value);
  // f(x) = x_bit, the projection onto one input bit (0 = first / most significant).
  static BooleanFunction projection(int arity, int bit);

  int arity() const { return arity_; }
  std::size_t size() const { return table_.size(); }
  bool operator()(std::size_t input) const { return table_.at(input) != 0; }
  // Input given as a bit string of length arity.
  bool operator()(std::string_view input_bits) const;
  const std::vector<std::uint8_t> &table() const { return table_; }
  std::string notation() const;
  std::size_t ones() const;

  bool operator==(const BooleanFunction &) const = default;

 private:
  int arity_;
  std::vector<std::uint8_t> table_;
};

Classification classify(const BooleanFunction &f);

// (number of constant functions, number of balanced functions) on k input bits.
std::pair<std::uint64_t, std::uint64_t> count_functions(int k);

// Every function of the given arity in table order (arity <= 4).
std::vector<BooleanFunction> all_functions(int arity);

}  // namespace nmrdj

#endif  // NMRDJ_BOOLEAN_FUNCTION_HPP
