/*
 * Copyright 2026 the tlrd authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TLRD_TEST_HELPERS_HPP
#define TLRD_TEST_HELPERS_HPP

#include <random>

#include "tlrd/tensor.hpp"

namespace tlrd::testing {

inline Tensor3 random_tensor(Index n1, Index n2, Index n3,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Tensor3 out(n1, n2, n3);
  for (auto& v : out.data()) v = gauss(rng);
  return out;
}

inline Tensor3 uniform_tensor(Index n1, Index n2, Index n3,
                              std::uint64_t seed, double lo = 0.0,
                              double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(lo, hi);
  Tensor3 out(n1, n2, n3);
  for (auto& v : out.data()) v = uni(rng);
  return out;
}

inline double rel_error(const Tensor3& got, const Tensor3& want) {
  Tensor3 diff = got;
  diff.array() -= want.array();
  const double denom = fro_norm(want);
  return denom == 0 ? fro_norm(diff) : fro_norm(diff) / denom;
}

inline double max_abs_diff(const Tensor3& a, const Tensor3& b) {
  return (a.array() - b.array()).abs().maxCoeff();
}

}  // namespace tlrd::testing

#endif  // TLRD_TEST_HELPERS_HPP
