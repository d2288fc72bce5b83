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

#include <cmath>
#include <random>

#include "doctest.h"
#include "test_helpers.hpp"
#include "tlrd/metrics.hpp"

using namespace tlrd;
using testing::random_tensor;

namespace {

LabelVolume full_mask(Index n1, Index n2, Index n3) {
  LabelVolume m(n1, n2, n3);
  for (Index k = 0; k < n3; ++k) {
    for (Index j = 0; j < n2; ++j) {
      for (Index i = 0; i < n1; ++i) m.set(i, j, k, true);
    }
  }
  return m;
}

LabelVolume random_mask(Index n, std::uint64_t seed, double fill = 0.3,
                        std::array<double, 3> spacing = {1, 1, 1}) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  LabelVolume m(n, n, n, spacing);
  for (Index k = 0; k < n; ++k) {
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) m.set(i, j, k, uni(rng) < fill);
    }
  }
  return m;
}

/// All-pairs brute-force oracle for the surface distance, sharing only the
/// surface definition with the implementation under test.
double asd_brute_force(const LabelVolume& a, const LabelVolume& b) {
  const auto spacing = a.spacing();
  auto surface = [](const LabelVolume& m) {
    std::vector<std::array<Index, 3>> out;
    auto inside = [&](Index i, Index j, Index k) {
      return i >= 0 && i < m.n1() && j >= 0 && j < m.n2() && k >= 0 &&
             k < m.n3() && m.at(i, j, k);
    };
    for (Index k = 0; k < m.n3(); ++k) {
      for (Index j = 0; j < m.n2(); ++j) {
        for (Index i = 0; i < m.n1(); ++i) {
          if (!m.at(i, j, k)) continue;
          if (!inside(i - 1, j, k) || !inside(i + 1, j, k) ||
              !inside(i, j - 1, k) || !inside(i, j + 1, k) ||
              !inside(i, j, k - 1) || !inside(i, j, k + 1)) {
            out.push_back({i, j, k});
          }
        }
      }
    }
    return out;
  };
  const auto sa = surface(a);
  const auto sb = surface(b);
  auto shortest = [&](const std::array<Index, 3>& v,
                      const std::vector<std::array<Index, 3>>& set) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& w : set) {
      const double di = static_cast<double>(v[0] - w[0]) * spacing[0];
      const double dj = static_cast<double>(v[1] - w[1]) * spacing[1];
      const double dk = static_cast<double>(v[2] - w[2]) * spacing[2];
      best = std::min(best, std::sqrt(di * di + dj * dj + dk * dk));
    }
    return best;
  };
  double total = 0;
  for (const auto& v : sa) total += shortest(v, sb);
  for (const auto& v : sb) total += shortest(v, sa);
  return total / static_cast<double>(sa.size() + sb.size());
}

}  // namespace

TEST_CASE("masked stats of a constant region") {
  Tensor3 x(4, 4, 4);
  x.array() += 5.0;
  const MaskedStats s = masked_stats(x, full_mask(4, 4, 4));
  CHECK(s.sigma == 0.0);
  CHECK(s.entropy_bits == 0.0);
  CHECK(s.voxel_count == 64);
}

TEST_CASE("two equal-count levels give one bit of entropy") {
  Tensor3 x(4, 4, 2);
  for (Index j = 0; j < 4; ++j) {
    for (Index i = 0; i < 4; ++i) {
      x(i, j, 0) = 1.0;
      x(i, j, 1) = 2.0;
    }
  }
  const MaskedStats s = masked_stats(x, full_mask(4, 4, 2), 16);
  CHECK(s.entropy_bits == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.sigma == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("entropy is invariant under affine rescaling") {
  const Tensor3 x = random_tensor(8, 8, 8, 443);
  const LabelVolume mask = full_mask(8, 8, 8);
  const MaskedStats base = masked_stats(x, mask);
  Tensor3 y = x;
  y.array() = 3.5 * y.array() + 11.0;
  const MaskedStats scaled = masked_stats(y, mask);
  CHECK(scaled.entropy_bits ==
        doctest::Approx(base.entropy_bits).epsilon(1e-9));
  CHECK(scaled.sigma == doctest::Approx(3.5 * base.sigma).epsilon(1e-9));
}

TEST_CASE("masked stats entropy is bounded by log2(bins)") {
  const Tensor3 x = random_tensor(10, 10, 10, 449);
  const MaskedStats s = masked_stats(x, full_mask(10, 10, 10), 8);
  CHECK(s.entropy_bits <= 3.0 + 1e-12);
}

TEST_CASE("empty mask is an error") {
  const Tensor3 x = random_tensor(3, 3, 3, 457);
  const LabelVolume empty(3, 3, 3);
  CHECK_THROWS_AS(masked_stats(x, empty), UndefinedStatError);
  CHECK_THROWS_AS(masked_stats(x, full_mask(2, 2, 2)), ShapeError);
}

TEST_CASE("ncc of an image with itself and its negation") {
  const Tensor3 x = random_tensor(6, 6, 6, 461);
  CHECK(ncc(x, x) == doctest::Approx(1.0).epsilon(1e-12));
  Tensor3 neg = x;
  neg.array() *= -1.0;
  CHECK(ncc(x, neg) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("ncc is invariant under positive affine maps") {
  const Tensor3 x = random_tensor(6, 6, 6, 463);
  Tensor3 y = x;
  y.array() = 2.25 * y.array() - 4.0;
  CHECK(ncc(x, y) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("ncc is symmetric and respects regions") {
  const Tensor3 a = random_tensor(6, 6, 6, 467);
  const Tensor3 b = random_tensor(6, 6, 6, 479);
  CHECK(ncc(a, b) == doctest::Approx(ncc(b, a)).epsilon(1e-12));

  const LabelVolume region = random_mask(6, 487, 0.4);
  CHECK(ncc(a, b, region) == doctest::Approx(ncc(b, a, region))
                                 .epsilon(1e-12));
  CHECK(ncc(a, b, region) >= -1.0);
  CHECK(ncc(a, b, region) <= 1.0);
}

TEST_CASE("ncc of a constant image is undefined") {
  const Tensor3 x = random_tensor(4, 4, 4, 491);
  Tensor3 flat(4, 4, 4);
  flat.array() += 2.0;
  CHECK_THROWS_AS(ncc(x, flat), UndefinedStatError);
}

TEST_CASE("dice and jaccard on simple masks") {
  LabelVolume a(4, 4, 4), b(4, 4, 4);
  a.set(0, 0, 0, true);
  b.set(0, 0, 0, true);
  CHECK(dice(a, b) == 100.0);
  CHECK(jaccard(a, b) == 100.0);

  b.set(0, 0, 0, false);
  b.set(1, 1, 1, true);
  CHECK(dice(a, b) == 0.0);
  CHECK(jaccard(a, b) == 0.0);

  CHECK(dice(LabelVolume(2, 2, 2), LabelVolume(2, 2, 2)) == 100.0);
}

TEST_CASE("dice and jaccard arithmetic") {
  // |A| = |B| = 100 with 80 shared voxels: the formulas give
  // DC = 100 * 160/200 = 80 and JI = 100 * 80/120 = 66.66...
  LabelVolume a(10, 10, 10), b(10, 10, 10);
  Index placed = 0;
  for (Index k = 0; k < 10 && placed < 100; ++k) {
    for (Index j = 0; j < 10 && placed < 100; ++j) {
      for (Index i = 0; i < 10 && placed < 100; ++i) {
        a.set(i, j, k, true);
        ++placed;
      }
    }
  }
  Index copied = 0, skipped = 0, added = 0;
  for (Index k = 0; k < 10; ++k) {
    for (Index j = 0; j < 10; ++j) {
      for (Index i = 0; i < 10; ++i) {
        if (a.at(i, j, k)) {
          if (copied < 80) {
            b.set(i, j, k, true);
            ++copied;
          } else {
            ++skipped;
          }
        } else if (added < 20) {
          b.set(i, j, k, true);
          ++added;
        }
      }
    }
  }
  REQUIRE(a.count() == 100);
  REQUIRE(b.count() == 100);
  CHECK(dice(a, b) == doctest::Approx(80.0).epsilon(1e-12));
  CHECK(jaccard(a, b) == doctest::Approx(200.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("dice equals 2J/(1+J) on random mask pairs") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const LabelVolume a = random_mask(8, 700 + seed);
    const LabelVolume b = random_mask(8, 800 + seed);
    const double j = jaccard(a, b) / 100.0;
    const double d = dice(a, b) / 100.0;
    CHECK(d == doctest::Approx(2.0 * j / (1.0 + j)).epsilon(1e-9));
    CHECK(d >= j - 1e-12);
  }
}

TEST_CASE("asd of identical masks is zero") {
  const LabelVolume a = random_mask(8, 503, 0.3);
  if (a.count() > 0) {
    CHECK(asd(a, a) == 0.0);
  }
}

TEST_CASE("asd of two single voxels with anisotropic spacing") {
  LabelVolume a(4, 4, 4, {2.0, 1.0, 1.0});
  LabelVolume b(4, 4, 4, {2.0, 1.0, 1.0});
  a.set(1, 1, 1, true);
  b.set(2, 1, 1, true);  // one voxel apart along the first axis
  CHECK(asd(a, b) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("asd matches the all-pairs brute-force oracle") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const std::array<double, 3> spacing{1.0 + 0.25 * (seed % 3), 1.0,
                                        0.5 + 0.5 * (seed % 2)};
    LabelVolume a = random_mask(9, 900 + seed, 0.2, spacing);
    LabelVolume b = random_mask(9, 950 + seed, 0.2, spacing);
    if (a.count() == 0) a.set(0, 0, 0, true);
    if (b.count() == 0) b.set(1, 1, 1, true);
    CHECK(asd(a, b) == doctest::Approx(asd_brute_force(a, b)).epsilon(1e-9));
  }
}

TEST_CASE("asd is symmetric and validates input") {
  const LabelVolume a = random_mask(6, 521, 0.3);
  const LabelVolume b = random_mask(6, 523, 0.3);
  CHECK(asd(a, b) == doctest::Approx(asd(b, a)).epsilon(1e-12));
  CHECK_THROWS_AS(asd(a, LabelVolume(6, 6, 6)), UndefinedStatError);
  CHECK_THROWS_AS(asd(a, random_mask(5, 1, 0.3)), ShapeError);
  CHECK_THROWS_AS(asd(a, random_mask(6, 1, 0.3, {2, 1, 1})),
                  InvalidArgument);
}
