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

#include "tlrd/phantom.hpp"

#include <cmath>
#include <numbers>

namespace tlrd {

std::uint64_t SplitMix64::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::next_uniform() {
  // 53 high bits into [0, 1).
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SplitMix64::next_gauss() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = next_uniform();
  while (u1 <= 0.0) u1 = next_uniform();
  const double u2 = next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

namespace {

// Number of cosine harmonics mixed into the drifting spatial modes. Low
// harmonics only, so the modes change slowly relative to typical segment
// windows.
constexpr Index kDriftHarmonics = 3;

Eigen::VectorXd gauss_vector(SplitMix64& rng, Index n, double scale) {
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v(i) = scale * rng.next_gauss();
  return v;
}

/// Shared background volume: each slice is a rank-<=r combination of
/// drifting spatial modes.
Tensor3 make_background(const PhantomSpec& spec, SplitMix64& rng) {
  const Index r = spec.tubal_rank;
  const double entry_scale = 1.0 / std::sqrt(static_cast<double>(r));

  // Per mode: base direction plus slice_drift-scaled harmonics.
  std::vector<std::vector<Eigen::VectorXd>> rows(
      static_cast<std::size_t>(r));
  std::vector<std::vector<Eigen::VectorXd>> cols(
      static_cast<std::size_t>(r));
  for (Index q = 0; q < r; ++q) {
    auto& rq = rows[static_cast<std::size_t>(q)];
    auto& cq = cols[static_cast<std::size_t>(q)];
    rq.push_back(gauss_vector(rng, spec.n1, 1.0));
    cq.push_back(gauss_vector(rng, spec.n2, 1.0));
    for (Index p = 1; p <= kDriftHarmonics; ++p) {
      const double amp = spec.slice_drift / static_cast<double>(p);
      rq.push_back(gauss_vector(rng, spec.n1, amp));
      cq.push_back(gauss_vector(rng, spec.n2, amp));
    }
  }

  Tensor3 background(spec.n1, spec.n2, spec.d);
  Eigen::VectorXd u(spec.n1), v(spec.n2);
  for (Index k = 0; k < spec.d; ++k) {
    auto slice = background.slice(k);
    slice.setZero();
    for (Index q = 0; q < r; ++q) {
      const auto& rq = rows[static_cast<std::size_t>(q)];
      const auto& cq = cols[static_cast<std::size_t>(q)];
      u = rq[0];
      v = cq[0];
      for (Index p = 1; p <= kDriftHarmonics; ++p) {
        const double phase = std::cos(
            std::numbers::pi * static_cast<double>(p) *
            (static_cast<double>(k) + 0.5) / static_cast<double>(spec.d));
        u += phase * rq[static_cast<std::size_t>(p)];
        v += phase * cq[static_cast<std::size_t>(p)];
      }
      slice.noalias() += entry_scale * u * v.transpose();
    }
  }
  return background;
}

struct Ellipsoid {
  double ci, cj, ck;  // center (voxel units)
  double ri, rj, rk;  // semi-axes (voxel units)
  double offset;
};

Ellipsoid random_ellipsoid(const PhantomSpec& spec, SplitMix64& rng) {
  auto radius = [&](Index n) {
    const double max_r = std::max(3.0, static_cast<double>(n) / 8.0);
    return 2.0 + rng.next_uniform() * (max_r - 2.0);
  };
  Ellipsoid e;
  e.ci = rng.next_uniform() * static_cast<double>(spec.n1);
  e.cj = rng.next_uniform() * static_cast<double>(spec.n2);
  e.ck = rng.next_uniform() * static_cast<double>(spec.d);
  e.ri = radius(spec.n1);
  e.rj = radius(spec.n2);
  e.rk = radius(spec.d);
  e.offset = (rng.next_uniform() < 0.5 ? -1.0 : 1.0) * spec.sparse_magnitude;
  return e;
}

/// Paint blobs into the sparse truth until the voxel fraction is reached.
void paint_anomalies(const PhantomSpec& spec, SplitMix64& rng,
                     Tensor3& sparse, LabelVolume& mask) {
  const Index total = spec.n1 * spec.n2 * spec.d;
  const auto target = static_cast<Index>(
      spec.sparse_fraction * static_cast<double>(total));
  Index painted = 0;
  int attempts = 0;
  const int max_attempts = 4096;

  while (painted < target && attempts < max_attempts) {
    ++attempts;
    const Ellipsoid e = random_ellipsoid(spec, rng);
    const Index i0 = std::max<Index>(0, static_cast<Index>(e.ci - e.ri));
    const Index i1 = std::min(spec.n1 - 1,
                              static_cast<Index>(e.ci + e.ri) + 1);
    const Index j0 = std::max<Index>(0, static_cast<Index>(e.cj - e.rj));
    const Index j1 = std::min(spec.n2 - 1,
                              static_cast<Index>(e.cj + e.rj) + 1);
    const Index k0 = std::max<Index>(0, static_cast<Index>(e.ck - e.rk));
    const Index k1 = std::min(spec.d - 1,
                              static_cast<Index>(e.ck + e.rk) + 1);
    for (Index k = k0; k <= k1; ++k) {
      for (Index j = j0; j <= j1; ++j) {
        for (Index i = i0; i <= i1; ++i) {
          const double di = (static_cast<double>(i) + 0.5 - e.ci) / e.ri;
          const double dj = (static_cast<double>(j) + 0.5 - e.cj) / e.rj;
          const double dk = (static_cast<double>(k) + 0.5 - e.ck) / e.rk;
          if (di * di + dj * dj + dk * dk > 1.0) continue;
          if (!mask.at(i, j, k)) {
            mask.set(i, j, k, true);
            ++painted;
          }
          sparse(i, j, k) = e.offset;
        }
      }
    }
  }
}

}  // namespace

Phantom make_phantom(const PhantomSpec& spec) {
  if (spec.n1 < 1 || spec.n2 < 1 || spec.d < 1 || spec.n_volumes < 1) {
    throw InvalidArgument("make_phantom: dimensions must be >= 1");
  }
  if (spec.tubal_rank < 1 || spec.tubal_rank > std::min(spec.n1, spec.n2)) {
    throw InvalidArgument(
        "make_phantom: tubal rank must be in [1, min(n1, n2)]");
  }
  if (spec.sparse_fraction < 0 || spec.sparse_fraction > 1) {
    throw InvalidArgument("make_phantom: sparse fraction must be in [0, 1]");
  }

  SplitMix64 rng(spec.seed);
  const Tensor3 background = make_background(spec, rng);

  Phantom out;
  out.volumes.reserve(static_cast<std::size_t>(spec.n_volumes));
  out.truth_low_rank.reserve(static_cast<std::size_t>(spec.n_volumes));
  out.truth_sparse.reserve(static_cast<std::size_t>(spec.n_volumes));
  out.anomaly_masks.reserve(static_cast<std::size_t>(spec.n_volumes));

  for (Index i = 0; i < spec.n_volumes; ++i) {
    Tensor3 sparse(spec.n1, spec.n2, spec.d);
    LabelVolume mask(spec.n1, spec.n2, spec.d);
    if (spec.sparse_fraction > 0 && spec.sparse_magnitude != 0) {
      paint_anomalies(spec, rng, sparse, mask);
    }
    Tensor3 volume = background;
    volume.array() += sparse.array();

    out.volumes.push_back(std::move(volume));
    out.truth_low_rank.push_back(background);
    out.truth_sparse.push_back(std::move(sparse));
    out.anomaly_masks.push_back(std::move(mask));
  }
  return out;
}

}  // namespace tlrd
