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

#ifndef TLRD_PHANTOM_HPP
#define TLRD_PHANTOM_HPP

#include <cstdint>
#include <vector>

#include "tlrd/metrics.hpp"
#include "tlrd/tensor.hpp"

namespace tlrd {

/// Deterministic counter-based random stream (splitmix64). Fixed here so
/// phantoms are reproducible from the seed alone.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  /// Uniform in [0, 1).
  double next_uniform();
  /// Standard normal via the Box-Muller transform.
  double next_gauss();

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

struct PhantomSpec {
  Index n1 = 64;
  Index n2 = 64;
  Index d = 30;            ///< slices per volume
  Index tubal_rank = 5;    ///< rank of the shared background
  Index n_volumes = 1;
  double sparse_fraction = 0.05;  ///< target anomaly voxel fraction in [0,1]
  double sparse_magnitude = 1.0;  ///< blob intensity offset (random sign)
  /// Rate of smooth background change along the slice axis. 0 gives a
  /// background that is exactly low rank under any transform; larger values
  /// keep short slice windows near-low-rank while raising the effective
  /// rank of the whole volume.
  double slice_drift = 0.0;
  std::uint64_t seed = 0;
};

struct Phantom {
  std::vector<Tensor3> volumes;
  std::vector<Tensor3> truth_low_rank;
  std::vector<Tensor3> truth_sparse;
  std::vector<LabelVolume> anomaly_masks;
};

/// Synthetic volume stack with known ground truth, volume = background +
/// anomalies exactly.
///
/// The background is shared by all volumes: slice k is a rank-r sum of
/// spatial modes u_q(k) v_q(k)^T whose directions are fixed for
/// slice_drift = 0 and sweep smoothly along k (low-order cosine mixing,
/// amplitude proportional to slice_drift) otherwise. Anomalies are random
/// ellipsoids per volume, each with a constant intensity offset of
/// magnitude sparse_magnitude and random sign, generated until the target
/// voxel fraction is reached.
Phantom make_phantom(const PhantomSpec& spec);

}  // namespace tlrd

#endif  // TLRD_PHANTOM_HPP
