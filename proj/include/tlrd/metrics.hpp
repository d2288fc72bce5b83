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

#ifndef TLRD_METRICS_HPP
#define TLRD_METRICS_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "tlrd/tensor.hpp"

namespace tlrd {

/// Binary voxel mask with physical voxel spacing in millimeters. Same
/// index layout as Tensor3.
class LabelVolume {
 public:
  LabelVolume() = default;
  LabelVolume(Index n1, Index n2, Index n3,
              std::array<double, 3> spacing = {1.0, 1.0, 1.0});

  /// Voxels of x with value > threshold become foreground.
  static LabelVolume from_tensor(const Tensor3& x, double threshold = 0.5,
                                 std::array<double, 3> spacing = {1.0, 1.0,
                                                                  1.0});

  Index n1() const { return n1_; }
  Index n2() const { return n2_; }
  Index n3() const { return n3_; }
  const std::array<double, 3>& spacing() const { return spacing_; }

  bool at(Index i, Index j, Index k) const {
    return voxels_[static_cast<std::size_t>(i + j * n1_ + k * n1_ * n2_)] !=
           0;
  }
  void set(Index i, Index j, Index k, bool value) {
    voxels_[static_cast<std::size_t>(i + j * n1_ + k * n1_ * n2_)] =
        value ? 1 : 0;
  }

  std::span<const std::uint8_t> voxels() const { return voxels_; }
  Index count() const;
  bool same_dims(const LabelVolume& other) const {
    return n1_ == other.n1_ && n2_ == other.n2_ && n3_ == other.n3_;
  }
  bool dims_match(const Tensor3& x) const {
    return n1_ == x.n1() && n2_ == x.n2() && n3_ == x.n3();
  }

  Tensor3 to_tensor() const;

 private:
  Index n1_ = 0, n2_ = 0, n3_ = 0;
  std::array<double, 3> spacing_{1.0, 1.0, 1.0};
  std::vector<std::uint8_t> voxels_;
};

struct MaskedStats {
  /// Population standard deviation over the masked voxels.
  double sigma = 0.0;
  /// Shannon entropy in bits of the histogram over the masked value range.
  double entropy_bits = 0.0;
  Index voxel_count = 0;
  Index bin_count = 0;
};

/// Intensity statistics of x within the mask. The histogram covers the
/// masked [min, max] range, so the entropy is invariant under affine
/// intensity rescaling. Throws UndefinedStatError for an empty mask.
MaskedStats masked_stats(const Tensor3& x, const LabelVolume& mask,
                         Index bins = 256);

/// Normalized cross correlation over the whole volume or over a region;
/// result in [-1, 1]. Either image being constant on the region makes the
/// denominator vanish and throws UndefinedStatError.
double ncc(const Tensor3& a, const Tensor3& b);
double ncc(const Tensor3& a, const Tensor3& b, const LabelVolume& region);

/// Dice coefficient 100 * 2|A^B| / (|A| + |B|). Two empty masks score 100.
double dice(const LabelVolume& a, const LabelVolume& b);

/// Jaccard index 100 * |A^B| / |AvB|. Two empty masks score 100.
double jaccard(const LabelVolume& a, const LabelVolume& b);

/// Average symmetric surface distance in millimeters: the mean over both
/// surface voxel sets of the shortest Euclidean distance to the other
/// surface. Surface voxels are mask voxels with at least one six-connected
/// background neighbor (out-of-volume counts as background). Both masks
/// must be nonempty and share dimensions and spacing.
double asd(const LabelVolume& a, const LabelVolume& b);

}  // namespace tlrd

#endif  // TLRD_METRICS_HPP
