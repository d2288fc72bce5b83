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

#ifndef TLRD_VOLUME_IO_HPP
#define TLRD_VOLUME_IO_HPP

#include <array>
#include <filesystem>
#include <utility>

#include "tlrd/tensor.hpp"

namespace tlrd {

enum class ElementType { u8, i16, f32 };

std::string to_string(ElementType type);

struct VolumeMeta {
  std::array<Index, 3> dims{0, 0, 0};
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
  ElementType element_type = ElementType::f32;
  /// Affine normalization applied to the stored values, recorded so a
  /// pipeline can restore original intensities: original = stored * scale +
  /// offset.
  double intensity_offset = 0.0;
  double intensity_scale = 1.0;
};

/// Read a volume from a text header paired with a raw little-endian data
/// file (MetaImage-style: NDims, DimSize, ElementSpacing, ElementType,
/// ElementDataFile). Values widen losslessly into the double tensor.
std::pair<Tensor3, VolumeMeta> read_volume(const std::filesystem::path& path);

/// Write the header/raw pair. meta.dims must match the tensor; values are
/// cast to the stored element type. The round trip is bit-exact for values
/// representable in that type.
void write_volume(const std::filesystem::path& path, const Tensor3& x,
                  const VolumeMeta& meta);

struct Normalized {
  Tensor3 tensor;
  double offset = 0.0;
  double scale = 1.0;
};

/// Affine map of the value range onto [0, 1] (min -> 0, max -> 1). A
/// constant input maps to all zeros with scale 1 and offset equal to the
/// constant.
Normalized normalize(const Tensor3& x);

/// Inverse of normalize: x * scale + offset.
Tensor3 denormalize(const Tensor3& x, double offset, double scale);

}  // namespace tlrd

#endif  // TLRD_VOLUME_IO_HPP
