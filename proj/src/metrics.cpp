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

#include "tlrd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tlrd {

LabelVolume::LabelVolume(Index n1, Index n2, Index n3,
                         std::array<double, 3> spacing)
    : n1_(n1), n2_(n2), n3_(n3), spacing_(spacing) {
  if (n1 < 1 || n2 < 1 || n3 < 1) {
    throw InvalidArgument("label volume dimensions must be >= 1");
  }
  if (spacing[0] <= 0 || spacing[1] <= 0 || spacing[2] <= 0) {
    throw InvalidArgument("label volume spacing must be positive");
  }
  voxels_.assign(static_cast<std::size_t>(n1 * n2 * n3), 0);
}

LabelVolume LabelVolume::from_tensor(const Tensor3& x, double threshold,
                                     std::array<double, 3> spacing) {
  LabelVolume out(x.n1(), x.n2(), x.n3(), spacing);
  auto src = x.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    out.voxels_[i] = src[i] > threshold ? 1 : 0;
  }
  return out;
}

Index LabelVolume::count() const {
  Index c = 0;
  for (auto v : voxels_) c += v;
  return c;
}

Tensor3 LabelVolume::to_tensor() const {
  Tensor3 out(n1_, n2_, n3_);
  auto dst = out.data();
  for (std::size_t i = 0; i < voxels_.size(); ++i) {
    dst[i] = voxels_[i] ? 1.0 : 0.0;
  }
  return out;
}

MaskedStats masked_stats(const Tensor3& x, const LabelVolume& mask,
                         Index bins) {
  if (!mask.dims_match(x)) {
    throw ShapeError("masked_stats: mask and image dimensions differ");
  }
  if (bins < 1) throw InvalidArgument("masked_stats: bins must be >= 1");

  std::vector<double> values;
  auto src = x.data();
  auto msk = mask.voxels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (msk[i]) values.push_back(src[i]);
  }
  if (values.empty()) {
    throw UndefinedStatError("masked_stats: empty mask");
  }

  MaskedStats out;
  out.voxel_count = static_cast<Index>(values.size());
  out.bin_count = bins;

  double mean = 0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  out.sigma = std::sqrt(var);

  const auto [lo_it, hi_it] = std::minmax_element(values.begin(),
                                                  values.end());
  const double lo = *lo_it, hi = *hi_it;
  if (hi == lo) {
    out.entropy_bits = 0.0;
    return out;
  }
  std::vector<Index> hist(static_cast<std::size_t>(bins), 0);
  const double scale = static_cast<double>(bins) / (hi - lo);
  for (double v : values) {
    auto b = static_cast<Index>((v - lo) * scale);
    b = std::min(b, bins - 1);
    ++hist[static_cast<std::size_t>(b)];
  }
  double entropy = 0;
  const double n = static_cast<double>(values.size());
  for (Index c : hist) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    entropy -= p * std::log2(p);
  }
  out.entropy_bits = entropy;
  return out;
}

namespace {

double ncc_impl(const Tensor3& a, const Tensor3& b,
                const LabelVolume* region) {
  if (!a.same_dims(b)) {
    throw ShapeError("ncc: images must share dimensions");
  }
  if (region && !region->dims_match(a)) {
    throw ShapeError("ncc: region dimensions differ from images");
  }

  auto da = a.data();
  auto db = b.data();
  double sum_a = 0, sum_b = 0;
  Index n = 0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    if (region && !region->voxels()[i]) continue;
    sum_a += da[i];
    sum_b += db[i];
    ++n;
  }
  if (n == 0) throw UndefinedStatError("ncc: empty region");
  const double mean_a = sum_a / static_cast<double>(n);
  const double mean_b = sum_b / static_cast<double>(n);

  double cross = 0, var_a = 0, var_b = 0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    if (region && !region->voxels()[i]) continue;
    const double xa = da[i] - mean_a;
    const double xb = db[i] - mean_b;
    cross += xa * xb;
    var_a += xa * xa;
    var_b += xb * xb;
  }
  if (var_a == 0 || var_b == 0) {
    throw UndefinedStatError("ncc: constant image on the region");
  }
  return cross / (std::sqrt(var_a) * std::sqrt(var_b));
}

}  // namespace

double ncc(const Tensor3& a, const Tensor3& b) { return ncc_impl(a, b,
                                                                 nullptr); }

double ncc(const Tensor3& a, const Tensor3& b, const LabelVolume& region) {
  return ncc_impl(a, b, &region);
}

namespace {

struct OverlapCounts {
  Index a = 0, b = 0, both = 0;
};

OverlapCounts overlap(const LabelVolume& a, const LabelVolume& b) {
  if (!a.same_dims(b)) {
    throw ShapeError("mask overlap: dimensions differ");
  }
  OverlapCounts c;
  auto va = a.voxels();
  auto vb = b.voxels();
  for (std::size_t i = 0; i < va.size(); ++i) {
    c.a += va[i];
    c.b += vb[i];
    c.both += (va[i] && vb[i]) ? 1 : 0;
  }
  return c;
}

}  // namespace

double dice(const LabelVolume& a, const LabelVolume& b) {
  const OverlapCounts c = overlap(a, b);
  if (c.a + c.b == 0) return 100.0;
  return 100.0 * 2.0 * static_cast<double>(c.both) /
         static_cast<double>(c.a + c.b);
}

double jaccard(const LabelVolume& a, const LabelVolume& b) {
  const OverlapCounts c = overlap(a, b);
  const Index uni = c.a + c.b - c.both;
  if (uni == 0) return 100.0;
  return 100.0 * static_cast<double>(c.both) / static_cast<double>(uni);
}

namespace {

constexpr double kInf = 1e30;

/// Surface voxels: mask voxels with at least one six-connected background
/// neighbor; out-of-volume counts as background.
std::vector<std::uint8_t> surface_mask(const LabelVolume& m) {
  const Index n1 = m.n1(), n2 = m.n2(), n3 = m.n3();
  std::vector<std::uint8_t> surf(static_cast<std::size_t>(n1 * n2 * n3), 0);
  auto inside = [&](Index i, Index j, Index k) {
    return i >= 0 && i < n1 && j >= 0 && j < n2 && k >= 0 && k < n3 &&
           m.at(i, j, k);
  };
  for (Index k = 0; k < n3; ++k) {
    for (Index j = 0; j < n2; ++j) {
      for (Index i = 0; i < n1; ++i) {
        if (!m.at(i, j, k)) continue;
        const bool boundary =
            !inside(i - 1, j, k) || !inside(i + 1, j, k) ||
            !inside(i, j - 1, k) || !inside(i, j + 1, k) ||
            !inside(i, j, k - 1) || !inside(i, j, k + 1);
        if (boundary) surf[static_cast<std::size_t>(i + j * n1 +
                                                    k * n1 * n2)] = 1;
      }
    }
  }
  return surf;
}

/// One-dimensional squared-distance transform (lower envelope of
/// parabolas) with sample positions p * h. Reads f, writes d; both length n
/// with the given stride into the backing arrays.
void edt_1d(const double* f, double* d, Index n, Index stride, double h) {
  std::vector<Index> v(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n + 1));
  Index k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  auto fx = [&](Index q) { return f[q * stride]; };
  auto pos = [&](Index q) { return static_cast<double>(q) * h; };

  for (Index q = 1; q < n; ++q) {
    double s;
    for (;;) {
      const Index p = v[static_cast<std::size_t>(k)];
      s = ((fx(q) + pos(q) * pos(q)) - (fx(p) + pos(p) * pos(p))) /
          (2.0 * pos(q) - 2.0 * pos(p));
      if (s <= z[static_cast<std::size_t>(k)] && k > 0) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] = s;
    z[static_cast<std::size_t>(k + 1)] = kInf;
  }

  k = 0;
  for (Index q = 0; q < n; ++q) {
    while (z[static_cast<std::size_t>(k + 1)] < pos(q)) ++k;
    const Index p = v[static_cast<std::size_t>(k)];
    const double dx = pos(q) - pos(p);
    d[q * stride] = dx * dx + fx(p);
  }
}

/// Exact anisotropic squared Euclidean distance transform to the seed set.
std::vector<double> edt_squared(const std::vector<std::uint8_t>& seeds,
                                Index n1, Index n2, Index n3,
                                const std::array<double, 3>& spacing) {
  std::vector<double> dist(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    dist[i] = seeds[i] ? 0.0 : kInf;
  }
  std::vector<double> tmp(dist.size());

  // Axis 1 (stride 1).
  for (Index k = 0; k < n3; ++k) {
    for (Index j = 0; j < n2; ++j) {
      const Index base = j * n1 + k * n1 * n2;
      edt_1d(dist.data() + base, tmp.data() + base, n1, 1, spacing[0]);
    }
  }
  std::swap(dist, tmp);

  // Axis 2 (stride n1).
  for (Index k = 0; k < n3; ++k) {
    for (Index i = 0; i < n1; ++i) {
      const Index base = i + k * n1 * n2;
      edt_1d(dist.data() + base, tmp.data() + base, n2, n1, spacing[1]);
    }
  }
  std::swap(dist, tmp);

  // Axis 3 (stride n1*n2).
  for (Index j = 0; j < n2; ++j) {
    for (Index i = 0; i < n1; ++i) {
      const Index base = i + j * n1;
      edt_1d(dist.data() + base, tmp.data() + base, n3, n1 * n2, spacing[2]);
    }
  }
  std::swap(dist, tmp);
  return dist;
}

}  // namespace

double asd(const LabelVolume& a, const LabelVolume& b) {
  if (!a.same_dims(b)) {
    throw ShapeError("asd: mask dimensions differ");
  }
  if (a.spacing() != b.spacing()) {
    throw InvalidArgument("asd: masks must share voxel spacing");
  }
  if (a.count() == 0 || b.count() == 0) {
    throw UndefinedStatError("asd: undefined for an empty mask");
  }

  const Index n1 = a.n1(), n2 = a.n2(), n3 = a.n3();
  const auto surf_a = surface_mask(a);
  const auto surf_b = surface_mask(b);
  const auto dist_to_a = edt_squared(surf_a, n1, n2, n3, a.spacing());
  const auto dist_to_b = edt_squared(surf_b, n1, n2, n3, a.spacing());

  double total = 0;
  Index count = 0;
  for (std::size_t i = 0; i < surf_a.size(); ++i) {
    if (surf_a[i]) {
      total += std::sqrt(dist_to_b[i]);
      ++count;
    }
    if (surf_b[i]) {
      total += std::sqrt(dist_to_a[i]);
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

}  // namespace tlrd
