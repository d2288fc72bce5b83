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

#include "tlrd/multislice.hpp"

#include <chrono>

#include "tlrd/parallel.hpp"

namespace tlrd {

SegmentPlan plan_segments(Index d, Index k) {
  if (d < 2) {
    throw InvalidArgument("plan_segments: need at least 2 slices, got " +
                          std::to_string(d));
  }
  if (k < 2) {
    throw InvalidArgument("plan_segments: segment length must be >= 2, got " +
                          std::to_string(k));
  }

  SegmentPlan plan;
  plan.n_slices = d;
  plan.segment_length = k;

  Index start = 0;
  while (start < d) {
    Index end = std::min(start + k, d);
    // A 1-slice tail would violate the minimum segment length; merge it.
    if (d - end == 1) end = d;
    plan.segments.push_back({start, end, 0, 0});
    start = end;
  }
  for (auto& seg : plan.segments) {
    seg.padded_start = seg.core_start > 0 ? seg.core_start - 1
                                          : seg.core_start;
    seg.padded_end = seg.core_end < d ? seg.core_end + 1 : seg.core_end;
  }
  return plan;
}

bool MultiSliceResult::all_converged() const {
  for (const auto& s : segments) {
    if (!s.converged) return false;
  }
  return true;
}

namespace {

void check_volumes(std::span<const Tensor3> volumes) {
  if (volumes.empty()) {
    throw InvalidArgument("need at least one volume");
  }
  for (const auto& v : volumes) {
    if (!v.same_dims(volumes.front())) {
      throw ShapeError("all volumes must share dimensions");
    }
  }
}

TransformSpec transform_for_length(const TransformSpec& like, Index n3) {
  switch (like.kind()) {
    case TransformKind::dct: return TransformSpec::dct(n3);
    case TransformKind::dft: return TransformSpec::dft(n3);
    case TransformKind::dwt4: return TransformSpec::dwt4(n3);
    case TransformKind::custom:
      if (like.length() == n3) return like;
      throw UnsupportedError(
          "a custom transform cannot be resized to the per-segment slice "
          "count " + std::to_string(n3));
  }
  throw InvalidArgument("unknown transform kind");
}

/// Copy slice range [from, to) of src into dst starting at slice dst_start.
void copy_slices(const Tensor3& src, Index from, Index to, Tensor3& dst,
                 Index dst_start) {
  const Index slice_size = src.n1() * src.n2();
  auto s = src.data();
  auto d = dst.data();
  std::copy(s.begin() + from * slice_size, s.begin() + to * slice_size,
            d.begin() + dst_start * slice_size);
}

}  // namespace

Tensor3 stack_volumes(std::span<const Tensor3> volumes) {
  check_volumes(volumes);
  const Index n1 = volumes.front().n1();
  const Index n2 = volumes.front().n2();
  const Index d = volumes.front().n3();
  Tensor3 out(n1, n2, d * static_cast<Index>(volumes.size()));
  for (std::size_t i = 0; i < volumes.size(); ++i) {
    copy_slices(volumes[i], 0, d, out, static_cast<Index>(i) * d);
  }
  return out;
}

MultiSliceResult ms_lrtd(std::span<const Tensor3> volumes,
                         Index segment_length, const TpcpConfig& cfg) {
  check_volumes(volumes);
  const Index n1 = volumes.front().n1();
  const Index n2 = volumes.front().n2();
  const Index d = volumes.front().n3();
  const Index n_volumes = static_cast<Index>(volumes.size());

  MultiSliceResult result;
  result.plan = plan_segments(d, segment_length);
  const Index n_segments = static_cast<Index>(result.plan.segments.size());
  result.segments.resize(static_cast<std::size_t>(n_segments));

  struct SegmentOutput {
    Tensor3 low_rank;
    Tensor3 sparse;
  };
  std::vector<SegmentOutput> outputs(static_cast<std::size_t>(n_segments));

  const int total_workers = std::max(1, cfg.workers);
  const int outer = static_cast<int>(
      std::min<Index>(total_workers, n_segments));
  const int inner = std::max(1, total_workers / outer);

  parallel_for(n_segments, outer, [&](Index j) {
    const SegmentRange& seg = result.plan.segments[
        static_cast<std::size_t>(j)];
    const Index len = seg.padded_length();

    Tensor3 repo(n1, n2, len * n_volumes);
    for (Index i = 0; i < n_volumes; ++i) {
      copy_slices(volumes[static_cast<std::size_t>(i)], seg.padded_start,
                  seg.padded_end, repo, i * len);
    }

    TpcpConfig seg_cfg = cfg;
    seg_cfg.transform = transform_for_length(cfg.transform, repo.n3());
    seg_cfg.workers = inner;

    const auto t0 = std::chrono::steady_clock::now();
    TpcpResult solved = tpcp_solve(repo, seg_cfg);
    const auto t1 = std::chrono::steady_clock::now();

    auto& summary = result.segments[static_cast<std::size_t>(j)];
    summary.range = seg;
    summary.iterations = solved.iterations;
    summary.converged = solved.converged;
    summary.resolved_lambda = solved.resolved_lambda;
    summary.solve_seconds = std::chrono::duration<double>(t1 - t0).count();
    summary.trace = std::move(solved.trace);

    outputs[static_cast<std::size_t>(j)] = {std::move(solved.low_rank),
                                            std::move(solved.sparse)};
  });

  // Merge: each output slice is covered by one or two padded segment
  // ranges; contributions are averaged with equal weights.
  std::vector<double> coverage(static_cast<std::size_t>(d), 0.0);
  for (const auto& seg : result.plan.segments) {
    for (Index s = seg.padded_start; s < seg.padded_end; ++s) {
      coverage[static_cast<std::size_t>(s)] += 1.0;
    }
  }

  result.low_rank.assign(static_cast<std::size_t>(n_volumes),
                         Tensor3(n1, n2, d));
  result.sparse.assign(static_cast<std::size_t>(n_volumes),
                       Tensor3(n1, n2, d));
  const Index slice_size = n1 * n2;
  for (Index j = 0; j < n_segments; ++j) {
    const SegmentRange& seg = result.plan.segments[
        static_cast<std::size_t>(j)];
    const Index len = seg.padded_length();
    const auto& out = outputs[static_cast<std::size_t>(j)];
    for (Index i = 0; i < n_volumes; ++i) {
      auto& low = result.low_rank[static_cast<std::size_t>(i)];
      auto& sp = result.sparse[static_cast<std::size_t>(i)];
      for (Index s = seg.padded_start; s < seg.padded_end; ++s) {
        const double w = 1.0 / coverage[static_cast<std::size_t>(s)];
        const Index src = i * len + (s - seg.padded_start);
        auto ld = low.data().subspan(
            static_cast<std::size_t>(s * slice_size),
            static_cast<std::size_t>(slice_size));
        auto sd = sp.data().subspan(
            static_cast<std::size_t>(s * slice_size),
            static_cast<std::size_t>(slice_size));
        auto lsrc = out.low_rank.data().subspan(
            static_cast<std::size_t>(src * slice_size),
            static_cast<std::size_t>(slice_size));
        auto ssrc = out.sparse.data().subspan(
            static_cast<std::size_t>(src * slice_size),
            static_cast<std::size_t>(slice_size));
        if (w == 1.0) {
          std::copy(lsrc.begin(), lsrc.end(), ld.begin());
          std::copy(ssrc.begin(), ssrc.end(), sd.begin());
        } else {
          for (Index p = 0; p < slice_size; ++p) {
            ld[static_cast<std::size_t>(p)] +=
                w * lsrc[static_cast<std::size_t>(p)];
            sd[static_cast<std::size_t>(p)] +=
                w * ssrc[static_cast<std::size_t>(p)];
          }
        }
      }
    }
  }

  return result;
}

std::vector<SweepRow> sweep_segment_length(std::span<const Tensor3> volumes,
                                           std::span<const Index> k_values,
                                           const LabelVolume& mask,
                                           const TpcpConfig& cfg) {
  check_volumes(volumes);
  for (Index k : k_values) {
    if (k < 2) {
      throw InvalidArgument("sweep_segment_length: every k must be >= 2");
    }
  }
  if (!mask.dims_match(volumes.front())) {
    throw ShapeError("sweep_segment_length: mask does not match volumes");
  }

  std::vector<SweepRow> rows;
  rows.reserve(k_values.size());
  for (Index k : k_values) {
    const MultiSliceResult res = ms_lrtd(volumes, k, cfg);
    double sigma = 0, entropy = 0;
    for (const auto& low : res.low_rank) {
      const MaskedStats stats = masked_stats(low, mask);
      sigma += stats.sigma;
      entropy += stats.entropy_bits;
    }
    const auto n = static_cast<double>(res.low_rank.size());
    rows.push_back({k, sigma / n, entropy / n});
  }
  return rows;
}

}  // namespace tlrd
