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

#ifndef TLRD_MULTISLICE_HPP
#define TLRD_MULTISLICE_HPP

#include <span>
#include <vector>

#include "tlrd/metrics.hpp"
#include "tlrd/tpcp.hpp"

namespace tlrd {

/// Half-open slice ranges of one segment. The core ranges tile [0, d)
/// disjointly; the padded range extends the core by one slice wherever an
/// interior neighbor exists (no padding at the volume boundary).
struct SegmentRange {
  Index core_start;
  Index core_end;
  Index padded_start;
  Index padded_end;

  Index core_length() const { return core_end - core_start; }
  Index padded_length() const { return padded_end - padded_start; }
};

struct SegmentPlan {
  Index n_slices = 0;
  Index segment_length = 0;
  std::vector<SegmentRange> segments;
};

/// Partition d slices into consecutive segments of length k (the last one
/// may be shorter, but a 1-slice tail merges into the previous segment so
/// every core has length >= 2). Requires d >= 2 and k >= 2.
SegmentPlan plan_segments(Index d, Index k);

/// Per-segment solver summary.
struct SegmentSummary {
  SegmentRange range;
  Index iterations = 0;
  bool converged = false;
  double resolved_lambda = 0.0;
  double solve_seconds = 0.0;
  std::vector<IterationRecord> trace;
};

struct MultiSliceResult {
  std::vector<Tensor3> low_rank;
  std::vector<Tensor3> sparse;
  SegmentPlan plan;
  std::vector<SegmentSummary> segments;

  bool all_converged() const;
};

/// Concatenate equal-shaped volumes frontal-slice-wise into one tensor of
/// n3 = d * volumes.size(). This is the stacking order used per segment.
Tensor3 stack_volumes(std::span<const Tensor3> volumes);

/// Multi-slice low-rank tensor decomposition: plan segments over the slice
/// axis, build the per-segment repository tensor by stacking every volume's
/// padded segment, run the pursuit solver per segment (resolving the
/// dimension-derived lambda per segment when cfg.lambda is unset), split
/// the results back per volume, and average the one-slice overlaps between
/// adjacent segments with equal weights. Non-converged segments are
/// recorded in the summaries, not raised.
///
/// cfg.transform's length is ignored; each segment builds a transform of
/// the same kind sized to its own slice count.
MultiSliceResult ms_lrtd(std::span<const Tensor3> volumes,
                         Index segment_length, const TpcpConfig& cfg);

struct SweepRow {
  Index k = 0;
  double sigma = 0.0;
  double entropy_bits = 0.0;
};

/// Run ms_lrtd for every requested segment length and report the masked
/// intensity statistics (mean over volumes) of the low-rank output.
std::vector<SweepRow> sweep_segment_length(std::span<const Tensor3> volumes,
                                           std::span<const Index> k_values,
                                           const LabelVolume& mask,
                                           const TpcpConfig& cfg);

}  // namespace tlrd

#endif  // TLRD_MULTISLICE_HPP
