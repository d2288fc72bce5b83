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

#ifndef TLRD_TPCP_HPP
#define TLRD_TPCP_HPP

#include <optional>
#include <vector>

#include "tlrd/transform.hpp"
#include "tlrd/tsvd.hpp"

namespace tlrd {

/// Dimension-derived trade-off weight 1 / sqrt(max(n1, n2) * n3), the
/// standard suggestion under the t-product (DFT) nuclear-norm scaling.
double default_lambda(Index n1, Index n2, Index n3);

/// Transform-aware default weight 1 / sqrt(max(n1, n2) * l). The nuclear
/// norm carries a 1/l factor, so the balance point between the two terms
/// moves with the transform scale: under the DFT (l = n3) this equals
/// default_lambda, while orthonormal transforms (l = 1) need the larger
/// weight or the l1 term is too weak for exact recovery.
double auto_lambda(Index n1, Index n2, const TransformSpec& transform);

/// Hyperparameters of the tensor principal component pursuit solver
///   min ||L||_tnn + lambda * ||E||_1  s.t.  X = L + E.
struct TpcpConfig {
  explicit TpcpConfig(TransformSpec transform_)
      : transform(std::move(transform_)) {}

  /// Empty means auto_lambda is resolved at solve time.
  std::optional<double> lambda;
  double mu0 = 1e-3;
  double mu_max = 1e10;
  double rho = 1.1;
  double eps = 1e-8;
  Index max_iters = 500;
  /// Worker threads for the per-slice SVDs inside the thresholding step.
  int workers = 1;
  TransformSpec transform;
};

/// One row per iteration: infinity norms of the primal residual X - L - E
/// and of the L and E increments, plus the penalty in effect.
struct IterationRecord {
  double primal_inf;
  double dl_inf;
  double de_inf;
  double mu;
};

struct TpcpResult {
  Tensor3 low_rank;
  Tensor3 sparse;
  Index iterations = 0;
  bool converged = false;
  std::vector<IterationRecord> trace;
  double resolved_lambda = 0.0;
};

/// Alternating-direction solver: each iteration applies singular value
/// thresholding to X - E + Y/mu, soft-thresholds X - L + Y/mu, then updates
/// the multiplier Y and grows mu by rho up to mu_max. Stops when all three
/// infinity-norm residuals drop below eps. Reaching max_iters returns a
/// result with converged = false rather than throwing; NaN iterates throw
/// NumericError.
TpcpResult tpcp_solve(const Tensor3& x, const TpcpConfig& cfg);

}  // namespace tlrd

#endif  // TLRD_TPCP_HPP
