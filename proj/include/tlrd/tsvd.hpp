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

#ifndef TLRD_TSVD_HPP
#define TLRD_TSVD_HPP

#include "tlrd/tensor.hpp"
#include "tlrd/transform.hpp"

namespace tlrd {

/// Factorization x = u * s * v^T under the transform product, with
/// orthogonal u (n1 x n1 x n3) and v (n2 x n2 x n3) and f-diagonal s
/// (n1 x n2 x n3): every transform-domain slice of s is diagonal with
/// nonnegative, nonincreasing entries.
struct TsvdFactors {
  Tensor3 u;
  Tensor3 s;
  Tensor3 v;
  /// Transform-domain singular values, min(n1, n2) x n3; column k holds the
  /// singular values of transform slice k in descending order. Row i is the
  /// i-th diagonal tube of s in the transform domain.
  Matrix sigma;
  TransformSpec transform;
};

/// Full t-SVD via per-slice SVD in the transform domain. Per-slice work is
/// independent and runs on up to `workers` threads; the result does not
/// depend on the worker count.
TsvdFactors tsvd(const TransformSpec& t, const Tensor3& x, int workers = 1);

/// u * s * v^T; reconstructs the factored tensor.
Tensor3 reconstruct(const TsvdFactors& f);

/// Number of diagonal tubes whose transform-domain infinity norm exceeds
/// tol. tol = 0 defaults to 1e-8 times the largest singular value.
///
/// Rank conventions differ across the tensor-decomposition literature;
/// this counts nonzero tubes of the factorization core, and avg_rank
/// below averages per-slice matrix ranks with the 1/l transform scaling.
Index tubal_rank(const TsvdFactors& f, double tol = 0.0);

/// (1/l) * sum over transform slices of the numerical rank at tol.
/// tol = 0 defaults to 1e-8 times the largest singular value.
double avg_rank(const TransformSpec& t, const Tensor3& x, double tol = 0.0,
                int workers = 1);

/// Tensor nuclear norm: (1/l) * sum of transform-domain singular values.
double tnn(const TransformSpec& t, const Tensor3& x, int workers = 1);

/// Singular value thresholding: the unique minimizer of
///   tau * ||X||_tnn + 1/2 * ||X - w||_F^2,
/// computed by soft-thresholding the transform-domain singular values.
Tensor3 tsvt(const TransformSpec& t, const Tensor3& w, double tau,
             int workers = 1);

/// Element-wise soft threshold max(|w| - tau, 0) * sgn(w): the minimizer of
/// tau * ||X||_1 + 1/2 * ||X - w||_F^2. Entries with |w| <= tau become
/// exactly zero.
Tensor3 shrink(const Tensor3& w, double tau);

}  // namespace tlrd

#endif  // TLRD_TSVD_HPP
