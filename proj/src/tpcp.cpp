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

#include "tlrd/tpcp.hpp"

#include <cmath>

namespace tlrd {

double default_lambda(Index n1, Index n2, Index n3) {
  if (n1 < 1 || n2 < 1 || n3 < 1) {
    throw InvalidArgument("default_lambda: dimensions must be >= 1");
  }
  return 1.0 / std::sqrt(static_cast<double>(std::max(n1, n2)) *
                         static_cast<double>(n3));
}

double auto_lambda(Index n1, Index n2, const TransformSpec& transform) {
  if (n1 < 1 || n2 < 1) {
    throw InvalidArgument("auto_lambda: dimensions must be >= 1");
  }
  return 1.0 / std::sqrt(static_cast<double>(std::max(n1, n2)) *
                         transform.scale());
}

namespace {

void validate(const Tensor3& x, const TpcpConfig& cfg) {
  if (cfg.transform.length() != x.n3()) {
    throw ShapeError("tpcp_solve: transform length does not match tensor n3");
  }
  if (cfg.mu0 <= 0 || cfg.mu_max <= 0 || cfg.mu0 > cfg.mu_max) {
    throw InvalidArgument("tpcp_solve: require 0 < mu0 <= mu_max");
  }
  if (cfg.rho <= 1.0) throw InvalidArgument("tpcp_solve: require rho > 1");
  if (cfg.eps <= 0) throw InvalidArgument("tpcp_solve: require eps > 0");
  if (cfg.max_iters < 1) {
    throw InvalidArgument("tpcp_solve: require max_iters >= 1");
  }
  if (cfg.lambda && *cfg.lambda <= 0) {
    throw InvalidArgument("tpcp_solve: explicit lambda must be positive");
  }
}

}  // namespace

TpcpResult tpcp_solve(const Tensor3& x, const TpcpConfig& cfg) {
  validate(x, cfg);
  const double lambda =
      cfg.lambda ? *cfg.lambda : auto_lambda(x.n1(), x.n2(), cfg.transform);

  TpcpResult result;
  result.resolved_lambda = lambda;
  result.trace.reserve(static_cast<std::size_t>(std::min<Index>(
      cfg.max_iters, 1024)));

  Tensor3 low(x.n1(), x.n2(), x.n3());
  Tensor3 sparse(x.n1(), x.n2(), x.n3());
  Tensor3 y(x.n1(), x.n2(), x.n3());
  Tensor3 w(x.n1(), x.n2(), x.n3());
  double mu = cfg.mu0;

  for (Index k = 0; k < cfg.max_iters; ++k) {
    // Low-rank step: singular value thresholding of X - E + Y/mu.
    w.array() = x.array() - sparse.array() + y.array() / mu;
    Tensor3 low_next = tsvt(cfg.transform, w, 1.0 / mu, cfg.workers);

    // Sparse step: soft threshold of X - L + Y/mu.
    w.array() = x.array() - low_next.array() + y.array() / mu;
    Tensor3 sparse_next = shrink(w, lambda / mu);

    const double dl = (low_next.array() - low.array()).abs().maxCoeff();
    const double de = (sparse_next.array() - sparse.array()).abs().maxCoeff();
    w.array() = x.array() - low_next.array() - sparse_next.array();
    const double primal = w.array().abs().maxCoeff();

    if (!std::isfinite(dl) || !std::isfinite(de) || !std::isfinite(primal)) {
      throw NumericError("tpcp_solve: non-finite iterate at iteration " +
                         std::to_string(k + 1));
    }

    low = std::move(low_next);
    sparse = std::move(sparse_next);
    result.trace.push_back({primal, dl, de, mu});
    result.iterations = k + 1;

    if (dl < cfg.eps && de < cfg.eps && primal < cfg.eps) {
      result.converged = true;
      break;
    }

    // Multiplier and penalty updates; w still holds X - L - E.
    y.array() += mu * w.array();
    mu = std::min(cfg.rho * mu, cfg.mu_max);
  }

  result.low_rank = std::move(low);
  result.sparse = std::move(sparse);
  return result;
}

}  // namespace tlrd
