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

#include "tlrd/tsvd.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "tlrd/parallel.hpp"

namespace tlrd {

namespace {

constexpr double kDefaultRankTolFactor = 1e-8;

// BDCSVD wins for larger slices; Jacobi is more accurate and fast enough
// below this size.
constexpr Index kBdcsvdThreshold = 16;

template <class MatrixType>
struct SliceSvd {
  MatrixType u;
  MatrixType v;
  Eigen::VectorXd sigma;
};

template <class MatrixType, class Derived>
SliceSvd<MatrixType> slice_svd(const Eigen::MatrixBase<Derived>& a, bool thin,
                               Index slice_index) {
  const unsigned options = thin
      ? (Eigen::ComputeThinU | Eigen::ComputeThinV)
      : (Eigen::ComputeFullU | Eigen::ComputeFullV);
  SliceSvd<MatrixType> out;
  if (std::min(a.rows(), a.cols()) < kBdcsvdThreshold) {
    Eigen::JacobiSVD<MatrixType> svd(a, options);
    if (svd.info() != Eigen::Success) {
      throw NumericError("SVD failed on transform slice " +
                         std::to_string(slice_index));
    }
    out.u = svd.matrixU();
    out.v = svd.matrixV();
    out.sigma = svd.singularValues();
  } else {
    Eigen::BDCSVD<MatrixType> svd(a, options);
    if (svd.info() != Eigen::Success) {
      throw NumericError("SVD failed on transform slice " +
                         std::to_string(slice_index));
    }
    out.u = svd.matrixU();
    out.v = svd.matrixV();
    out.sigma = svd.singularValues();
  }
  return out;
}

template <class MatrixType, class Derived>
Eigen::VectorXd slice_singular_values(const Eigen::MatrixBase<Derived>& a,
                                      Index slice_index) {
  if (std::min(a.rows(), a.cols()) < kBdcsvdThreshold) {
    Eigen::JacobiSVD<MatrixType> svd(a);
    if (svd.info() != Eigen::Success) {
      throw NumericError("SVD failed on transform slice " +
                         std::to_string(slice_index));
    }
    return svd.singularValues();
  }
  Eigen::BDCSVD<MatrixType> svd(a);
  if (svd.info() != Eigen::Success) {
    throw NumericError("SVD failed on transform slice " +
                       std::to_string(slice_index));
  }
  return svd.singularValues();
}

// For the DFT of a real tensor, slices k and n3-k are conjugate; SVDs are
// only needed for k <= n3/2 and the remaining slices follow by conjugation.
Index dft_unique_slices(Index n3) { return n3 / 2 + 1; }

// Gather the transform-domain singular values into a min(n1,n2) x n3 matrix.
Matrix singular_value_table(const TransformSpec& t, const Tensor3& x,
                            int workers) {
  const Index n3 = x.n3();
  const Index nmin = std::min(x.n1(), x.n2());
  Matrix sigma(nmin, n3);
  if (t.is_real()) {
    const Tensor3 xbar = forward(t, x);
    parallel_for(n3, workers, [&](Index k) {
      sigma.col(k) = slice_singular_values<Matrix>(xbar.slice(k), k);
    });
  } else {
    const ComplexTensor3 xbar = forward_complex(t, x);
    const Index unique = dft_unique_slices(n3);
    parallel_for(unique, workers, [&](Index k) {
      sigma.col(k) = slice_singular_values<ComplexMatrix>(xbar.slice(k), k);
    });
    for (Index k = unique; k < n3; ++k) sigma.col(k) = sigma.col(n3 - k);
  }
  return sigma;
}

double resolve_rank_tol(double tol, const Matrix& sigma) {
  if (tol < 0) throw InvalidArgument("rank tolerance must be >= 0");
  if (tol > 0) return tol;
  const double smax = sigma.size() == 0 ? 0.0 : sigma.maxCoeff();
  return kDefaultRankTolFactor * smax;
}

}  // namespace

TsvdFactors tsvd(const TransformSpec& t, const Tensor3& x, int workers) {
  const Index n1 = x.n1(), n2 = x.n2(), n3 = x.n3();
  if (t.length() != n3) {
    throw ShapeError("tsvd: transform length does not match tensor n3");
  }
  const Index nmin = std::min(n1, n2);
  Matrix sigma(nmin, n3);

  Tensor3 u, s, v;
  if (t.is_real()) {
    const Tensor3 xbar = forward(t, x);
    Tensor3 ubar(n1, n1, n3), sbar(n1, n2, n3), vbar(n2, n2, n3);
    parallel_for(n3, workers, [&](Index k) {
      const auto f = slice_svd<Matrix>(xbar.slice(k), /*thin=*/false, k);
      ubar.slice(k) = f.u;
      vbar.slice(k) = f.v;
      sbar.slice(k).setZero();
      sbar.slice(k).diagonal().head(nmin) = f.sigma;
      sigma.col(k) = f.sigma;
    });
    u = inverse(t, ubar);
    s = inverse(t, sbar);
    v = inverse(t, vbar);
  } else {
    const ComplexTensor3 xbar = forward_complex(t, x);
    ComplexTensor3 ubar(n1, n1, n3), sbar(n1, n2, n3), vbar(n2, n2, n3);
    const Index unique = dft_unique_slices(n3);
    parallel_for(unique, workers, [&](Index k) {
      // Self-conjugate slices (k = 0 and the even-length midpoint) are
      // real; factor them in real arithmetic so their U and V come out
      // exactly real and the assembled factors invert to real tensors.
      const bool self_conjugate = (k == 0) || (2 * k == n3);
      if (self_conjugate) {
        const Matrix real_slice = xbar.slice(k).real();
        const auto f = slice_svd<Matrix>(real_slice, /*thin=*/false, k);
        ubar.slice(k) = f.u.cast<std::complex<double>>();
        vbar.slice(k) = f.v.cast<std::complex<double>>();
        sbar.slice(k).setZero();
        sbar.slice(k).diagonal().head(nmin) =
            f.sigma.cast<std::complex<double>>();
        sigma.col(k) = f.sigma;
        return;
      }
      const auto f =
          slice_svd<ComplexMatrix>(xbar.slice(k), /*thin=*/false, k);
      ubar.slice(k) = f.u;
      vbar.slice(k) = f.v;
      sbar.slice(k).setZero();
      sbar.slice(k).diagonal().head(nmin) =
          f.sigma.cast<std::complex<double>>();
      sigma.col(k) = f.sigma;
    });
    for (Index k = unique; k < n3; ++k) {
      ubar.slice(k) = ubar.slice(n3 - k).conjugate();
      vbar.slice(k) = vbar.slice(n3 - k).conjugate();
      sbar.slice(k) = sbar.slice(n3 - k).conjugate();
      sigma.col(k) = sigma.col(n3 - k);
    }
    u = inverse(t, ubar);
    s = inverse(t, sbar);
    v = inverse(t, vbar);
  }

  return TsvdFactors{std::move(u), std::move(s), std::move(v),
                     std::move(sigma), t};
}

Tensor3 reconstruct(const TsvdFactors& f) {
  const TransformSpec& t = f.transform;
  return mproduct(t, f.u, mproduct(t, f.s, conj_transpose(t, f.v)));
}

Index tubal_rank(const TsvdFactors& f, double tol) {
  const double resolved = resolve_rank_tol(tol, f.sigma);
  Index rank = 0;
  for (Index i = 0; i < f.sigma.rows(); ++i) {
    if (f.sigma.row(i).maxCoeff() > resolved) ++rank;
  }
  return rank;
}

double avg_rank(const TransformSpec& t, const Tensor3& x, double tol,
                int workers) {
  const Matrix sigma = singular_value_table(t, x, workers);
  const double resolved = resolve_rank_tol(tol, sigma);
  Index total = 0;
  for (Index k = 0; k < sigma.cols(); ++k) {
    for (Index i = 0; i < sigma.rows(); ++i) {
      if (sigma(i, k) > resolved) ++total;
    }
  }
  return static_cast<double>(total) / t.scale();
}

double tnn(const TransformSpec& t, const Tensor3& x, int workers) {
  const Matrix sigma = singular_value_table(t, x, workers);
  return sigma.sum() / t.scale();
}

Tensor3 tsvt(const TransformSpec& t, const Tensor3& w, double tau,
             int workers) {
  if (tau <= 0) throw InvalidArgument("tsvt threshold must be positive");
  if (t.length() != w.n3()) {
    throw ShapeError("tsvt: transform length does not match tensor n3");
  }
  const Index n3 = w.n3();

  // Thin SVD per transform slice, drop singular values <= tau, rebuild the
  // slice from the surviving columns only.
  if (t.is_real()) {
    const Tensor3 wbar = forward(t, w);
    Tensor3 zbar(w.n1(), w.n2(), n3);
    parallel_for(n3, workers, [&](Index k) {
      const auto f = slice_svd<Matrix>(wbar.slice(k), /*thin=*/true, k);
      Index r = 0;
      while (r < f.sigma.size() && f.sigma(r) > tau) ++r;
      if (r == 0) {
        zbar.slice(k).setZero();
      } else {
        zbar.slice(k).noalias() =
            f.u.leftCols(r) *
            (f.sigma.head(r).array() - tau).matrix().asDiagonal() *
            f.v.leftCols(r).transpose();
      }
    });
    return inverse(t, zbar);
  }

  // Every slice is thresholded independently, as the per-slice SVD loop of
  // the factorization algorithm states. Thresholding commutes with
  // conjugation, so the conjugate slice pairs of a real tensor stay
  // conjugate to rounding and the inverse transform is real.
  const ComplexTensor3 wbar = forward_complex(t, w);
  ComplexTensor3 zbar(w.n1(), w.n2(), n3);
  parallel_for(n3, workers, [&](Index k) {
    const auto f = slice_svd<ComplexMatrix>(wbar.slice(k), /*thin=*/true, k);
    Index r = 0;
    while (r < f.sigma.size() && f.sigma(r) > tau) ++r;
    if (r == 0) {
      zbar.slice(k).setZero();
    } else {
      zbar.slice(k).noalias() =
          f.u.leftCols(r) *
          (f.sigma.head(r).array() - tau)
              .matrix()
              .cast<std::complex<double>>()
              .asDiagonal() *
          f.v.leftCols(r).adjoint();
    }
  });
  return inverse(t, zbar);
}

Tensor3 shrink(const Tensor3& w, double tau) {
  if (tau <= 0) throw InvalidArgument("shrink threshold must be positive");
  Tensor3 out(w.n1(), w.n2(), w.n3());
  auto src = w.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double v = src[i];
    const double mag = std::abs(v) - tau;
    dst[i] = mag > 0 ? (v > 0 ? mag : -mag) : 0.0;
  }
  return out;
}

}  // namespace tlrd
