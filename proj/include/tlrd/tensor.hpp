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

#ifndef TLRD_TENSOR_HPP
#define TLRD_TENSOR_HPP

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "tlrd/errors.hpp"

namespace tlrd {

using Index = Eigen::Index;

/// Dense third-order tensor of shape n1 x n2 x n3.
///
/// Storage is frontal-slice-major: slice k occupies the contiguous block
/// data[k*n1*n2 .. (k+1)*n1*n2) as an n1 x n2 column-major matrix. Entry
/// (i, j, k) therefore lives at offset i + j*n1 + k*n1*n2. All indices are
/// 0-based.
template <class Scalar>
class BasicTensor3 {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using SliceMap = Eigen::Map<Matrix>;
  using ConstSliceMap = Eigen::Map<const Matrix>;

  BasicTensor3() = default;

  /// Zero-filled tensor. Every dimension must be >= 1.
  BasicTensor3(Index n1, Index n2, Index n3) : n1_(n1), n2_(n2), n3_(n3) {
    if (n1 < 1 || n2 < 1 || n3 < 1) {
      throw InvalidArgument("tensor dimensions must be >= 1, got " +
                            dims_string(n1, n2, n3));
    }
    data_.assign(static_cast<std::size_t>(n1 * n2 * n3), Scalar(0));
  }

  Index n1() const { return n1_; }
  Index n2() const { return n2_; }
  Index n3() const { return n3_; }
  Index size() const { return n1_ * n2_ * n3_; }
  bool empty() const { return data_.empty(); }

  bool same_dims(const BasicTensor3& other) const {
    return n1_ == other.n1_ && n2_ == other.n2_ && n3_ == other.n3_;
  }

  Scalar& operator()(Index i, Index j, Index k) {
    return data_[static_cast<std::size_t>(i + j * n1_ + k * n1_ * n2_)];
  }
  Scalar operator()(Index i, Index j, Index k) const {
    return data_[static_cast<std::size_t>(i + j * n1_ + k * n1_ * n2_)];
  }

  std::span<Scalar> data() { return data_; }
  std::span<const Scalar> data() const { return data_; }

  /// Mutable view of frontal slice k as an n1 x n2 matrix. Throws IndexError
  /// when k is out of range; writes through the view mutate the tensor.
  SliceMap slice(Index k) {
    check_slice(k);
    return SliceMap(data_.data() + k * n1_ * n2_, n1_, n2_);
  }
  ConstSliceMap slice(Index k) const {
    check_slice(k);
    return ConstSliceMap(data_.data() + k * n1_ * n2_, n1_, n2_);
  }

  /// The (n1*n2) x n3 matrix whose column k is vec(slice k); row c is the
  /// mode-3 fiber at (i, j) with c = i + j*n1. This is the transpose of the
  /// mode-3 unfolding and is the natural layout for mode-3 products.
  Eigen::Map<Matrix> fiber_matrix() {
    return Eigen::Map<Matrix>(data_.data(), n1_ * n2_, n3_);
  }
  Eigen::Map<const Matrix> fiber_matrix() const {
    return Eigen::Map<const Matrix>(data_.data(), n1_ * n2_, n3_);
  }

  Eigen::Map<Eigen::Array<Scalar, Eigen::Dynamic, 1>> array() {
    return {data_.data(), static_cast<Index>(data_.size())};
  }
  Eigen::Map<const Eigen::Array<Scalar, Eigen::Dynamic, 1>> array() const {
    return {data_.data(), static_cast<Index>(data_.size())};
  }

 private:
  static std::string dims_string(Index a, Index b, Index c) {
    return "(" + std::to_string(a) + ", " + std::to_string(b) + ", " +
           std::to_string(c) + ")";
  }
  void check_slice(Index k) const {
    if (k < 0 || k >= n3_) {
      throw IndexError("frontal slice index " + std::to_string(k) +
                       " out of range [0, " + std::to_string(n3_) + ")");
    }
  }

  Index n1_ = 0;
  Index n2_ = 0;
  Index n3_ = 0;
  std::vector<Scalar> data_;
};

using Tensor3 = BasicTensor3<double>;
using ComplexTensor3 = BasicTensor3<std::complex<double>>;

using Matrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Frontal slice accessor X^(k); equivalent to x.slice(k).
template <class Scalar>
typename BasicTensor3<Scalar>::ConstSliceMap frontal_slice(
    const BasicTensor3<Scalar>& x, Index k) {
  return x.slice(k);
}
template <class Scalar>
typename BasicTensor3<Scalar>::SliceMap frontal_slice(BasicTensor3<Scalar>& x,
                                                      Index k) {
  return x.slice(k);
}

/// Mode-3 unfolding: the n3 x (n1*n2) matrix whose columns are the mode-3
/// fibers, enumerated in column-major slice order (column c = fiber at
/// (i, j) with c = i + j*n1).
template <class Scalar>
typename BasicTensor3<Scalar>::Matrix unfold3(const BasicTensor3<Scalar>& x) {
  return x.fiber_matrix().transpose();
}

/// Inverse of unfold3 for the given dimensions.
template <class Scalar>
BasicTensor3<Scalar> fold3(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m, Index n1,
    Index n2, Index n3) {
  if (m.rows() != n3 || m.cols() != n1 * n2) {
    throw ShapeError("fold3: matrix of size " + std::to_string(m.rows()) +
                     "x" + std::to_string(m.cols()) +
                     " does not match requested tensor dimensions");
  }
  BasicTensor3<Scalar> out(n1, n2, n3);
  out.fiber_matrix() = m.transpose();
  return out;
}

namespace detail {

template <class Scalar, class MScalar>
void check_mode3_shapes(const BasicTensor3<Scalar>& x,
                        const Eigen::Matrix<MScalar, Eigen::Dynamic,
                                            Eigen::Dynamic>& m) {
  if (m.rows() != m.cols() || m.rows() != x.n3()) {
    throw ShapeError("mode-3 product: matrix must be " +
                     std::to_string(x.n3()) + "x" + std::to_string(x.n3()) +
                     ", got " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()));
  }
}

}  // namespace detail

/// Linear transform along the third dimension: the result's mode-3
/// unfolding equals m * unfold3(x).
inline Tensor3 mode3_product(const Tensor3& x, const Matrix& m) {
  detail::check_mode3_shapes(x, m);
  Tensor3 out(x.n1(), x.n2(), x.n3());
  out.fiber_matrix().noalias() = x.fiber_matrix() * m.transpose();
  return out;
}

inline ComplexTensor3 mode3_product(const Tensor3& x, const ComplexMatrix& m) {
  detail::check_mode3_shapes(x, m);
  ComplexTensor3 out(x.n1(), x.n2(), x.n3());
  out.fiber_matrix().noalias() =
      x.fiber_matrix().cast<std::complex<double>>() * m.transpose();
  return out;
}

inline ComplexTensor3 mode3_product(const ComplexTensor3& x,
                                    const ComplexMatrix& m) {
  detail::check_mode3_shapes(x, m);
  ComplexTensor3 out(x.n1(), x.n2(), x.n3());
  out.fiber_matrix().noalias() = x.fiber_matrix() * m.transpose();
  return out;
}

/// Number of entries exactly different from zero.
template <class Scalar>
Index l0_norm(const BasicTensor3<Scalar>& x) {
  Index count = 0;
  for (const auto& v : x.data()) {
    if (v != Scalar(0)) ++count;
  }
  return count;
}

/// Number of entries with |x| > eps. Intended for sparsity reporting on
/// solver output, which is only numerically sparse.
template <class Scalar>
Index l0_norm_eps(const BasicTensor3<Scalar>& x, double eps) {
  Index count = 0;
  for (const auto& v : x.data()) {
    if (std::abs(v) > eps) ++count;
  }
  return count;
}

template <class Scalar>
double l1_norm(const BasicTensor3<Scalar>& x) {
  double sum = 0;
  for (const auto& v : x.data()) sum += std::abs(v);
  return sum;
}

template <class Scalar>
double inf_norm(const BasicTensor3<Scalar>& x) {
  double m = 0;
  for (const auto& v : x.data()) m = std::max(m, std::abs(v));
  return m;
}

template <class Scalar>
double fro_norm(const BasicTensor3<Scalar>& x) {
  double sum = 0;
  for (const auto& v : x.data()) {
    const double a = std::abs(v);
    sum += a * a;
  }
  return std::sqrt(sum);
}

/// <X, Y> = sum_k <X^(k), Y^(k)>; real inner product of matching tensors.
inline double inner_product(const Tensor3& x, const Tensor3& y) {
  if (!x.same_dims(y)) {
    throw ShapeError("inner_product: tensors must share dimensions");
  }
  return (x.array() * y.array()).sum();
}

namespace ref {

/// Block circulant matricization: block (r, c) is frontal slice
/// ((r - c) mod n3). Materializes an (n1*n3) x (n2*n3) matrix, so this is
/// an O(n^3)-memory test oracle, never used in the solver path.
Matrix bcirc(const Tensor3& x);

/// Reference t-product via the block circulant form:
/// fold(bcirc(x) * unfold(y)). Quadratic memory; test oracle only.
Tensor3 tproduct(const Tensor3& x, const Tensor3& y);

}  // namespace ref

}  // namespace tlrd

#endif  // TLRD_TENSOR_HPP
