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

#ifndef TLRD_TRANSFORM_HPP
#define TLRD_TRANSFORM_HPP

#include <string>

#include "tlrd/tensor.hpp"

namespace tlrd {

enum class TransformKind { dft, dct, dwt4, custom };

std::string to_string(TransformKind kind);

/// An invertible mode-3 transform matrix M together with its inverse and the
/// scaling constant l of the condition M* M = M M* = l I. Immutable after
/// construction and safe to share across threads.
///
/// Built-in kinds:
///  - dct: orthonormal DCT-II (l = 1)
///  - dft: the unnormalized DFT matrix, entries exp(-2*pi*i*j*k/n3) (l = n3)
///  - dwt4: single-level periodized Daubechies-4 wavelet matrix (l = 1),
///    requires an even length
class TransformSpec {
 public:
  static TransformSpec dct(Index n3);
  static TransformSpec dft(Index n3);
  static TransformSpec dwt4(Index n3);
  /// A caller-provided real matrix; l is estimated as the mean diagonal of
  /// M* M and the transform is rejected when M* M deviates from l I.
  static TransformSpec custom(const Matrix& m);
  static TransformSpec custom(const ComplexMatrix& m);

  TransformKind kind() const { return kind_; }
  Index length() const { return n3_; }
  /// The scaling constant l > 0.
  double scale() const { return l_; }
  /// True when the transform matrix is real (dct, dwt4, real custom).
  bool is_real() const { return real_; }

  /// Real matrix and inverse; only valid when is_real().
  const Matrix& real_matrix() const;
  const Matrix& real_inverse() const;

  /// Complex view of the matrix and inverse; always valid.
  const ComplexMatrix& matrix() const { return mc_; }
  const ComplexMatrix& inverse_matrix() const { return mc_inv_; }

 private:
  TransformSpec(TransformKind kind, Matrix m, Matrix m_inv, double l);
  TransformSpec(TransformKind kind, ComplexMatrix m, ComplexMatrix m_inv,
                double l);
  void validate() const;

  TransformKind kind_ = TransformKind::custom;
  Index n3_ = 0;
  double l_ = 1.0;
  bool real_ = true;
  Matrix mr_, mr_inv_;        // empty when !real_
  ComplexMatrix mc_, mc_inv_; // always populated
};

/// Build one of the named transforms.
TransformSpec build_transform(TransformKind kind, Index n3);

/// x_bar = x (mode-3 product) M. The real overload requires a real
/// transform; forward_complex accepts any transform.
Tensor3 forward(const TransformSpec& t, const Tensor3& x);
ComplexTensor3 forward_complex(const TransformSpec& t, const Tensor3& x);

/// Inverse transform. The complex overload drops the imaginary residue of
/// the result after verifying it is below 1e-8 * ||result||_F and raises
/// NumericError otherwise.
Tensor3 inverse(const TransformSpec& t, const Tensor3& xbar);
Tensor3 inverse(const TransformSpec& t, const ComplexTensor3& xbar);

/// The tensor-tensor product under the transform: face-wise matrix products
/// of the forward-transformed slices, then the inverse transform.
Tensor3 mproduct(const TransformSpec& t, const Tensor3& x, const Tensor3& y);

/// Conjugate transpose: the tensor whose transform-domain slices are the
/// conjugate transposes of those of x.
Tensor3 conj_transpose(const TransformSpec& t, const Tensor3& x);

/// The identity tensor of the product: all transform-domain slices equal
/// the n x n identity matrix.
Tensor3 identity_tensor(const TransformSpec& t, Index n);

}  // namespace tlrd

#endif  // TLRD_TRANSFORM_HPP
