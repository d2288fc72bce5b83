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

#include "tlrd/transform.hpp"

#include <Eigen/LU>
#include <cmath>
#include <numbers>

namespace tlrd {

namespace {

constexpr double kConditionTol = 1e-8;   // on M* M = l I
constexpr double kInverseTol = 1e-10;    // on M M^-1 = I
constexpr double kImagResidueTol = 1e-8; // relative, when dropping imag parts

}  // namespace

std::string to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::dft: return "dft";
    case TransformKind::dct: return "dct";
    case TransformKind::dwt4: return "dwt4";
    case TransformKind::custom: return "custom";
  }
  return "unknown";
}

TransformSpec::TransformSpec(TransformKind kind, Matrix m, Matrix m_inv,
                             double l)
    : kind_(kind),
      n3_(m.rows()),
      l_(l),
      real_(true),
      mr_(std::move(m)),
      mr_inv_(std::move(m_inv)) {
  mc_ = mr_.cast<std::complex<double>>();
  mc_inv_ = mr_inv_.cast<std::complex<double>>();
  validate();
}

TransformSpec::TransformSpec(TransformKind kind, ComplexMatrix m,
                             ComplexMatrix m_inv, double l)
    : kind_(kind),
      n3_(m.rows()),
      l_(l),
      real_(false),
      mc_(std::move(m)),
      mc_inv_(std::move(m_inv)) {
  validate();
}

void TransformSpec::validate() const {
  if (n3_ < 1) throw InvalidArgument("transform length must be >= 1");
  if (l_ <= 0) throw InvalidArgument("transform scale l must be positive");
  const ComplexMatrix gram = mc_.adjoint() * mc_;
  const ComplexMatrix ident = ComplexMatrix::Identity(n3_, n3_);
  const double cond_err = (gram - l_ * ident).cwiseAbs().maxCoeff();
  if (cond_err > kConditionTol * std::max(1.0, l_)) {
    throw InvalidArgument("transform matrix fails the M* M = l I condition "
                          "(max deviation " + std::to_string(cond_err) + ")");
  }
  const double inv_err = (mc_ * mc_inv_ - ident).cwiseAbs().maxCoeff();
  if (inv_err > kInverseTol) {
    throw InvalidArgument("transform inverse is inaccurate (max deviation " +
                          std::to_string(inv_err) + ")");
  }
}

const Matrix& TransformSpec::real_matrix() const {
  if (!real_) throw InvalidArgument("transform matrix is complex");
  return mr_;
}

const Matrix& TransformSpec::real_inverse() const {
  if (!real_) throw InvalidArgument("transform matrix is complex");
  return mr_inv_;
}

TransformSpec TransformSpec::dct(Index n3) {
  if (n3 < 1) throw InvalidArgument("dct length must be >= 1");
  Matrix m(n3, n3);
  const double base = std::sqrt(1.0 / static_cast<double>(n3));
  const double other = std::sqrt(2.0 / static_cast<double>(n3));
  for (Index k = 0; k < n3; ++k) {
    const double c = (k == 0) ? base : other;
    for (Index n = 0; n < n3; ++n) {
      m(k, n) = c * std::cos(std::numbers::pi * (2.0 * n + 1.0) * k /
                             (2.0 * static_cast<double>(n3)));
    }
  }
  Matrix m_inv = m.transpose();
  return TransformSpec(TransformKind::dct, std::move(m), std::move(m_inv),
                       1.0);
}

TransformSpec TransformSpec::dft(Index n3) {
  if (n3 < 1) throw InvalidArgument("dft length must be >= 1");
  ComplexMatrix m(n3, n3);
  for (Index j = 0; j < n3; ++j) {
    for (Index k = 0; k < n3; ++k) {
      const double angle = -2.0 * std::numbers::pi *
                           static_cast<double>(j) * static_cast<double>(k) /
                           static_cast<double>(n3);
      m(j, k) = std::complex<double>(std::cos(angle), std::sin(angle));
    }
  }
  ComplexMatrix m_inv = m.adjoint() / static_cast<double>(n3);
  return TransformSpec(TransformKind::dft, std::move(m), std::move(m_inv),
                       static_cast<double>(n3));
}

TransformSpec TransformSpec::dwt4(Index n3) {
  if (n3 < 2 || n3 % 2 != 0) {
    throw UnsupportedError(
        "dwt4 requires an even length >= 2 (periodized single-level "
        "wavelet), got " + std::to_string(n3));
  }
  const double s3 = std::sqrt(3.0);
  const double norm = 4.0 * std::numbers::sqrt2;
  const double h[4] = {(1.0 + s3) / norm, (3.0 + s3) / norm,
                       (3.0 - s3) / norm, (1.0 - s3) / norm};
  const double g[4] = {h[3], -h[2], h[1], -h[0]};

  Matrix m = Matrix::Zero(n3, n3);
  const Index half = n3 / 2;
  for (Index i = 0; i < half; ++i) {
    for (Index c = 0; c < 4; ++c) {
      const Index col = (2 * i + c) % n3;
      m(i, col) += h[c];
      m(half + i, col) += g[c];
    }
  }
  Matrix m_inv = m.transpose();
  return TransformSpec(TransformKind::dwt4, std::move(m), std::move(m_inv),
                       1.0);
}

TransformSpec TransformSpec::custom(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw InvalidArgument("custom transform matrix must be square");
  }
  const double l = (m.transpose() * m).diagonal().mean();
  Matrix m_inv = m.inverse();
  return TransformSpec(TransformKind::custom, m, std::move(m_inv), l);
}

TransformSpec TransformSpec::custom(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw InvalidArgument("custom transform matrix must be square");
  }
  const double l = (m.adjoint() * m).diagonal().real().mean();
  ComplexMatrix m_inv = m.inverse();
  return TransformSpec(TransformKind::custom, m, std::move(m_inv), l);
}

TransformSpec build_transform(TransformKind kind, Index n3) {
  switch (kind) {
    case TransformKind::dct: return TransformSpec::dct(n3);
    case TransformKind::dft: return TransformSpec::dft(n3);
    case TransformKind::dwt4: return TransformSpec::dwt4(n3);
    case TransformKind::custom:
      throw InvalidArgument(
          "custom transforms require a matrix; use TransformSpec::custom");
  }
  throw InvalidArgument("unknown transform kind");
}

namespace {

void check_length(const TransformSpec& t, Index n3) {
  if (t.length() != n3) {
    throw ShapeError("transform of length " + std::to_string(t.length()) +
                     " applied to tensor with n3 = " + std::to_string(n3));
  }
}

/// Split a complex tensor into its real part, verifying the imaginary
/// residue is negligible relative to the result.
Tensor3 real_part_checked(const ComplexTensor3& z) {
  Tensor3 out(z.n1(), z.n2(), z.n3());
  double re2 = 0, im2 = 0;
  auto dst = out.data();
  auto src = z.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double re = src[i].real(), im = src[i].imag();
    dst[i] = re;
    re2 += re * re;
    im2 += im * im;
  }
  const double residue = std::sqrt(im2);
  const double scale = std::max(std::sqrt(re2), 1e-12);
  if (residue > kImagResidueTol * scale) {
    throw NumericError(
        "imaginary residue " + std::to_string(residue) +
        " exceeds the tolerance for a real-valued inverse transform");
  }
  return out;
}

}  // namespace

Tensor3 forward(const TransformSpec& t, const Tensor3& x) {
  check_length(t, x.n3());
  return mode3_product(x, t.real_matrix());
}

ComplexTensor3 forward_complex(const TransformSpec& t, const Tensor3& x) {
  check_length(t, x.n3());
  return mode3_product(x, t.matrix());
}

Tensor3 inverse(const TransformSpec& t, const Tensor3& xbar) {
  check_length(t, xbar.n3());
  return mode3_product(xbar, t.real_inverse());
}

Tensor3 inverse(const TransformSpec& t, const ComplexTensor3& xbar) {
  check_length(t, xbar.n3());
  return real_part_checked(mode3_product(xbar, t.inverse_matrix()));
}

Tensor3 mproduct(const TransformSpec& t, const Tensor3& x, const Tensor3& y) {
  if (x.n2() != y.n1()) {
    throw ShapeError("mproduct: inner dimensions do not match");
  }
  if (x.n3() != y.n3()) {
    throw ShapeError("mproduct: tensors must share the slice count");
  }
  check_length(t, x.n3());

  if (t.is_real()) {
    const Tensor3 xbar = forward(t, x);
    const Tensor3 ybar = forward(t, y);
    Tensor3 zbar(x.n1(), y.n2(), x.n3());
    for (Index k = 0; k < x.n3(); ++k) {
      zbar.slice(k).noalias() = xbar.slice(k) * ybar.slice(k);
    }
    return inverse(t, zbar);
  }

  const ComplexTensor3 xbar = forward_complex(t, x);
  const ComplexTensor3 ybar = forward_complex(t, y);
  ComplexTensor3 zbar(x.n1(), y.n2(), x.n3());
  for (Index k = 0; k < x.n3(); ++k) {
    zbar.slice(k).noalias() = xbar.slice(k) * ybar.slice(k);
  }
  return inverse(t, zbar);
}

Tensor3 conj_transpose(const TransformSpec& t, const Tensor3& x) {
  check_length(t, x.n3());
  if (t.is_real()) {
    const Tensor3 xbar = forward(t, x);
    Tensor3 zbar(x.n2(), x.n1(), x.n3());
    for (Index k = 0; k < x.n3(); ++k) {
      zbar.slice(k) = xbar.slice(k).transpose();
    }
    return inverse(t, zbar);
  }
  const ComplexTensor3 xbar = forward_complex(t, x);
  ComplexTensor3 zbar(x.n2(), x.n1(), x.n3());
  for (Index k = 0; k < x.n3(); ++k) {
    zbar.slice(k) = xbar.slice(k).adjoint();
  }
  return inverse(t, zbar);
}

Tensor3 identity_tensor(const TransformSpec& t, Index n) {
  if (n < 1) throw InvalidArgument("identity tensor size must be >= 1");
  if (t.is_real()) {
    Tensor3 ibar(n, n, t.length());
    for (Index k = 0; k < t.length(); ++k) {
      ibar.slice(k) = Matrix::Identity(n, n);
    }
    return inverse(t, ibar);
  }
  ComplexTensor3 ibar(n, n, t.length());
  for (Index k = 0; k < t.length(); ++k) {
    ibar.slice(k) = ComplexMatrix::Identity(n, n);
  }
  return inverse(t, ibar);
}

}  // namespace tlrd
