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

#include "tlrd/tensor.hpp"

namespace tlrd::ref {

Matrix bcirc(const Tensor3& x) {
  const Index n1 = x.n1(), n2 = x.n2(), n3 = x.n3();
  Matrix out(n1 * n3, n2 * n3);
  for (Index c = 0; c < n3; ++c) {
    for (Index r = 0; r < n3; ++r) {
      const Index k = ((r - c) % n3 + n3) % n3;
      out.block(r * n1, c * n2, n1, n2) = x.slice(k);
    }
  }
  return out;
}

Tensor3 tproduct(const Tensor3& x, const Tensor3& y) {
  const Index n1 = x.n1(), n2 = x.n2(), n3 = x.n3();
  if (y.n1() != n2) {
    throw ShapeError("tproduct: inner dimensions do not match");
  }
  if (y.n3() != n3) {
    throw ShapeError("tproduct: tensors must share the slice count");
  }
  const Index m = y.n2();

  // unfold stacks the slices of y vertically into an (n2*n3) x m matrix.
  Matrix unfolded(n2 * n3, m);
  for (Index k = 0; k < n3; ++k) {
    unfolded.block(k * n2, 0, n2, m) = y.slice(k);
  }

  const Matrix product = bcirc(x) * unfolded;

  Tensor3 out(n1, m, n3);
  for (Index k = 0; k < n3; ++k) {
    out.slice(k) = product.block(k * n1, 0, n1, m);
  }
  return out;
}

}  // namespace tlrd::ref
