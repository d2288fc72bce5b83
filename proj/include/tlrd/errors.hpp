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

#ifndef TLRD_ERRORS_HPP
#define TLRD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tlrd {

/// Base class of all tlrd exceptions.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Incompatible tensor or matrix dimensions.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A slice or entry index is out of range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// A numeric computation produced an unusable result (failed factorization,
/// NaN iterates, excessive imaginary residue, ...).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Bad parameter values or a transform matrix failing its validity check.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A requested configuration the library deliberately does not support
/// (e.g. a wavelet transform of odd length).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A statistic that is mathematically undefined for the given input
/// (empty mask, constant image in a correlation, ...).
class UndefinedStatError : public Error {
 public:
  using Error::Error;
};

/// File format or filesystem failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tlrd

#endif  // TLRD_ERRORS_HPP
