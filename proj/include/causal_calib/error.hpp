/*
 * Copyright 2026 The causal-calib Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace causal_calib {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input, violated precondition or bad option value.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values, failed convergence and other numeric breakdowns.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A regression design whose columns are linearly dependent.
class RankDeficientError : public NumericError {
 public:
  RankDeficientError(const std::string& what, int column)
      : NumericError(what), column_(column) {}

  int column() const noexcept { return column_; }

 private:
  int column_;
};

}  // namespace causal_calib
