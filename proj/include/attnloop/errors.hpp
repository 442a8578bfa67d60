// Copyright 2026 The attnloop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ATTNLOOP_ERRORS_HPP_
#define ATTNLOOP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace attnloop {

// Error taxonomy mirrors the CLI exit-code contract:
//   ConfigError -> 2, IoError -> 3, InsufficientDataError -> 4.
// Everything else (UsageError, InvalidArgument) is a caller bug.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// Estimator received inputs it cannot produce a number for (e.g. a paired
// t-test with zero-variance differences).
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

// API misuse: precondition violation, wrong model variant, null handle.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace attnloop

#endif  // ATTNLOOP_ERRORS_HPP_
