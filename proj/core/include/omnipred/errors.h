// Copyright 2026 The omnipred Authors.
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

#ifndef OMNIPRED_ERRORS_H_
#define OMNIPRED_ERRORS_H_

#include <stdexcept>
#include <string>

namespace omnipred {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments or malformed inputs (dimension mismatch, index out of range).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Forecaster or harness calls made out of protocol order.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// A configured size cap (registry, grid, DP horizon, oracle size) was hit.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace omnipred

#endif  // OMNIPRED_ERRORS_H_
