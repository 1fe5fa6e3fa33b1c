// Copyright 2026 The Forge Authors
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

#ifndef FORGE_ERRORS_HPP_
#define FORGE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace forge {

// Malformed or semantically invalid input (bad file, violated precondition).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A bound, cost identity or structural invariant failed at runtime.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Request exceeds a hard size limit of an exhaustive procedure.
class SizeGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InputError(what);
}

inline void ensure(bool cond, const std::string& what) {
  if (!cond) throw InvariantViolation(what);
}

}  // namespace forge

#endif  // FORGE_ERRORS_HPP_
