// Copyright 2026 The resalloc Authors.
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

#ifndef RESALLOC_ERRORS_HPP_
#define RESALLOC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace resalloc {

// Invalid user-facing configuration (bad parameters, unsupported pairings).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Container dimensions disagree with the problem instance.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Index outside its valid range.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Non-finite input where a finite value is required.
class NumericError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A caller broke a precondition of a learner or analysis routine.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The requested operation does not apply to this reward family or instance.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Brute-force enumeration was refused because the instance is too large.
class EnumerationInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace resalloc

#endif  // RESALLOC_ERRORS_HPP_
