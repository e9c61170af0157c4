// Copyright 2026 The c3smc Authors
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

#ifndef C3SMC__ERROR_HPP_
#define C3SMC__ERROR_HPP_

#include <stdexcept>
#include <string>

namespace c3smc
{

enum class ErrorKind
{
  kInvalidInput,
  kDomain,
  kSingularity,
  kInCollision,
  kValidation,
  kAborted,
};

inline const char * to_string(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::kInvalidInput:
      return "invalid input";
    case ErrorKind::kDomain:
      return "domain error";
    case ErrorKind::kSingularity:
      return "singular dynamics";
    case ErrorKind::kInCollision:
      return "in collision";
    case ErrorKind::kValidation:
      return "validation error";
    case ErrorKind::kAborted:
      return "aborted";
  }
  return "unknown";
}

/// Library-wide exception. `kind()` lets callers branch without parsing text.
class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string & what)
  : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
  {
  }

  ErrorKind kind() const noexcept {return kind_;}

private:
  ErrorKind kind_;
};

}  // namespace c3smc

#endif  // C3SMC__ERROR_HPP_
