// Copyright 2026 The fedchaos Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEDCHAOS_ERROR_H_
#define FEDCHAOS_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace fedchaos {

enum class ErrorCode {
  kConfiguration,
  kDimension,
  kDomain,
  kNumerical,
  kConsistency,
  kIntegrity,
  kFormat,
  kSchema,
  kFeasibility,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure surfaced by the library is an Error carrying a category, so
// callers (and the CLI) can map it to a diagnostic without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void Fail(ErrorCode code, const std::string& message);

}  // namespace fedchaos

#endif  // FEDCHAOS_ERROR_H_
