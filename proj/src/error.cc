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

#include "fedchaos/error.h"

namespace fedchaos {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfiguration:
      return "configuration error";
    case ErrorCode::kDimension:
      return "dimension error";
    case ErrorCode::kDomain:
      return "domain error";
    case ErrorCode::kNumerical:
      return "numerical error";
    case ErrorCode::kConsistency:
      return "consistency error";
    case ErrorCode::kIntegrity:
      return "integrity error";
    case ErrorCode::kFormat:
      return "format error";
    case ErrorCode::kSchema:
      return "schema error";
    case ErrorCode::kFeasibility:
      return "feasibility error";
    case ErrorCode::kIo:
      return "io error";
  }
  return "error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace fedchaos
