// Copyright 2026 The Sensel Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sensel/error.h"

namespace sensel {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateSensor: return "DuplicateSensor";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kSingularInformation: return "SingularInformation";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kEigenFailure: return "EigenFailure";
    case ErrorCode::kZeroReference: return "ZeroReference";
    case ErrorCode::kTooManySensors: return "TooManySensors";
    case ErrorCode::kNoAdmissibleCandidate: return "NoAdmissibleCandidate";
    case ErrorCode::kInstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::kNotImplemented: return "NotImplemented";
    case ErrorCode::kFormatError: return "FormatError";
    case ErrorCode::kDataError: return "DataError";
    case ErrorCode::kRankOutOfRange: return "RankOutOfRange";
    case ErrorCode::kFoldError: return "FoldError";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigError:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kTooManySensors:
    case ErrorCode::kInstanceTooLarge:
    case ErrorCode::kNotImplemented:
    case ErrorCode::kFoldError:
    case ErrorCode::kRankOutOfRange:
    case ErrorCode::kDuplicateSensor:
    case ErrorCode::kIndexOutOfRange:
      return 2;
    case ErrorCode::kFormatError:
    case ErrorCode::kDataError:
      return 3;
    case ErrorCode::kSingularInformation:
    case ErrorCode::kRankDeficient:
    case ErrorCode::kEigenFailure:
    case ErrorCode::kZeroReference:
    case ErrorCode::kNoAdmissibleCandidate:
      return 4;
  }
  return 1;
}

}  // namespace sensel
