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

#ifndef SENSEL_ERROR_H_
#define SENSEL_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace sensel {

enum class ErrorCode {
  kDuplicateSensor,
  kIndexOutOfRange,
  kSingularInformation,
  kRankDeficient,
  kEigenFailure,
  kZeroReference,
  kTooManySensors,
  kNoAdmissibleCandidate,
  kInstanceTooLarge,
  kNotImplemented,
  kFormatError,
  kDataError,
  kRankOutOfRange,
  kFoldError,
  kConfigError,
  kInvalidArgument,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Process exit status for the CLI: 2 config, 3 data, 4 numerical.
int ExitCodeFor(ErrorCode code);

}  // namespace sensel

#endif  // SENSEL_ERROR_H_
