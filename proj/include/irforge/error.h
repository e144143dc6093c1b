// Copyright 2026 The irforge Authors.
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

#ifndef IRFORGE_ERROR_H_
#define IRFORGE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace irforge {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  // Image codecs.
  kMalformedFile,
  kUnsupportedDepth,
  kUnsupportedColorType,
  kFormatChannelMismatch,
  // Pixel operations.
  kOutOfRange,
  kChannelMismatch,
  kShapeMismatch,
  // Features.
  kImageTooSmall,
  kMalformedFeatureFile,
  kDimensionMismatch,
  kSourceMismatch,
  // Statistics and scores.
  kInsufficientSamples,
  kNumericalFailure,
  kNonFiniteInput,
  kEmptySet,
  // Dataset pairing.
  kMissingRoot,
  kEmptyPool,
  kModalityUnavailable,
  kMalformedManifest,
  // Pipeline.
  kUnknownTask,
  kMissingExternalOutput,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (the CLI in particular) can decide between per-item and fatal
// handling without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace irforge

#endif  // IRFORGE_ERROR_H_
