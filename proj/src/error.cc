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

#include "irforge/error.h"

namespace irforge {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kMalformedFile: return "MalformedFile";
    case ErrorCode::kUnsupportedDepth: return "UnsupportedDepth";
    case ErrorCode::kUnsupportedColorType: return "UnsupportedColorType";
    case ErrorCode::kFormatChannelMismatch: return "FormatChannelMismatch";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kChannelMismatch: return "ChannelMismatch";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kImageTooSmall: return "ImageTooSmall";
    case ErrorCode::kMalformedFeatureFile: return "MalformedFeatureFile";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kSourceMismatch: return "SourceMismatch";
    case ErrorCode::kInsufficientSamples: return "InsufficientSamples";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kEmptySet: return "EmptySet";
    case ErrorCode::kMissingRoot: return "MissingRoot";
    case ErrorCode::kEmptyPool: return "EmptyPool";
    case ErrorCode::kModalityUnavailable: return "ModalityUnavailable";
    case ErrorCode::kMalformedManifest: return "MalformedManifest";
    case ErrorCode::kUnknownTask: return "UnknownTask";
    case ErrorCode::kMissingExternalOutput: return "MissingExternalOutput";
  }
  return "Unknown";
}

}  // namespace irforge
