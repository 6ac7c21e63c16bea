// Copyright 2026 The Epiaudit Authors.
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace epiaudit {

// Every failure the toolkit reports carries one of these codes. The string
// form (to_string) is what ends up in reports and CLI error messages.
enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kConfig,
  kParse,
  // acquisition
  kNetworkError,
  kNotFound,
  kRateLimited,
  kEmptyManifest,
  kCacheMiss,
  kDigestMismatch,
  // parsing
  kContentRootMissing,
  kNoReferences,
  // taxonomy
  kUnresolvable,
  kClientError,
  kResolutionDepthExceeded,
  kMalformedResponse,
  // agreement
  kDegenerate,
  kNoVariation,
  kEmptyClass,
  // profiles / metrics
  kEmptyArticle,
  kInvalidSimplex,
  kZeroVector,
  kZeroVariance,
  kAllTied,
  // networks
  kEmptyBackbone,
  kConstantColumn,
  kIsolatedTopic,
  // scaling
  kSingularDesign,
  kNonpositiveY,
  kInsufficientCorpus,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kIo: return "IO_ERROR";
    case ErrorCode::kConfig: return "CONFIG_ERROR";
    case ErrorCode::kParse: return "PARSE_ERROR";
    case ErrorCode::kNetworkError: return "NETWORK_ERROR";
    case ErrorCode::kNotFound: return "NOT_FOUND";
    case ErrorCode::kRateLimited: return "RATE_LIMITED";
    case ErrorCode::kEmptyManifest: return "EMPTY_MANIFEST";
    case ErrorCode::kCacheMiss: return "CACHE_MISS";
    case ErrorCode::kDigestMismatch: return "DIGEST_MISMATCH";
    case ErrorCode::kContentRootMissing: return "CONTENT_ROOT_MISSING";
    case ErrorCode::kNoReferences: return "NO_REFERENCES";
    case ErrorCode::kUnresolvable: return "UNRESOLVABLE";
    case ErrorCode::kClientError: return "CLIENT_ERROR";
    case ErrorCode::kResolutionDepthExceeded: return "RESOLUTION_DEPTH_EXCEEDED";
    case ErrorCode::kMalformedResponse: return "MALFORMED_RESPONSE";
    case ErrorCode::kDegenerate: return "DEGENERATE";
    case ErrorCode::kNoVariation: return "NO_VARIATION";
    case ErrorCode::kEmptyClass: return "EMPTY_CLASS";
    case ErrorCode::kEmptyArticle: return "EMPTY_ARTICLE";
    case ErrorCode::kInvalidSimplex: return "INVALID_SIMPLEX";
    case ErrorCode::kZeroVector: return "ZERO_VECTOR";
    case ErrorCode::kZeroVariance: return "ZERO_VARIANCE";
    case ErrorCode::kAllTied: return "ALL_TIED";
    case ErrorCode::kEmptyBackbone: return "EMPTY_BACKBONE";
    case ErrorCode::kConstantColumn: return "CONSTANT_COLUMN";
    case ErrorCode::kIsolatedTopic: return "ISOLATED_TOPIC";
    case ErrorCode::kSingularDesign: return "SINGULAR_DESIGN";
    case ErrorCode::kNonpositiveY: return "NONPOSITIVE_Y";
    case ErrorCode::kInsufficientCorpus: return "INSUFFICIENT_CORPUS";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace epiaudit
