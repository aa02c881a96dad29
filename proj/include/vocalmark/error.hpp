// Copyright 2026 The vocalmark Authors.
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

namespace vocalmark {

// Every failure raised by the library carries one of these codes so that
// callers (the pipeline, the CLI) can record or map it without parsing text.
enum class Errc {
  kInvalidArgument,
  kIoFailure,
  kMalformedRiff,
  kUnsupportedEncoding,
  kTruncatedData,
  kSignalTooShort,
  kZeroEnergyFrame,
  kOrderTooHigh,
  kNoVoicedFrames,
  kSilentSignal,
  kInsufficientBandwidth,
  kZeroDuration,
  kZeroPhonationTime,
  kMalformedTextGrid,
  kNonMonotoneIntervals,
  kMissingPhoneTier,
  kNoTargetVowels,
  kVowelOutOfRange,
  kBadFieldCount,
  kEmptyField,
  kEmptyGroup,
  kBadF0,
  kBadResonator,
  kAlignmentMissing,
  kBadConfig,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kIoFailure: return "IoFailure";
    case Errc::kMalformedRiff: return "MalformedRiff";
    case Errc::kUnsupportedEncoding: return "UnsupportedEncoding";
    case Errc::kTruncatedData: return "TruncatedData";
    case Errc::kSignalTooShort: return "SignalTooShort";
    case Errc::kZeroEnergyFrame: return "ZeroEnergyFrame";
    case Errc::kOrderTooHigh: return "OrderTooHigh";
    case Errc::kNoVoicedFrames: return "NoVoicedFrames";
    case Errc::kSilentSignal: return "SilentSignal";
    case Errc::kInsufficientBandwidth: return "InsufficientBandwidth";
    case Errc::kZeroDuration: return "ZeroDuration";
    case Errc::kZeroPhonationTime: return "ZeroPhonationTime";
    case Errc::kMalformedTextGrid: return "MalformedTextGrid";
    case Errc::kNonMonotoneIntervals: return "NonMonotoneIntervals";
    case Errc::kMissingPhoneTier: return "MissingPhoneTier";
    case Errc::kNoTargetVowels: return "NoTargetVowels";
    case Errc::kVowelOutOfRange: return "VowelOutOfRange";
    case Errc::kBadFieldCount: return "BadFieldCount";
    case Errc::kEmptyField: return "EmptyField";
    case Errc::kEmptyGroup: return "EmptyGroup";
    case Errc::kBadF0: return "BadF0";
    case Errc::kBadResonator: return "BadResonator";
    case Errc::kAlignmentMissing: return "AlignmentMissing";
    case Errc::kBadConfig: return "BadConfig";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        message_(message) {}

  Errc code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }

 private:
  Errc code_;
  std::string message_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace vocalmark
