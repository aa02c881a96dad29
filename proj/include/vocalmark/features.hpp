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


// The fourteen exemplar features and a container for per-feature values
// with per-feature failure codes.

#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "vocalmark/error.hpp"

namespace vocalmark {

enum class Feature {
  kDuration,
  kSpeakingRate,
  kArticulationRate,
  kPauseRate,
  kIntensityMean,
  kPitchMean,
  kPitchSd,
  kHnrMean,
  kSpectralSlope,
  kCppMean,
  kF1Mean,
  kF2Mean,
  kSpectralGravity,
  kSpectralDeviation,
};

inline constexpr std::size_t kFeatureCount = 14;

inline constexpr std::array<Feature, kFeatureCount> kAllFeatures{
    Feature::kDuration,     Feature::kSpeakingRate,  Feature::kArticulationRate, Feature::kPauseRate,
    Feature::kIntensityMean, Feature::kPitchMean,    Feature::kPitchSd,          Feature::kHnrMean,
    Feature::kSpectralSlope, Feature::kCppMean,      Feature::kF1Mean,           Feature::kF2Mean,
    Feature::kSpectralGravity, Feature::kSpectralDeviation,
};

inline constexpr std::string_view name(Feature f) {
  constexpr std::array<std::string_view, kFeatureCount> names{
      "duration",  "speaking_rate", "articulation_rate", "pause_rate", "intensity_mean",
      "pitch_mean", "pitch_sd",     "hnr_mean",          "spectral_slope", "cpp_mean",
      "f1_mean",   "f2_mean",       "spectral_gravity",  "spectral_deviation",
  };
  return names[static_cast<std::size_t>(f)];
}

inline std::optional<Feature> feature_from_name(std::string_view s) {
  for (auto f : kAllFeatures)
    if (name(f) == s) return f;
  return std::nullopt;
}

// Timing features exist only for whole recordings.
inline constexpr bool is_timing(Feature f) {
  return f == Feature::kDuration || f == Feature::kSpeakingRate || f == Feature::kArticulationRate ||
         f == Feature::kPauseRate;
}

struct FeatureValues {
  std::array<std::optional<double>, kFeatureCount> values{};
  std::array<std::optional<Errc>, kFeatureCount> errors{};

  const std::optional<double>& operator[](Feature f) const { return values[static_cast<std::size_t>(f)]; }
  std::optional<Errc> error(Feature f) const { return errors[static_cast<std::size_t>(f)]; }

  void set(Feature f, double v) {
    values[static_cast<std::size_t>(f)] = v;
    errors[static_cast<std::size_t>(f)].reset();
  }
  void set_error(Feature f, Errc e) {
    values[static_cast<std::size_t>(f)].reset();
    errors[static_cast<std::size_t>(f)] = e;
  }

  bool operator==(const FeatureValues&) const = default;
};

// Runs fn and stores its value, or the error code it raised.
template <class Fn>
void record_feature(FeatureValues& out, Feature f, Fn&& fn) {
  try {
    out.set(f, fn());
  } catch (const Error& e) {
    out.set_error(f, e.code());
  }
}

}  // namespace vocalmark
