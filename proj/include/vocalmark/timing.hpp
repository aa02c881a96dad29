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


// Timing and fluency: speech/pause segmentation and syllable-nucleus
// counting on the intensity contour.

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "vocalmark/audio.hpp"
#include "vocalmark/error.hpp"
#include "vocalmark/phonation.hpp"
#include "vocalmark/pitch.hpp"

namespace vocalmark {

struct TimingParams {
  double silence_threshold_db = -25.0;  // relative to the recording's peak intensity
  double min_dip_db = 2.0;
  double min_pause_s = 0.30;
  bool require_voicing = true;
  double intensity_min_pitch = 50.0;

  void validate() const {
    if (!(silence_threshold_db < 0.0)) fail(Errc::kBadConfig, "silence_threshold_db must be negative");
    if (!(min_dip_db > 0.0)) fail(Errc::kBadConfig, "min_dip_db must be positive");
    if (!(min_pause_s > 0.0)) fail(Errc::kBadConfig, "min_pause_s must be positive");
    if (!(intensity_min_pitch > 0.0)) fail(Errc::kBadConfig, "intensity_min_pitch must be positive");
  }
};

enum class RegionKind { kLeadingSilence, kSpeech, kPause, kTrailingSilence };

inline constexpr std::string_view to_string(RegionKind k) {
  switch (k) {
    case RegionKind::kLeadingSilence: return "leading_silence";
    case RegionKind::kSpeech: return "speech";
    case RegionKind::kPause: return "pause";
    case RegionKind::kTrailingSilence: return "trailing_silence";
  }
  return "?";
}

struct Region {
  double start;
  double end;
  RegionKind kind;

  double duration() const { return end - start; }
};

struct SpeechRegions {
  std::vector<Region> regions;  // contiguous cover of [0, duration]

  std::size_t count(RegionKind k) const {
    return static_cast<std::size_t>(
        std::count_if(regions.begin(), regions.end(), [k](const Region& r) { return r.kind == k; }));
  }
  std::size_t pause_count() const { return count(RegionKind::kPause); }
  std::size_t speech_count() const { return count(RegionKind::kSpeech); }
  double phonation_time() const {
    double t = 0.0;
    for (const auto& r : regions)
      if (r.kind == RegionKind::kSpeech) t += r.duration();
    return t;
  }
};

inline IntensityTrack timing_intensity(std::span<const double> x, double rate, const TimingParams& p) {
  IntensityParams ip;
  ip.min_pitch = p.intensity_min_pitch;
  return intensity_track(x, rate, ip);
}

// Segmentation of a precomputed intensity contour. Frames below the
// threshold are silent; internal silent runs of at least min_pause_s are
// pauses and shorter ones are absorbed into speech. Region edges lie halfway
// between frame centres.
inline SpeechRegions segment_intensity(const IntensityTrack& t, double duration, const TimingParams& p) {
  SpeechRegions out;
  if (duration <= 0.0) return out;
  const std::size_t n = t.times.size();
  const double top = t.max_level();
  if (n == 0 || top <= kSilenceDb) {
    out.regions.push_back({0.0, duration, RegionKind::kLeadingSilence});
    return out;
  }
  const double threshold = top + p.silence_threshold_db;
  auto edge = [&](std::size_t i) {  // boundary before frame i
    if (i == 0) return 0.0;
    if (i >= n) return duration;
    return 0.5 * (t.times[i - 1] + t.times[i]);
  };
  struct Run {
    std::size_t begin, end;
    bool loud;
  };
  std::vector<Run> runs;
  for (std::size_t i = 0; i < n; ++i) {
    const bool loud = t.level_db[i] >= threshold;
    if (runs.empty() || runs.back().loud != loud) runs.push_back({i, i + 1, loud});
    else runs.back().end = i + 1;
  }
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const double a = edge(runs[r].begin), b = edge(runs[r].end);
    RegionKind kind = RegionKind::kSpeech;
    if (!runs[r].loud) {
      if (r == 0) kind = RegionKind::kLeadingSilence;
      else if (r + 1 == runs.size()) kind = RegionKind::kTrailingSilence;
      else if (b - a >= p.min_pause_s) kind = RegionKind::kPause;
    }
    if (!out.regions.empty() && out.regions.back().kind == RegionKind::kSpeech && kind == RegionKind::kSpeech)
      out.regions.back().end = b;
    else
      out.regions.push_back({a, b, kind});
  }
  return out;
}

inline SpeechRegions detect_speech_regions(std::span<const double> x, double rate, const TimingParams& p = {}) {
  p.validate();
  const double duration = static_cast<double>(x.size()) / rate;
  return segment_intensity(timing_intensity(x, rate, p), duration, p);
}

inline SpeechRegions detect_speech_regions(const AudioBuffer& buf, const TimingParams& p = {}) {
  return detect_speech_regions(buf.samples(), buf.sample_rate, p);
}

// Times of intensity peaks that are above the silence threshold and stand
// out by at least min_dip_db on both sides. The dip on a side is the lowest
// level between the peak and the nearest higher frame on that side (an equal
// frame also stops the leftward search, so equal peaks are not double
// counted); beyond the contour ends the level is taken as silence. Flat tops
// count once, at their middle frame.
inline std::vector<double> syllable_nuclei(const IntensityTrack& t, const PitchTrack* pitch, const TimingParams& p) {
  std::vector<double> out;
  const std::size_t n = t.level_db.size();
  const double top = t.max_level();
  if (n == 0 || top <= kSilenceDb) return out;
  const double threshold = top + p.silence_threshold_db;
  std::vector<double> v;
  v.reserve(n + 2);
  v.push_back(kSilenceDb);
  v.insert(v.end(), t.level_db.begin(), t.level_db.end());
  v.push_back(kSilenceDb);
  std::size_t i = 1;
  while (i <= n) {
    if (!(v[i] > v[i - 1])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && v[j + 1] == v[i]) ++j;
    if (!(v[j + 1] < v[i])) {
      i = j + 1;
      continue;
    }
    const double peak = v[i];
    double left_min = peak, right_min = peak;
    for (std::size_t k = i; k-- > 0;) {
      if (v[k] >= peak) break;
      left_min = std::min(left_min, v[k]);
    }
    for (std::size_t k = j + 1; k < v.size(); ++k) {
      if (v[k] > peak) break;
      right_min = std::min(right_min, v[k]);
    }
    const double time = t.times[(i + j) / 2 - 1];
    const bool prominent = peak - left_min >= p.min_dip_db && peak - right_min >= p.min_dip_db;
    const bool voiced = !p.require_voicing || (pitch && pitch->at(time).has_value());
    if (peak >= threshold && prominent && voiced) out.push_back(time);
    i = j + 1;
  }
  return out;
}

inline std::size_t count_syllable_nuclei(const AudioBuffer& buf, const PitchTrack& track, const TimingParams& p = {}) {
  p.validate();
  return syllable_nuclei(timing_intensity(buf.samples(), buf.sample_rate, p), &track, p).size();
}

struct TimingFeatures {
  double duration = 0.0;           // s
  double speaking_rate = 0.0;      // syllables / s
  double articulation_rate = 0.0;  // syllables / s of phonation
  double pause_rate = 0.0;         // pauses / s
  std::size_t n_syllables = 0;
  std::size_t n_pauses = 0;
  double phonation_time = 0.0;  // s
};

inline TimingFeatures timing_features(std::span<const double> x, double rate, const PitchTrack& track,
                                      const TimingParams& p = {}) {
  p.validate();
  TimingFeatures f;
  f.duration = static_cast<double>(x.size()) / rate;
  if (!(f.duration > 0.0)) fail(Errc::kZeroDuration, "recording has zero duration");
  const auto intensity = timing_intensity(x, rate, p);
  const auto regions = segment_intensity(intensity, f.duration, p);
  f.phonation_time = regions.phonation_time();
  f.n_pauses = regions.pause_count();
  f.n_syllables = syllable_nuclei(intensity, &track, p).size();
  if (!(f.phonation_time > 0.0)) fail(Errc::kZeroPhonationTime, "no speech regions; articulation rate undefined");
  const auto syl = static_cast<double>(f.n_syllables);
  f.speaking_rate = syl / f.duration;
  f.articulation_rate = syl / f.phonation_time;
  f.pause_rate = static_cast<double>(f.n_pauses) / f.duration;
  return f;
}

inline TimingFeatures timing_features(const AudioBuffer& buf, const PitchTrack& track, const TimingParams& p = {}) {
  return timing_features(buf.samples(), buf.sample_rate, track, p);
}

}  // namespace vocalmark
