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


// One analysis pass over a canonical recording. Tracks are computed once and
// shared by the whole-recording and per-segment feature sets.

#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "vocalmark/alignment.hpp"
#include "vocalmark/articulation.hpp"
#include "vocalmark/audio.hpp"
#include "vocalmark/error.hpp"
#include "vocalmark/features.hpp"
#include "vocalmark/phonation.hpp"
#include "vocalmark/pitch.hpp"
#include "vocalmark/timing.hpp"

namespace vocalmark {

struct AnalysisParams {
  TwoPassSettings pitch;
  IntensityParams intensity;
  double speech_threshold_db = -25.0;  // intensity mean uses frames within this of the peak
  HnrParams hnr;
  SlopeParams slope;
  CppParams cpp;
  FormantParams formant;
  TimingParams timing;
  VowelSelection vowels;
  double vowel_overrun_tolerance = 0.01;  // s a vowel may extend past the audio before it is rejected
};

class RecordingAnalysis {
 public:
  RecordingAnalysis(AudioBuffer buf, AnalysisParams params = {}) : buf_(std::move(buf)), params_(std::move(params)) {
    if (buf_.channel_count() != 1) fail(Errc::kInvalidArgument, "analysis needs a mono buffer");
    const auto x = buf_.samples();
    const double rate = buf_.sample_rate;
    try {
      pitch_ = pitch_track_two_pass(x, rate, params_.pitch);
    } catch (const Error& e) {
      pitch_error_ = e.code();
    }
    intensity_ = intensity_track(x, rate, params_.intensity);
    cpp_ = cpp_track(x, rate, params_.cpp);
    if (pitch_) {
      hnr_ = hnr_track(x, rate, *pitch_, params_.hnr);
      try {
        formants_ = formant_track(x, rate, *pitch_, params_.formant);
      } catch (const Error& e) {
        formant_error_ = e.code();
      }
    }
  }

  const AudioBuffer& audio() const { return buf_; }
  const AnalysisParams& params() const { return params_; }
  double duration() const { return buf_.duration(); }
  const std::optional<PitchTrack>& pitch() const { return pitch_; }
  const IntensityTrack& intensity() const { return intensity_; }
  const CppTrack& cpp() const { return cpp_; }
  const std::optional<FormantTrack>& formants() const { return formants_; }

  // All fourteen features over the whole recording.
  FeatureValues suprasegmental() const {
    FeatureValues v;
    const auto x = buf_.samples();
    const double rate = buf_.sample_rate;
    std::optional<TimingFeatures> timing;
    std::optional<Errc> timing_error;
    try {
      const PitchTrack empty;
      timing = timing_features(x, rate, pitch_ ? *pitch_ : empty, params_.timing);
    } catch (const Error& e) {
      timing_error = e.code();
    }
    auto timing_value = [&](double TimingFeatures::*field) {
      if (!timing) fail(*timing_error, "timing analysis failed");
      return (*timing).*field;
    };
    record_feature(v, Feature::kDuration, [&] {
      if (!(duration() > 0.0)) fail(Errc::kZeroDuration, "recording has zero duration");
      return duration();
    });
    record_feature(v, Feature::kSpeakingRate, [&] { return timing_value(&TimingFeatures::speaking_rate); });
    record_feature(v, Feature::kArticulationRate, [&] { return timing_value(&TimingFeatures::articulation_rate); });
    record_feature(v, Feature::kPauseRate, [&] { return timing_value(&TimingFeatures::pause_rate); });
    fill_common(v, kBegin, kEnd, x);
    return v;
  }

  // The ten non-timing features over [t0, t1]. Track-based features use the
  // recording-wide tracks restricted to the interval; spectral moments use
  // the segment's own spectrum.
  FeatureValues segment(double t0, double t1) const {
    if (!(t0 < t1)) fail(Errc::kInvalidArgument, "segment must have positive duration");
    FeatureValues v;
    const auto rate = buf_.sample_rate;
    const auto a = static_cast<std::size_t>(std::clamp<double>(std::round(t0 * rate), 0.0, static_cast<double>(buf_.frames())));
    const auto b = static_cast<std::size_t>(std::clamp<double>(std::round(t1 * rate), 0.0, static_cast<double>(buf_.frames())));
    fill_common(v, t0, t1, buf_.samples().subspan(a, b - a));
    return v;
  }

  // Clips a vowel to the audio, rejecting one that overruns by more than the
  // configured tolerance.
  VowelInterval clip(const VowelInterval& vowel) const {
    const double tol = params_.vowel_overrun_tolerance;
    if (vowel.end > duration() + tol || vowel.start < -tol || vowel.start >= duration())
      fail(Errc::kVowelOutOfRange, "vowel [" + std::to_string(vowel.start) + ", " + std::to_string(vowel.end) +
                                       "] lies outside the audio (" + std::to_string(duration()) + " s)");
    VowelInterval out = vowel;
    out.start = std::max(0.0, vowel.start);
    out.end = std::min(duration(), vowel.end);
    return out;
  }

 private:
  static constexpr double kBegin = -std::numeric_limits<double>::infinity();
  static constexpr double kEnd = std::numeric_limits<double>::infinity();

  const PitchTrack& need_pitch() const {
    if (!pitch_) fail(pitch_error_.value_or(Errc::kNoVoicedFrames), "no pitch track");
    return *pitch_;
  }

  void fill_common(FeatureValues& v, double t0, double t1, std::span<const double> seg) const {
    const auto x = buf_.samples();
    const double rate = buf_.sample_rate;
    record_feature(v, Feature::kIntensityMean, [&] {
      if (intensity_.times.empty()) fail(Errc::kSilentSignal, "signal shorter than one intensity window");
      return intensity_energy_mean(intensity_, params_.speech_threshold_db, t0, t1, intensity_.max_level());
    });
    std::optional<PitchStats> ps;
    std::optional<Errc> ps_error;
    try {
      const auto f0 = need_pitch().voiced_f0(t0, t1);
      if (f0.empty()) fail(Errc::kNoVoicedFrames, "no voiced frames in range");
      ps = pitch_stats(f0);
    } catch (const Error& e) {
      ps_error = e.code();
    }
    record_feature(v, Feature::kPitchMean, [&] {
      if (!ps) fail(*ps_error, "pitch");
      return ps->mean_hz;
    });
    record_feature(v, Feature::kPitchSd, [&] {
      if (!ps) fail(*ps_error, "pitch");
      return ps->sd_semitones;
    });
    record_feature(v, Feature::kHnrMean, [&] {
      need_pitch();
      const double m = mean_in_range(hnr_.times, hnr_.hnr_db, t0, t1);
      if (std::isnan(m)) fail(Errc::kNoVoicedFrames, "no voiced HNR frames in range");
      return m;
    });
    record_feature(v, Feature::kSpectralSlope,
                   [&] { return spectral_slope(x, rate, need_pitch(), params_.slope, t0, t1); });
    record_feature(v, Feature::kCppMean, [&] {
      const double m = mean_in_range(cpp_.times, cpp_.cpp_db, t0, t1);
      if (std::isnan(m)) fail(Errc::kSilentSignal, "no analyzable CPP frames in range");
      return m;
    });
    std::optional<FormantMeans> fm;
    std::optional<Errc> fm_error;
    try {
      need_pitch();
      if (!formants_) fail(formant_error_.value_or(Errc::kNoVoicedFrames), "no formant track");
      fm = formant_means(*formants_, t0, t1);
    } catch (const Error& e) {
      fm_error = e.code();
    }
    record_feature(v, Feature::kF1Mean, [&] {
      if (!fm) fail(*fm_error, "formants");
      return fm->f1;
    });
    record_feature(v, Feature::kF2Mean, [&] {
      if (!fm) fail(*fm_error, "formants");
      return fm->f2;
    });
    std::optional<SpectralMoments> mo;
    std::optional<Errc> mo_error;
    try {
      mo = spectral_moments(seg, rate);
    } catch (const Error& e) {
      mo_error = e.code();
    }
    record_feature(v, Feature::kSpectralGravity, [&] {
      if (!mo) fail(*mo_error, "moments");
      return mo->gravity;
    });
    record_feature(v, Feature::kSpectralDeviation, [&] {
      if (!mo) fail(*mo_error, "moments");
      return mo->deviation;
    });
  }

  AudioBuffer buf_;
  AnalysisParams params_;
  std::optional<PitchTrack> pitch_;
  std::optional<Errc> pitch_error_;
  IntensityTrack intensity_;
  CppTrack cpp_;
  HnrTrack hnr_;
  std::optional<FormantTrack> formants_;
  std::optional<Errc> formant_error_;
};

struct VowelFeatureAggregate {
  FeatureValues means;  // timing features are absent
  std::size_t n_instances = 0;
  std::array<std::size_t, kFeatureCount> n_used{};  // instances contributing to each mean
  std::size_t n_rejected = 0;                        // instances outside the audio
};

// Per-instance segment features averaged per feature over the instances for
// which that feature could be computed.
inline VowelFeatureAggregate vowel_level_features(const RecordingAnalysis& analysis,
                                                  std::span<const VowelInterval> vowels) {
  if (vowels.empty()) fail(Errc::kNoTargetVowels, "no target vowels to analyse");
  VowelFeatureAggregate agg;
  agg.n_instances = vowels.size();
  std::array<double, kFeatureCount> sums{};
  std::array<std::optional<Errc>, kFeatureCount> last_error{};
  for (const auto& raw : vowels) {
    VowelInterval v;
    try {
      v = analysis.clip(raw);
    } catch (const Error&) {
      ++agg.n_rejected;
      continue;
    }
    const auto seg = analysis.segment(v.start, v.end);
    for (auto f : kAllFeatures) {
      if (is_timing(f)) continue;
      const auto i = static_cast<std::size_t>(f);
      if (seg.values[i]) {
        sums[i] += *seg.values[i];
        ++agg.n_used[i];
      } else if (seg.errors[i]) {
        last_error[i] = seg.errors[i];
      }
    }
  }
  if (agg.n_rejected == vowels.size()) fail(Errc::kVowelOutOfRange, "every vowel lies outside the audio");
  for (auto f : kAllFeatures) {
    if (is_timing(f)) continue;
    const auto i = static_cast<std::size_t>(f);
    if (agg.n_used[i] > 0) agg.means.set(f, sums[i] / static_cast<double>(agg.n_used[i]));
    else agg.means.set_error(f, last_error[i].value_or(Errc::kNoTargetVowels));
  }
  return agg;
}

inline VowelFeatureAggregate vowel_level_features(const AudioBuffer& buf, std::span<const VowelInterval> vowels,
                                                  const AnalysisParams& params = {}) {
  if (vowels.empty()) fail(Errc::kNoTargetVowels, "no target vowels to analyse");
  return vowel_level_features(RecordingAnalysis(buf, params), vowels);
}

}  // namespace vocalmark
