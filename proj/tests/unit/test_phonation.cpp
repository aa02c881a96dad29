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


#include <gtest/gtest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "vocalmark/phonation.hpp"
#include "vocalmark/pitch.hpp"
#include "vocalmark/synth.hpp"

using namespace vocalmark;

namespace {

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::kInvalidArgument;
}

AudioBuffer mono(std::vector<double> x) { return AudioBuffer::mono(std::move(x), 16000); }

AudioBuffer scaled(AudioBuffer b, double g) {
  for (auto& v : b.channels[0]) v *= g;
  return b;
}

// One-pole integrator: -6 dB/octave well above its corner.
AudioBuffer integrated(const AudioBuffer& b) {
  auto out = b;
  double y = 0.0;
  for (auto& v : out.channels[0]) v = y = v + 0.995 * y;
  synth::detail::normalize_peak(out.channels[0], 0.5);
  return out;
}

}  // namespace

TEST(Intensity, FullScaleSineClosedForm) {
  const double expected = 10.0 * std::log10(0.5 / (2e-5 * 2e-5));
  EXPECT_NEAR(intensity_mean(mono(oracle::sine(440, 1.0, 1.0, 16000))), expected, 0.05);
  EXPECT_NEAR(expected, 90.97, 0.005);
}

TEST(Intensity, HalfAmplitude) {
  const double a = intensity_mean(mono(oracle::sine(440, 1.0, 1.0, 16000)));
  const double b = intensity_mean(mono(oracle::sine(440, 0.5, 1.0, 16000)));
  EXPECT_NEAR(a - b, 6.02, 0.05);
}

TEST(Intensity, GainLaw) {
  const auto x = synth::synth_formant_voice(130, std::vector<synth::Resonator>{{650, 80}}, 1.0, 16000);
  const double ref = intensity_mean(x);
  for (double g : {0.1, 0.3, 1.7}) EXPECT_NEAR(intensity_mean(scaled(x, g)) - ref, 20.0 * std::log10(g), 0.05);
}

TEST(Intensity, Silence) {
  EXPECT_EQ(code_of([] { intensity_mean(mono(std::vector<double>(16000, 0.0))); }), Errc::kSilentSignal);
}

TEST(Intensity, IgnoresQuietFrames) {
  // Speech-level frames only: appending silence leaves the mean unchanged.
  auto x = oracle::sine(440, 0.5, 1.0, 16000);
  const double a = intensity_mean(mono(x));
  x.insert(x.end(), 16000, 0.0);
  EXPECT_NEAR(intensity_mean(mono(x)), a, 0.1);
}

TEST(Hnr, CleanPulseTrain) {
  const auto x = synth::synth_pulse_train(200, 1.0, 16000);
  EXPECT_GE(hnr_mean(x, pitch_track_two_pass(x)), 40.0);
}

TEST(Hnr, TracksSnrAndIsMonotone) {
  const auto clean = synth::synth_pulse_train(200, 2.0, 16000);
  double prev = -1e9;
  for (double snr : {0.0, 10.0, 20.0, 30.0}) {
    const auto noisy = synth::add_noise(clean, snr, 21);
    const double h = hnr_mean(noisy, pitch_track_two_pass(clean));
    if (snr == 10.0) {
      EXPECT_NEAR(h, 10.0, 2.0);
    }
    EXPECT_GT(h, prev);
    prev = h;
  }
}

TEST(Hnr, NoVoicedFrames) {
  const auto x = synth::synth_pulse_train(200, 1.0, 16000);
  PitchTrack empty;
  EXPECT_EQ(code_of([&] { hnr_mean(x, empty); }), Errc::kNoVoicedFrames);
}

TEST(Slope, FlatPulseTrain) {
  const auto x = synth::synth_pulse_train(150, 2.0, 16000);
  EXPECT_NEAR(spectral_slope(x, pitch_track_two_pass(x)), 0.0, 1.0);
}

TEST(Slope, SixDbPerOctave) {
  const auto x = integrated(synth::synth_pulse_train(150, 2.0, 16000));
  EXPECT_NEAR(spectral_slope(x, pitch_track_two_pass(x)), -6.0, 1.0);
}

TEST(Slope, PureSineHasOneBand) {
  const auto x = mono(oracle::sine(1000, 0.5, 2.0, 16000));
  EXPECT_EQ(code_of([&] { spectral_slope(x, pitch_track_two_pass(x)); }), Errc::kInsufficientBandwidth);
}

TEST(Slope, NeedsVoicing) {
  const auto x = synth::synth_pulse_train(150, 1.0, 16000);
  PitchTrack empty;
  EXPECT_EQ(code_of([&] { spectral_slope(x, empty); }), Errc::kNoVoicedFrames);
}

TEST(Slope, GainInvariant) {
  const auto x = synth::synth_formant_voice(130, std::vector<synth::Resonator>{{650, 80}, {1100, 90}}, 1.0, 16000);
  const auto t = pitch_track_two_pass(x);
  EXPECT_NEAR(spectral_slope(x, t), spectral_slope(scaled(x, 0.2), t), 1e-6);
}

TEST(Cpp, PulseTrainIsProminent) {
  EXPECT_GT(cpp_mean(synth::synth_pulse_train(200, 1.0, 16000)), 15.0);
}

TEST(Cpp, NoiseBelowPulseEverySeed) {
  const auto pulses = synth::synth_pulse_train(200, 1.0, 16000);
  const double p = cpp_mean(pulses);
  double rms = 0.0;
  for (double v : pulses.channels[0]) rms += v * v;
  rms = std::sqrt(rms / static_cast<double>(pulses.frames()));
  for (std::uint64_t s = 0; s < 5; ++s) EXPECT_LT(cpp_mean(mono(synth::white_noise(16000, rms, s))), p);
}

TEST(Cpp, Silence) {
  EXPECT_EQ(code_of([] { cpp_mean(mono(std::vector<double>(16000, 0.0))); }), Errc::kSilentSignal);
}

TEST(Cpp, DecreasesWithNoise) {
  const auto clean = synth::synth_pulse_train(200, 1.0, 16000);
  double prev = 1e9;
  for (double snr : {30.0, 20.0, 10.0, 0.0}) {
    const double c = cpp_mean(synth::add_noise(clean, snr, 2));
    EXPECT_LT(c, prev);
    prev = c;
  }
}

TEST(MeanInRange, SkipsNanAndOutOfRange) {
  const std::vector<double> t{0, 1, 2, 3}, v{1, std::nan(""), 3, 5};
  EXPECT_DOUBLE_EQ(mean_in_range(t, v, 0, 2), 2.0);
  EXPECT_TRUE(std::isnan(mean_in_range(t, v, 10, 20)));
}
