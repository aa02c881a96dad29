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

#include <chrono>
#include <cmath>

#include "../support/oracles.hpp"
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

AudioBuffer scaled(AudioBuffer b, double g) {
  for (auto& v : b.channels[0]) v *= g;
  return b;
}

}  // namespace

TEST(TwoPassPitch, KnownPulseTrains) {
  for (double f0 : {85.0, 120.0, 200.0, 300.0}) {
    const auto t = pitch_track_two_pass(synth::synth_pulse_train(f0, 2.0, 16000));
    const auto s = pitch_stats(t);
    EXPECT_NEAR(s.mean_hz, f0, f0 <= 85.0 ? 1.0 : 0.01 * f0) << f0;
    EXPECT_GT(t.voiced_count(), 150u);
  }
}

TEST(TwoPassPitch, FloorAdaptsBelowDefault) {
  const auto t = pitch_track_two_pass(synth::synth_pulse_train(85, 2.0, 16000));
  EXPECT_LT(t.params_used.floor, 75.0);
  EXPECT_NEAR(t.params_used.floor, 0.75 * 85.0, 1.0);
  EXPECT_NEAR(t.params_used.ceiling, 1.5 * 85.0, 1.5);
}

TEST(TwoPassPitch, SilenceHasNoVoicing) {
  const auto silent = AudioBuffer::mono(std::vector<double>(32000, 0.0), 16000);
  EXPECT_EQ(code_of([&] { pitch_track_two_pass(silent); }), Errc::kNoVoicedFrames);
}

TEST(TwoPassPitch, NoiseIsMostlyUnvoiced) {
  const auto noise = AudioBuffer::mono(oracle::gaussian(32000, 0.1, 1), 16000);
  try {
    const auto t = pitch_track_two_pass(noise);
    EXPECT_LT(static_cast<double>(t.voiced_count()), 0.1 * static_cast<double>(t.size()));
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kNoVoicedFrames);
  }
}

TEST(TwoPassPitch, TrackInvariants) {
  const auto t = pitch_track_two_pass(synth::synth_pulse_train(180, 1.5, 16000));
  for (std::size_t i = 1; i < t.size(); ++i) ASSERT_GT(t.times[i], t.times[i - 1]);
  for (double f : t.f0)
    if (f > 0.0) {
      ASSERT_GE(f, t.params_used.floor);
      ASSERT_LE(f, t.params_used.ceiling);
    }
}

TEST(TwoPassPitch, GainInvariantPerFrame) {
  const auto x = synth::synth_formant_voice(140, std::vector<synth::Resonator>{{600, 90}, {1100, 100}}, 1.5, 16000);
  const auto a = pitch_track_two_pass(x);
  const auto b = pitch_track_two_pass(scaled(x, 0.25));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a.voiced(i), b.voiced(i)) << i;
    ASSERT_NEAR(a.f0[i], b.f0[i], 0.1);
  }
}

TEST(TwoPassPitch, StrongHarmonicsStayBelowCeilingTrap) {
  const auto x = synth::synth_formant_voice(120, std::vector<synth::Resonator>{{360, 60}, {2400, 100}}, 2.0, 16000);
  const auto t = pitch_track_two_pass(x);
  std::size_t above = 0;
  for (double f : t.f0) above += f > 300.0;
  EXPECT_LT(static_cast<double>(above), 0.01 * static_cast<double>(t.size()));
}

TEST(TwoPassPitch, Fast) {
  const auto x = synth::synth_pulse_train(200, 2.0, 16000);
  const auto t0 = std::chrono::steady_clock::now();
  pitch_track_two_pass(x);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 2.0);
}

TEST(PitchStats, ConstantTrack) {
  const std::vector<double> f(50, 200.0);
  const auto s = pitch_stats(f);
  EXPECT_DOUBLE_EQ(s.mean_hz, 200.0);
  EXPECT_DOUBLE_EQ(s.sd_semitones, 0.0);
}

TEST(PitchStats, OctaveAlternationIsSixSemitones) {
  std::vector<double> f;
  for (int i = 0; i < 40; ++i) f.push_back(i % 2 ? 400.0 : 200.0);
  EXPECT_NEAR(pitch_stats(f).sd_semitones, 6.0, 1e-12);
  EXPECT_DOUBLE_EQ(pitch_stats(f).mean_hz, 300.0);
}

TEST(PitchStats, ScalingInvariance) {
  const auto base = oracle::gaussian(200, 20.0, 3);
  std::vector<double> f;
  for (double v : base) f.push_back(150.0 + v);
  const auto ref = pitch_stats(f);
  for (double c : {0.5, 2.0, 3.0}) {
    std::vector<double> g;
    for (double v : f) g.push_back(c * v);
    const auto s = pitch_stats(g);
    EXPECT_NEAR(s.sd_semitones, ref.sd_semitones, 1e-9);
    EXPECT_NEAR(s.mean_hz, c * ref.mean_hz, 1e-9 * c * ref.mean_hz);
  }
}

TEST(PitchStats, EmptyTrack) {
  EXPECT_EQ(code_of([] { pitch_stats(std::vector<double>{}); }), Errc::kNoVoicedFrames);
}

TEST(PitchTrack, NearestFrameLookup) {
  PitchTrack t;
  t.times = {0.01, 0.02, 0.03};
  t.f0 = {0.0, 150.0, 160.0};
  t.params_used.time_step = 0.01;
  EXPECT_FALSE(t.at(0.011).has_value());
  EXPECT_DOUBLE_EQ(*t.at(0.019), 150.0);
  EXPECT_DOUBLE_EQ(*t.at(0.034), 160.0);
  EXPECT_FALSE(t.at(0.5).has_value());
  EXPECT_EQ(t.voiced_f0(0.015, 0.025), std::vector<double>{150.0});
}
