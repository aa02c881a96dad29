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
#include <numbers>

#include "../support/oracles.hpp"
#include "vocalmark/articulation.hpp"
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

AudioBuffer voice(double f1, double b1, double f2, double b2, double f0 = 120.0, double seconds = 1.5) {
  return synth::synth_formant_voice(f0, std::vector<synth::Resonator>{{f1, b1}, {f2, b2}}, seconds, 16000);
}

// Moments by direct summation over a hand-windowed DFT.
SpectralMoments direct_moments(const std::vector<double>& x, double rate) {
  const std::size_t n = x.size();
  std::size_t nfft = 1;
  while (nfft < n) nfft *= 2;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = x[i] * (0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i + 1) / static_cast<double>(n + 1)));
  const auto p = oracle::dft_power(y, nfft);
  double w = 0.0, m1 = 0.0;
  for (std::size_t k = 0; k <= nfft / 2; ++k) {
    const double weight = (k == 0 || k == nfft / 2) ? 1.0 : 2.0;
    const double f = static_cast<double>(k) * rate / static_cast<double>(nfft);
    w += weight * p[k];
    m1 += weight * p[k] * f;
  }
  const double g = m1 / w;
  double m2 = 0.0;
  for (std::size_t k = 0; k <= nfft / 2; ++k) {
    const double weight = (k == 0 || k == nfft / 2) ? 1.0 : 2.0;
    const double f = static_cast<double>(k) * rate / static_cast<double>(nfft);
    m2 += weight * p[k] * (f - g) * (f - g);
  }
  return {g, std::sqrt(m2 / w)};
}

}  // namespace

TEST(Formants, OpenVowelTargets) {
  const auto x = voice(700, 80, 1200, 90);
  const auto m = formant_means(formant_track(x, pitch_track_two_pass(x)));
  EXPECT_NEAR(m.f1, 700.0, 50.0);
  EXPECT_NEAR(m.f2, 1200.0, 75.0);
  EXPECT_GT(m.frames, 100u);
}

TEST(Formants, MidVowelTargets) {
  const auto x = voice(500, 70, 1000, 90);
  const auto m = formant_means(formant_track(x, pitch_track_two_pass(x)));
  EXPECT_NEAR(m.f1, 500.0, 50.0);
  EXPECT_NEAR(m.f2, 1000.0, 75.0);
}

TEST(Formants, OrderedOnEveryValidFrame) {
  const auto x = voice(600, 80, 1700, 100);
  const auto t = formant_track(x, pitch_track_two_pass(x));
  ASSERT_GT(t.valid_count(), 0u);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t.valid[i]) {
      ASSERT_GT(t.f1[i], 0.0);
      ASSERT_LT(t.f1[i], t.f2[i]);
      ASSERT_LT(t.f2[i], t.params_used.ceiling);
    }
}

TEST(Formants, GainInvariant) {
  const auto x = voice(700, 80, 1200, 90);
  auto y = x;
  for (auto& v : y.channels[0]) v *= 0.1;
  const auto p = pitch_track_two_pass(x);
  const auto a = formant_means(formant_track(x, p));
  const auto b = formant_means(formant_track(y, p));
  EXPECT_NEAR(a.f1, b.f1, 1.0);
  EXPECT_NEAR(a.f2, b.f2, 1.0);
}

TEST(Formants, UnvoicedNoise) {
  const auto noise = AudioBuffer::mono(oracle::gaussian(24000, 0.1, 5), 16000);
  EXPECT_EQ(code_of([&] { formant_track(noise, pitch_track_two_pass(noise)); }), Errc::kNoVoicedFrames);
  EXPECT_EQ(code_of([&] { formant_track(noise, PitchTrack{}); }), Errc::kNoVoicedFrames);
}

TEST(Formants, CeilingAboveNyquist) {
  const auto x = voice(700, 80, 1200, 90, 120, 0.5);
  FormantParams p;
  p.ceiling = 9000;
  EXPECT_EQ(code_of([&] { formant_track(x, pitch_track_two_pass(x), p); }), Errc::kInvalidArgument);
}

TEST(Formants, MeansWindowAndEmpty) {
  FormantTrack t;
  t.times = {0.1, 0.2, 0.3};
  t.f1 = {500, 600, std::nan("")};
  t.f2 = {1500, 1600, std::nan("")};
  t.valid = {true, true, false};
  const auto m = formant_means(t, 0.15, 0.35);
  EXPECT_DOUBLE_EQ(m.f1, 600.0);
  EXPECT_EQ(m.frames, 1u);
  EXPECT_EQ(code_of([&] { formant_means(t, 0.25, 0.35); }), Errc::kNoVoicedFrames);
}

TEST(LpcResonances, SinglePolePair) {
  // A(z) with a root pair at radius r and angle theta.
  const double fs = 10000, f = 1000, bw = 100;
  const double r = std::exp(-std::numbers::pi * bw / fs), th = 2.0 * std::numbers::pi * f / fs;
  dsp::LpcCoefficients lpc;
  lpc.coefficients = {2.0 * r * std::cos(th), -r * r};
  const auto res = lpc_resonances(lpc, fs);
  ASSERT_EQ(res.size(), 1u);
  EXPECT_NEAR(res[0].frequency, f, 1e-6);
  EXPECT_NEAR(res[0].bandwidth, bw, 1e-6);
}

TEST(Moments, PureSine) {
  const auto x = oracle::sine(1000, 0.5, 0.5, 16000);
  const auto m = spectral_moments(x, 16000);
  const double bin = 16000.0 / 8192.0;
  EXPECT_NEAR(m.gravity, 1000.0, bin);
  EXPECT_LE(m.deviation, 2.0 * bin);
}

TEST(Moments, TwoEqualSines) {
  auto x = oracle::sine(500, 0.3, 0.5, 16000);
  const auto y = oracle::sine(1500, 0.3, 0.5, 16000, 0.7);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
  const auto m = spectral_moments(x, 16000);
  const double bin = 16000.0 / 8192.0;
  EXPECT_NEAR(m.gravity, 1000.0, bin);
  EXPECT_NEAR(m.deviation, 500.0, 2.0 * bin);
}

TEST(Moments, WhiteNoiseUniformMoments) {
  double g = 0.0, d = 0.0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    const auto m = spectral_moments(oracle::gaussian(16000, 0.1, static_cast<std::uint64_t>(s)), 16000);
    g += m.gravity;
    d += m.deviation;
  }
  EXPECT_NEAR(g / seeds, 4000.0, 100.0);
  EXPECT_NEAR(d / seeds, 8000.0 / std::sqrt(12.0), 100.0);
}

TEST(Moments, MatchDirectSum) {
  for (std::uint64_t s = 0; s < 3; ++s) {
    const auto x = oracle::gaussian(1500, 0.2, s);
    const auto a = spectral_moments(x, 16000);
    const auto b = direct_moments(x, 16000);
    EXPECT_NEAR(a.gravity, b.gravity, 1e-9 * b.gravity);
    EXPECT_NEAR(a.deviation, b.deviation, 1e-9 * b.deviation);
  }
}

TEST(Moments, FrequencyShift) {
  const auto a = spectral_moments(oracle::sine(1000, 0.5, 0.3, 16000), 16000);
  const auto b = spectral_moments(oracle::sine(2500, 0.5, 0.3, 16000), 16000);
  EXPECT_NEAR(b.gravity - a.gravity, 1500.0, 16000.0 / 8192.0);
}

TEST(Moments, SilentSegment) {
  EXPECT_EQ(code_of([] { spectral_moments(std::vector<double>(1000, 0.0), 16000); }), Errc::kSilentSignal);
  EXPECT_EQ(code_of([] { spectral_moments(std::vector<double>{}, 16000); }), Errc::kSilentSignal);
}

TEST(Moments, GainInvariant) {
  auto x = oracle::gaussian(4000, 0.2, 8);
  const auto a = spectral_moments(x, 16000);
  for (auto& v : x) v *= 3.0;
  const auto b = spectral_moments(x, 16000);
  EXPECT_NEAR(a.gravity, b.gravity, 1e-9 * a.gravity);
}
