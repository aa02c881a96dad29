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


// Articulation features: first and second formant means and spectral
// centre of gravity / standard deviation.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "vocalmark/audio.hpp"
#include "vocalmark/dsp.hpp"
#include "vocalmark/error.hpp"
#include "vocalmark/pitch.hpp"

namespace vocalmark {

struct FormantParams {
  double ceiling = 5500.0;
  int n_formants = 5;
  double window_length = 0.025;  // effective; the Gaussian spans twice this
  double time_step = 0.010;
  double pre_emphasis_from = 50.0;
  double edge_margin = 50.0;      // roots within this distance of 0 or the ceiling are dropped
  double max_bandwidth = 500.0;   // wider roots are not formants; 0 disables

  int lpc_order() const { return 2 * n_formants; }
};

struct FormantTrack {
  std::vector<double> times;
  std::vector<double> f1, f2;  // NaN where invalid
  std::vector<bool> valid;
  FormantParams params_used;

  std::size_t size() const { return times.size(); }
  std::size_t valid_count() const { return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), true)); }
};

struct FormantMeans {
  double f1 = 0.0;
  double f2 = 0.0;
  std::size_t frames = 0;
};

struct Resonance {
  double frequency;
  double bandwidth;
};

// Resonances of an LPC error filter at sample rate `rate`. Roots outside the
// unit circle are reflected inside; only upper-half-plane roots are kept.
inline std::vector<Resonance> lpc_resonances(const dsp::LpcCoefficients& lpc, double rate) {
  const auto poly = lpc.polynomial();
  std::vector<Resonance> out;
  for (auto z : dsp::polynomial_roots(poly)) {
    if (z.imag() <= 0.0) continue;
    double mag = std::abs(z);
    if (mag > 1.0) mag = 1.0 / mag;
    if (mag <= 0.0) continue;
    const double f = std::arg(z) * rate / (2.0 * std::numbers::pi);
    const double bw = -std::log(mag) * rate / std::numbers::pi;
    out.push_back({f, bw});
  }
  std::sort(out.begin(), out.end(), [](const Resonance& a, const Resonance& b) { return a.frequency < b.frequency; });
  return out;
}

// Formants at the voiced frames of `pitch`. The signal is resampled to twice
// the ceiling and pre-emphasised once; each frame is Gaussian-windowed and
// fitted by Burg LPC. Frames with fewer than two surviving roots are invalid.
// Roots wider than max_bandwidth model spectral tilt rather than resonances.
inline FormantTrack formant_track(std::span<const double> x, double rate, const PitchTrack& pitch,
                                  const FormantParams& p = {}) {
  if (p.n_formants < 1) fail(Errc::kInvalidArgument, "n_formants must be positive");
  if (p.ceiling > rate / 2.0) fail(Errc::kInvalidArgument, "formant ceiling above the Nyquist frequency");
  if (pitch.voiced_count() == 0) fail(Errc::kNoVoicedFrames, "formant analysis needs voiced frames");
  const int in_rate = static_cast<int>(std::lround(rate));
  const int out_rate = static_cast<int>(std::lround(2.0 * p.ceiling));
  const auto y = dsp::pre_emphasize(resample(x, in_rate, out_rate), out_rate, p.pre_emphasis_from);
  const double fs = out_rate;
  const auto n = static_cast<std::size_t>(std::llround(2.0 * p.window_length * fs));
  const auto w = dsp::make_window(dsp::WindowKind::kGaussian, n);

  FormantTrack t;
  t.params_used = p;
  std::vector<double> frame(n);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < pitch.size(); ++i) {
    if (!pitch.voiced(i)) continue;
    t.times.push_back(pitch.times[i]);
    t.f1.push_back(nan);
    t.f2.push_back(nan);
    t.valid.push_back(false);
    const long start = std::lround(pitch.times[i] * fs - 0.5 * static_cast<double>(n));
    if (start < 0 || static_cast<std::size_t>(start) + n > y.size()) continue;
    for (std::size_t k = 0; k < n; ++k) frame[k] = y[static_cast<std::size_t>(start) + k] * w[k];
    std::vector<Resonance> kept;
    try {
      for (const auto& r : lpc_resonances(dsp::lpc_burg(frame, p.lpc_order()), fs))
        if (r.frequency > p.edge_margin && r.frequency < p.ceiling - p.edge_margin &&
            (p.max_bandwidth <= 0.0 || r.bandwidth < p.max_bandwidth))
          kept.push_back(r);
    } catch (const Error&) {
      continue;
    }
    if (kept.size() < 2) continue;
    t.f1.back() = kept[0].frequency;
    t.f2.back() = kept[1].frequency;
    t.valid.back() = true;
  }
  return t;
}

inline FormantTrack formant_track(const AudioBuffer& buf, const PitchTrack& pitch, const FormantParams& p = {}) {
  return formant_track(buf.samples(), buf.sample_rate, pitch, p);
}

inline FormantMeans formant_means(const FormantTrack& t, double t0 = -std::numeric_limits<double>::infinity(),
                                  double t1 = std::numeric_limits<double>::infinity()) {
  FormantMeans m;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!t.valid[i] || t.times[i] < t0 || t.times[i] > t1) continue;
    m.f1 += t.f1[i];
    m.f2 += t.f2[i];
    ++m.frames;
  }
  if (m.frames == 0) fail(Errc::kNoVoicedFrames, "no valid formant frames");
  m.f1 /= static_cast<double>(m.frames);
  m.f2 /= static_cast<double>(m.frames);
  return m;
}

// ------------------------------------------------------- spectral moments

struct SpectralMoments {
  double gravity = 0.0;    // Hz
  double deviation = 0.0;  // Hz
};

// Power-weighted first and second moments of a one-sided power spectrum.
inline SpectralMoments spectral_moments(const dsp::Spectrum& s) {
  double total = 0.0, first = 0.0;
  for (std::size_t k = 0; k < s.power.size(); ++k) {
    total += s.power[k];
    first += s.bin_freqs[k] * s.power[k];
  }
  if (!(total > 0.0)) fail(Errc::kSilentSignal, "spectrum has no power");
  const double g = first / total;
  double second = 0.0;
  for (std::size_t k = 0; k < s.power.size(); ++k) second += (s.bin_freqs[k] - g) * (s.bin_freqs[k] - g) * s.power[k];
  return {g, std::sqrt(second / total)};
}

// Hann-windowed spectrum of the whole segment.
inline dsp::Spectrum segment_spectrum(std::span<const double> x, double rate) {
  if (x.empty()) fail(Errc::kSilentSignal, "empty segment");
  const auto w = dsp::make_window(dsp::WindowKind::kHann, x.size());
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] * w[i];
  return dsp::power_spectrum(y, rate, dsp::next_pow2(x.size()));
}

inline SpectralMoments spectral_moments(std::span<const double> x, double rate) {
  return spectral_moments(segment_spectrum(x, rate));
}

inline SpectralMoments spectral_moments(const AudioBuffer& segment) {
  return spectral_moments(segment.samples(), segment.sample_rate);
}

}  // namespace vocalmark
