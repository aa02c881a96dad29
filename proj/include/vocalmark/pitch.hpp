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


// Autocorrelation pitch tracking with window compensation, candidate
// octave costs and a Viterbi path through voiced/unvoiced candidates, plus
// the two-pass range adaptation and pitch statistics.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "vocalmark/audio.hpp"
#include "vocalmark/dsp.hpp"
#include "vocalmark/error.hpp"
#include "vocalmark/stats.hpp"

namespace vocalmark {

struct PitchParams {
  double floor = 75.0;     // Hz
  double ceiling = 600.0;  // Hz
  double time_step = 0.01;
  double periods_per_window = 3.0;
  int max_candidates = 15;
  double voicing_threshold = 0.45;
  double silence_threshold = 0.03;
  double octave_cost = 0.01;
  double octave_jump_cost = 0.35;
  double voiced_unvoiced_cost = 0.14;

  double window_length() const { return periods_per_window / floor; }
};

struct PitchTrack {
  std::vector<double> times;  // frame centers, s
  std::vector<double> f0;     // Hz; 0 marks an unvoiced frame
  PitchParams params_used;

  std::size_t size() const { return times.size(); }
  bool voiced(std::size_t i) const { return f0[i] > 0.0; }

  std::size_t voiced_count() const {
    return static_cast<std::size_t>(std::count_if(f0.begin(), f0.end(), [](double f) { return f > 0.0; }));
  }

  // Voiced f0 values of frames centered in [t0, t1].
  std::vector<double> voiced_f0(double t0 = -std::numeric_limits<double>::infinity(),
                                double t1 = std::numeric_limits<double>::infinity()) const {
    std::vector<double> out;
    for (std::size_t i = 0; i < times.size(); ++i)
      if (f0[i] > 0.0 && times[i] >= t0 && times[i] <= t1) out.push_back(f0[i]);
    return out;
  }

  // Value of the frame nearest to t, if that frame is voiced.
  std::optional<double> at(double t) const {
    if (times.empty()) return std::nullopt;
    auto it = std::lower_bound(times.begin(), times.end(), t);
    std::size_t i = static_cast<std::size_t>(it - times.begin());
    if (i == times.size() || (i > 0 && t - times[i - 1] < times[i] - t)) --i;
    if (std::abs(times[i] - t) > params_used.time_step) return std::nullopt;
    return f0[i] > 0.0 ? std::optional<double>(f0[i]) : std::nullopt;
  }
};

namespace detail {

constexpr int kInterpolationDepth = 70;

struct PitchCandidate {
  double frequency = 0.0;  // 0 = unvoiced
  double strength = 0.0;
};

}  // namespace detail

// Single analysis pass at fixed floor/ceiling.
inline PitchTrack pitch_track(std::span<const double> x, double rate, const PitchParams& p) {
  if (!(p.floor > 0.0) || !(p.ceiling > p.floor))
    fail(Errc::kInvalidArgument, "pitch range needs 0 < floor < ceiling");
  PitchTrack track;
  track.params_used = p;
  const auto n_window = static_cast<std::size_t>(std::llround(p.window_length() * rate));
  const auto hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(p.time_step * rate)));
  if (n_window < 4 || x.size() < n_window) return track;
  const std::size_t n_frames = (x.size() - n_window) / hop + 1;

  double global_mean = 0.0;
  for (double v : x) global_mean += v;
  global_mean /= static_cast<double>(x.size());
  double global_peak = 0.0;
  for (double v : x) global_peak = std::max(global_peak, std::abs(v - global_mean));

  const dsp::AutocorrelationKernel kernel(dsp::WindowKind::kHann, n_window);
  const auto period_samples = static_cast<std::size_t>(std::ceil(rate / p.floor));
  const std::size_t max_lag = std::min(n_window - 2, period_samples + 1);
  const std::size_t min_lag = std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(rate / p.ceiling)));
  const auto window = kernel.window();

  std::vector<std::vector<detail::PitchCandidate>> cands(n_frames);
  std::vector<double> intensity(n_frames, 0.0);
  for (std::size_t f = 0; f < n_frames; ++f) {
    const auto frame = x.subspan(f * hop, n_window);
    track.times.push_back((static_cast<double>(f * hop) + 0.5 * static_cast<double>(n_window)) / rate);
    auto& c = cands[f];
    c.push_back({0.0, 0.0});
    double m = 0.0;
    for (double v : frame) m += v;
    m /= static_cast<double>(n_window);
    // Local peak over the central period of the windowed frame.
    const std::size_t mid = n_window / 2;
    const std::size_t lo = mid > period_samples ? mid - period_samples : 0;
    const std::size_t hi = std::min(n_window, mid + period_samples);
    double local_peak = 0.0;
    for (std::size_t j = lo; j < hi; ++j) local_peak = std::max(local_peak, std::abs((frame[j] - m) * window[j]));
    intensity[f] = global_peak > 0.0 ? std::min(1.0, local_peak / global_peak) : 0.0;
    if (local_peak <= 0.0) continue;

    const auto r = kernel(frame, max_lag + detail::kInterpolationDepth);
    std::vector<detail::PitchCandidate> voiced;
    for (std::size_t i = std::max<std::size_t>(min_lag, 1); i <= max_lag && i + 1 < r.size(); ++i) {
      if (!(r[i] > 0.5 * p.voicing_threshold && r[i] > r[i - 1] && r[i] >= r[i + 1])) continue;
      const auto pk = dsp::refine_peak_sinc(r, i, detail::kInterpolationDepth);
      const double freq = rate / pk.position;
      if (freq < p.floor || freq > p.ceiling) continue;
      double strength = pk.value;
      if (strength > 1.0) strength = 1.0 / strength;
      voiced.push_back({freq, strength});
    }
    // Keep the strongest candidates, favouring higher frequencies slightly.
    const auto score = [&](const detail::PitchCandidate& k) {
      return k.strength - p.octave_cost * std::log2(p.floor / k.frequency);
    };
    std::sort(voiced.begin(), voiced.end(),
              [&](const auto& a, const auto& b) { return score(a) > score(b); });
    const auto keep = static_cast<std::size_t>(std::max(0, p.max_candidates - 1));
    if (voiced.size() > keep) voiced.resize(keep);
    c.insert(c.end(), voiced.begin(), voiced.end());
  }

  // Viterbi over candidates.
  const double step_correction = 0.01 / p.time_step;
  const double jump_cost = p.octave_jump_cost * step_correction;
  const double vuv_cost = p.voiced_unvoiced_cost * step_correction;
  std::vector<std::vector<double>> delta(n_frames), psi(n_frames);
  std::vector<std::vector<std::size_t>> back(n_frames);
  for (std::size_t f = 0; f < n_frames; ++f) {
    double unvoiced = p.silence_threshold <= 0.0
                          ? 0.0
                          : 2.0 - intensity[f] / (p.silence_threshold / (1.0 + p.voicing_threshold));
    unvoiced = p.voicing_threshold + std::max(0.0, unvoiced);
    for (const auto& k : cands[f])
      delta[f].push_back(k.frequency == 0.0
                             ? unvoiced
                             : k.strength - p.octave_cost * std::log2(p.ceiling / k.frequency));
  }
  psi[0] = delta[0];
  back[0].assign(cands[0].size(), 0);
  for (std::size_t f = 1; f < n_frames; ++f) {
    psi[f].assign(cands[f].size(), -std::numeric_limits<double>::infinity());
    back[f].assign(cands[f].size(), 0);
    for (std::size_t j = 0; j < cands[f].size(); ++j) {
      const double fj = cands[f][j].frequency;
      for (std::size_t i = 0; i < cands[f - 1].size(); ++i) {
        const double fi = cands[f - 1][i].frequency;
        double cost = 0.0;
        if ((fi == 0.0) != (fj == 0.0)) cost = vuv_cost;
        else if (fi > 0.0) cost = jump_cost * std::abs(std::log2(fi / fj));
        const double v = psi[f - 1][i] - cost + delta[f][j];
        if (v > psi[f][j]) {
          psi[f][j] = v;
          back[f][j] = i;
        }
      }
    }
  }
  track.f0.assign(n_frames, 0.0);
  std::size_t best = static_cast<std::size_t>(
      std::max_element(psi.back().begin(), psi.back().end()) - psi.back().begin());
  for (std::size_t f = n_frames; f-- > 0;) {
    track.f0[f] = cands[f][best].frequency;
    if (f > 0) best = back[f][best];
  }
  return track;
}

struct TwoPassSettings {
  double pass1_floor = 50.0;
  double pass1_ceiling = 600.0;
  double q1_factor = 0.75;
  double q3_factor = 1.5;
  PitchParams base;  // costs, thresholds and time step for both passes
};

// Exploratory pass over a wide range, then a second pass with
// floor = q1_factor * Q1 and ceiling = q3_factor * Q3 of the voiced pass-1 f0.
inline PitchTrack pitch_track_two_pass(std::span<const double> x, double rate, const TwoPassSettings& s = {}) {
  PitchParams p1 = s.base;
  p1.floor = s.pass1_floor;
  p1.ceiling = s.pass1_ceiling;
  const PitchTrack first = pitch_track(x, rate, p1);
  auto voiced = first.voiced_f0();
  if (voiced.empty()) fail(Errc::kNoVoicedFrames, "no voiced frames in the exploratory pitch pass");
  std::sort(voiced.begin(), voiced.end());
  PitchParams p2 = s.base;
  p2.floor = s.q1_factor * stats::quantile_sorted(voiced, 0.25);
  p2.ceiling = std::min(s.q3_factor * stats::quantile_sorted(voiced, 0.75), 0.5 * rate);
  PitchTrack second = pitch_track(x, rate, p2);
  if (second.voiced_count() == 0) fail(Errc::kNoVoicedFrames, "no voiced frames in the adapted pitch pass");
  return second;
}

inline PitchTrack pitch_track_two_pass(const AudioBuffer& buf, const TwoPassSettings& s = {}) {
  return pitch_track_two_pass(buf.samples(), buf.sample_rate, s);
}

struct PitchStats {
  double mean_hz = 0.0;
  double sd_semitones = 0.0;
};

// Mean of voiced f0 in Hz; standard deviation of 12 log2(f0 / 100 Hz).
inline PitchStats pitch_stats(std::span<const double> voiced_f0) {
  if (voiced_f0.empty()) fail(Errc::kNoVoicedFrames, "pitch statistics need a voiced frame");
  std::vector<double> st(voiced_f0.size());
  for (std::size_t i = 0; i < st.size(); ++i) st[i] = 12.0 * std::log2(voiced_f0[i] / 100.0);
  return {stats::mean(voiced_f0), stats::pstddev(st)};
}

inline PitchStats pitch_stats(const PitchTrack& track) { return pitch_stats(track.voiced_f0()); }

}  // namespace vocalmark
