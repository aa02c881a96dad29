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


// Respiration and phonation features: intensity, harmonics-to-noise ratio,
// long-term spectral slope and smoothed cepstral peak prominence.

#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "vocalmark/audio.hpp"
#include "vocalmark/dsp.hpp"
#include "vocalmark/error.hpp"
#include "vocalmark/pitch.hpp"
#include "vocalmark/stats.hpp"

namespace vocalmark {

inline constexpr double kReferencePressure = 2e-5;

// A finite stand-in for the level of digital silence.
inline constexpr double kSilenceDb = -300.0;

inline double amplitude_db(double mean_square) {
  if (!(mean_square > 0.0)) return kSilenceDb;
  return 10.0 * std::log10(mean_square / (kReferencePressure * kReferencePressure));
}

// ---------------------------------------------------------------- intensity

struct IntensityParams {
  double min_pitch = 100.0;  // window = 3.2 / min_pitch (Kaiser, beta 20)
  double time_step = 0.0;    // 0 selects window / 4
  bool subtract_mean = true;

  double window_length() const { return 3.2 / min_pitch; }
  double step() const { return time_step > 0.0 ? time_step : window_length() / 4.0; }
};

struct IntensityTrack {
  std::vector<double> times;
  std::vector<double> level_db;

  double max_level() const {
    return level_db.empty() ? kSilenceDb : *std::max_element(level_db.begin(), level_db.end());
  }
};

inline IntensityTrack intensity_track(std::span<const double> x, double rate, const IntensityParams& p = {}) {
  IntensityTrack t;
  const auto n = static_cast<std::size_t>(std::llround(p.window_length() * rate));
  const auto hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(p.step() * rate)));
  if (n == 0 || x.size() < n) return t;
  const auto w = dsp::make_window(dsp::WindowKind::kKaiser20, n);
  double wsum = 0.0;
  for (double v : w) wsum += v;
  for (std::size_t s = 0; s + n <= x.size(); s += hop) {
    double m = 0.0;
    if (p.subtract_mean) {
      for (std::size_t i = 0; i < n; ++i) m += x[s + i];
      m /= static_cast<double>(n);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = x[s + i] - m;
      acc += w[i] * v * v;
    }
    t.times.push_back((static_cast<double>(s) + 0.5 * static_cast<double>(n)) / rate);
    t.level_db.push_back(amplitude_db(acc / wsum));
  }
  return t;
}

// Energy mean over frames centered in [t0, t1] whose level is within
// speech_threshold_db of the reference level (the track maximum by default).
inline double intensity_energy_mean(const IntensityTrack& t, double speech_threshold_db = -25.0,
                                    double t0 = -std::numeric_limits<double>::infinity(),
                                    double t1 = std::numeric_limits<double>::infinity(),
                                    std::optional<double> reference_db = std::nullopt) {
  const double ref = reference_db.value_or(t.max_level());
  if (ref <= kSilenceDb) fail(Errc::kSilentSignal, "signal is silent");
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < t.times.size(); ++i) {
    if (t.times[i] < t0 || t.times[i] > t1 || t.level_db[i] < ref + speech_threshold_db) continue;
    acc += std::pow(10.0, t.level_db[i] / 10.0);
    ++count;
  }
  if (count == 0) fail(Errc::kSilentSignal, "no speech-level intensity frames in range");
  return 10.0 * std::log10(acc / static_cast<double>(count));
}

// Mean intensity (dB re 2e-5, full scale 1.0) over speech-level frames.
inline double intensity_mean(const AudioBuffer& buf, double speech_threshold_db = -25.0) {
  const auto t = intensity_track(buf.samples(), buf.sample_rate);
  if (t.times.empty()) fail(Errc::kSilentSignal, "signal shorter than one intensity window");
  return intensity_energy_mean(t, speech_threshold_db);
}

// --------------------------------------------------------------------- HNR

struct HnrParams {
  double periods_per_window = 4.5;  // of the pitch floor; Gaussian, doubled physically
  double max_r = 1.0 - 1e-6;
  double min_r = 1e-6;
};

struct HnrTrack {
  std::vector<double> times;
  std::vector<double> hnr_db;  // NaN on unvoiced frames or frames without a full window
};

// Per voiced pitch frame: 10 log10(r / (1 - r)) at the pitch-period lag of
// the window-compensated autocorrelation.
inline HnrTrack hnr_track(std::span<const double> x, double rate, const PitchTrack& pitch, const HnrParams& p = {}) {
  HnrTrack out;
  out.times = pitch.times;
  out.hnr_db.assign(pitch.size(), std::numeric_limits<double>::quiet_NaN());
  const double floor = pitch.params_used.floor;
  const auto n = static_cast<std::size_t>(std::llround(2.0 * p.periods_per_window / floor * rate));
  if (n < 8 || x.size() < n) return out;
  const dsp::AutocorrelationKernel kernel(dsp::WindowKind::kGaussian, n);
  for (std::size_t i = 0; i < pitch.size(); ++i) {
    if (!pitch.voiced(i)) continue;
    const double center = pitch.times[i] * rate;
    const long start = std::lround(center - 0.5 * static_cast<double>(n));
    if (start < 0 || static_cast<std::size_t>(start) + n > x.size()) continue;
    const double lag = rate / pitch.f0[i];
    const auto near = static_cast<std::size_t>(std::lround(lag));
    std::vector<double> r;
    try {
      r = kernel(x.subspan(static_cast<std::size_t>(start), n), near + 2 + 70);
    } catch (const Error&) {
      continue;
    }
    if (near + 2 >= r.size() || near < 2) continue;
    std::size_t best = near;
    for (std::size_t k = near - 1; k <= near + 1; ++k)
      if (r[k] > r[best]) best = k;
    const double value = std::clamp(dsp::refine_peak_sinc(r, best, 70).value, p.min_r, p.max_r);
    out.hnr_db[i] = 10.0 * std::log10(value / (1.0 - value));
  }
  return out;
}

inline double mean_in_range(std::span<const double> times, std::span<const double> values, double t0, double t1) {
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t0 || times[i] > t1 || std::isnan(values[i])) continue;
    acc += values[i];
    ++count;
  }
  if (count == 0) return std::numeric_limits<double>::quiet_NaN();
  return acc / static_cast<double>(count);
}

inline double hnr_mean(const AudioBuffer& buf, const PitchTrack& pitch, const HnrParams& p = {}) {
  if (pitch.voiced_count() == 0) fail(Errc::kNoVoicedFrames, "HNR needs voiced frames");
  const auto t = hnr_track(buf.samples(), buf.sample_rate, pitch, p);
  const double m = mean_in_range(t.times, t.hnr_db, -std::numeric_limits<double>::infinity(),
                                 std::numeric_limits<double>::infinity());
  if (std::isnan(m)) fail(Errc::kNoVoicedFrames, "no voiced frame admits a full HNR window");
  return m;
}

// ----------------------------------------------------------- spectral slope

struct SlopeParams {
  double frame_length = 0.04;  // Hann
  double low_hz = 50.0;
  double high_hz = 5000.0;
  double content_range_db = 50.0;  // bands this far below the loudest band are ignored
};

// Average power spectrum of the frames centered on voiced pitch frames in
// [t0, t1].
struct Ltas {
  dsp::Spectrum spectrum;
  std::size_t frames = 0;
};

inline Ltas voiced_ltas(std::span<const double> x, double rate, const PitchTrack& pitch, const SlopeParams& p,
                        double t0, double t1) {
  Ltas out;
  const auto n = static_cast<std::size_t>(std::llround(p.frame_length * rate));
  const std::size_t nfft = dsp::next_pow2(2 * n);
  const auto w = dsp::make_window(dsp::WindowKind::kHann, n);
  std::vector<double> buf(n);
  for (std::size_t i = 0; i < pitch.size(); ++i) {
    if (!pitch.voiced(i) || pitch.times[i] < t0 || pitch.times[i] > t1) continue;
    const long start = std::lround(pitch.times[i] * rate - 0.5 * static_cast<double>(n));
    if (start < 0 || static_cast<std::size_t>(start) + n > x.size()) continue;
    for (std::size_t k = 0; k < n; ++k) buf[k] = x[static_cast<std::size_t>(start) + k] * w[k];
    auto s = dsp::power_spectrum(buf, rate, nfft);
    if (out.frames == 0) {
      out.spectrum = std::move(s);
    } else {
      for (std::size_t k = 0; k < s.power.size(); ++k) out.spectrum.power[k] += s.power[k];
    }
    ++out.frames;
  }
  if (out.frames > 0)
    for (double& v : out.spectrum.power) v /= static_cast<double>(out.frames);
  return out;
}

// Least-squares slope (dB per octave) of band levels against log2 frequency.
// Bands are octaves anchored at the median voiced f0 (or low_hz, whichever is
// higher) up to high_hz; each band's level is its mean power density. A band
// enters the fit only if it holds a spectral component: a bin that is the
// maximum within +-anchor/2 and lies within content_range_db of the strongest
// such bin. Window leakage around a lone partial therefore never counts as a
// second band.
inline double ltas_slope(const dsp::Spectrum& s, double anchor_hz, const SlopeParams& p) {
  const std::size_t nb = s.bin_freqs.size();
  if (nb < 3) fail(Errc::kInsufficientBandwidth, "spectrum too short");
  const auto reach = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(0.5 * anchor_hz / s.resolution)));
  std::vector<std::size_t> components;
  for (std::size_t k = 0; k < nb; ++k) {
    if (s.bin_freqs[k] < anchor_hz || s.bin_freqs[k] >= p.high_hz || !(s.power[k] > 0.0)) continue;
    const std::size_t a = k > reach ? k - reach : 0;
    const std::size_t b = std::min(nb - 1, k + reach);
    bool is_max = true;
    for (std::size_t j = a; j <= b && is_max; ++j)
      if (s.power[j] > s.power[k] || (s.power[j] == s.power[k] && j < k)) is_max = false;
    if (is_max) components.push_back(k);
  }
  double strongest = 0.0;
  for (auto k : components) strongest = std::max(strongest, s.power[k]);
  const double floor_power = strongest * std::pow(10.0, -p.content_range_db / 10.0);

  std::vector<double> xs, ys;
  for (double lo = anchor_hz; lo < p.high_hz; lo *= 2.0) {
    const double hi = std::min(2.0 * lo, p.high_hz);
    if (hi / lo < std::sqrt(2.0)) break;
    bool has_component = false;
    for (auto k : components)
      if (s.bin_freqs[k] >= lo && s.bin_freqs[k] < hi && s.power[k] >= floor_power) has_component = true;
    if (!has_component) continue;
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < nb; ++k) {
      if (s.bin_freqs[k] >= lo && s.bin_freqs[k] < hi) {
        acc += s.power[k];
        ++count;
      }
    }
    xs.push_back(std::log2(std::sqrt(lo * hi)));
    ys.push_back(10.0 * std::log10(acc / static_cast<double>(count)));
  }
  if (xs.size() < 2) fail(Errc::kInsufficientBandwidth, "spectral content in fewer than two octave bands");
  return stats::fit_least_squares(xs, ys).slope;
}

inline double spectral_slope(std::span<const double> x, double rate, const PitchTrack& pitch,
                             const SlopeParams& p = {},
                             double t0 = -std::numeric_limits<double>::infinity(),
                             double t1 = std::numeric_limits<double>::infinity()) {
  const auto voiced = pitch.voiced_f0(t0, t1);
  if (voiced.empty()) fail(Errc::kNoVoicedFrames, "spectral slope needs voiced frames");
  const auto ltas = voiced_ltas(x, rate, pitch, p, t0, t1);
  if (ltas.frames == 0) fail(Errc::kNoVoicedFrames, "no voiced frame admits a full analysis window");
  const double anchor = std::max(p.low_hz, stats::median(voiced));
  return ltas_slope(ltas.spectrum, anchor, p);
}

inline double spectral_slope(const AudioBuffer& buf, const PitchTrack& pitch, const SlopeParams& p = {}) {
  return spectral_slope(buf.samples(), buf.sample_rate, pitch, p);
}

// --------------------------------------------------------------------- CPP

struct CppParams {
  double frame_length = 0.04;  // Hann
  double time_step = 0.002;
  double pre_emphasis_from = 50.0;
  double time_smoothing = 0.02;
  double quefrency_smoothing = 0.0005;
  double peak_low_hz = 60.0;
  double peak_high_hz = 330.0;
  double trend_from_quefrency = 0.001;
  double silence_threshold = 0.03;  // frame peak relative to the global peak
};

struct CppTrack {
  std::vector<double> times;
  std::vector<double> cpp_db;  // NaN on frames below the silence threshold
};

namespace detail {

// Cepstral peak prominence of one smoothed power cepstrum (linear values).
inline double cpp_of(std::span<const double> power_cepstrum, double rate, const CppParams& p) {
  const std::size_t n = power_cepstrum.size();
  std::vector<double> db(n);
  double top = 0.0;
  for (double v : power_cepstrum) top = std::max(top, v);
  for (std::size_t k = 0; k < n; ++k) db[k] = 10.0 * std::log10(power_cepstrum[k] + top * 1e-30 + 1e-300);
  const auto k_lo = static_cast<std::size_t>(std::ceil(rate / p.peak_high_hz));
  const auto k_hi = std::min(n - 2, static_cast<std::size_t>(std::floor(rate / p.peak_low_hz)));
  std::size_t best = k_lo;
  for (std::size_t k = k_lo; k <= k_hi; ++k)
    if (db[k] > db[best]) best = k;
  double peak_q = static_cast<double>(best), peak_db = db[best];
  if (best > 0 && best + 1 < n) {
    const auto pk = dsp::parabolic_peak(db[best - 1], db[best], db[best + 1]);
    peak_q += pk.offset;
    peak_db = pk.value;
  }
  const auto k_trend = static_cast<std::size_t>(std::ceil(p.trend_from_quefrency * rate));
  std::vector<double> xs, ys;
  for (std::size_t k = k_trend; k < n; ++k) {
    xs.push_back(static_cast<double>(k));
    ys.push_back(db[k]);
  }
  const auto line = stats::fit_theil_sen_incomplete(xs, ys);
  return peak_db - line(peak_q);
}

}  // namespace detail

// Smoothed CPP per frame: power cepstra averaged over time_smoothing and
// quefrency_smoothing, peak searched between 1/peak_high_hz and
// 1/peak_low_hz, measured against a robust straight-line trend.
inline CppTrack cpp_track(std::span<const double> x, double rate, const CppParams& p = {}) {
  CppTrack out;
  const auto n = static_cast<std::size_t>(std::llround(p.frame_length * rate));
  const auto hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(p.time_step * rate)));
  if (n == 0 || x.size() < n) return out;
  const auto y = dsp::pre_emphasize(x, rate, p.pre_emphasis_from);
  const std::size_t nfft = dsp::next_pow2(2 * n);
  const std::size_t half = nfft / 2;
  const auto w = dsp::make_window(dsp::WindowKind::kHann, n);
  double global_peak = 0.0;
  for (double v : x) global_peak = std::max(global_peak, std::abs(v));

  const std::size_t n_frames = (x.size() - n) / hop + 1;
  const auto t_half = static_cast<std::size_t>(std::llround(0.5 * p.time_smoothing / p.time_step));
  const auto q_half = static_cast<std::size_t>(std::llround(0.5 * p.quefrency_smoothing * rate));

  std::deque<std::vector<double>> ring;  // raw power cepstra of frames [first_in_ring, ...)
  std::size_t first_in_ring = 0;
  std::vector<double> frame(n);
  auto raw_cepstrum = [&](std::size_t f) {
    const std::size_t s = f * hop;
    for (std::size_t k = 0; k < n; ++k) frame[k] = y[s + k] * w[k];
    std::vector<double> pc(half + 1, 0.0);
    double energy = 0.0;
    for (double v : frame) energy += v * v;
    if (energy <= 0.0) return pc;
    const auto c = dsp::real_cepstrum(frame, rate, nfft);
    for (std::size_t k = 0; k <= half; ++k) pc[k] = c.values[k] * c.values[k];
    return pc;
  };

  std::vector<double> avg(half + 1), smooth(half + 1);
  for (std::size_t f = 0; f < n_frames; ++f) {
    const std::size_t lo = f > t_half ? f - t_half : 0;
    const std::size_t hi = std::min(n_frames - 1, f + t_half);
    while (first_in_ring + ring.size() <= hi) ring.push_back(raw_cepstrum(first_in_ring + ring.size()));
    while (first_in_ring < lo) {
      ring.pop_front();
      ++first_in_ring;
    }
    const std::size_t s = f * hop;
    double local_peak = 0.0;
    for (std::size_t k = 0; k < n; ++k) local_peak = std::max(local_peak, std::abs(x[s + k]));
    out.times.push_back((static_cast<double>(s) + 0.5 * static_cast<double>(n)) / rate);
    if (global_peak <= 0.0 || local_peak < p.silence_threshold * global_peak) {
      out.cpp_db.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    std::fill(avg.begin(), avg.end(), 0.0);
    for (const auto& pc : ring)
      for (std::size_t k = 0; k <= half; ++k) avg[k] += pc[k];
    for (double& v : avg) v /= static_cast<double>(ring.size());
    for (std::size_t k = 0; k <= half; ++k) {
      const std::size_t a = k > q_half ? k - q_half : 0;
      const std::size_t b = std::min(half, k + q_half);
      double acc = 0.0;
      for (std::size_t j = a; j <= b; ++j) acc += avg[j];
      smooth[k] = acc / static_cast<double>(b - a + 1);
    }
    out.cpp_db.push_back(detail::cpp_of(smooth, rate, p));
  }
  return out;
}

inline double cpp_mean(const AudioBuffer& buf, const CppParams& p = {}) {
  const auto t = cpp_track(buf.samples(), buf.sample_rate, p);
  const double m = mean_in_range(t.times, t.cpp_db, -std::numeric_limits<double>::infinity(),
                                 std::numeric_limits<double>::infinity());
  if (std::isnan(m)) fail(Errc::kSilentSignal, "no analyzable CPP frame");
  return m;
}

}  // namespace vocalmark
