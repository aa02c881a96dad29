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


// Test-signal generators with analytically known ground truth.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "vocalmark/audio.hpp"
#include "vocalmark/error.hpp"

namespace vocalmark::synth {

struct Resonator {
  double frequency = 0.0;  // Hz
  double bandwidth = 0.0;  // Hz
};

enum class Kind { kPulseTrain, kFormantVoice, kTone, kNoise, kSilence };

inline std::string_view to_string(Kind k) {
  switch (k) {
    case Kind::kPulseTrain: return "pulse_train";
    case Kind::kFormantVoice: return "formant_voice";
    case Kind::kTone: return "tone";
    case Kind::kNoise: return "noise";
    case Kind::kSilence: return "silence";
  }
  return "unknown";
}

inline Kind kind_from_string(std::string_view s) {
  for (Kind k : {Kind::kPulseTrain, Kind::kFormantVoice, Kind::kTone, Kind::kNoise, Kind::kSilence})
    if (to_string(k) == s) return k;
  fail(Errc::kInvalidArgument, "unknown synth kind '" + std::string(s) + "'");
}

// amplitude is the peak value for voiced kinds and tones, the RMS for noise.
struct SynthSpec {
  Kind kind = Kind::kSilence;
  double f0 = 0.0;
  std::vector<Resonator> formants;
  double duration = 0.0;
  double amplitude = 0.5;
  std::uint64_t seed = 0;
};

// Pulse k sits at (k + 1/2) / f0 seconds, k = 0 .. round(f0 duration) - 1.
inline std::vector<double> pulse_times(double f0, double duration) {
  const auto n = static_cast<std::size_t>(std::llround(f0 * duration));
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) t[k] = (static_cast<double>(k) + 0.5) / f0;
  return t;
}

namespace detail {

constexpr double kPulseCutoff = 0.9;  // fraction of Nyquist
constexpr int kPulseHalfWidth = 48;   // samples

inline void check_voiced(double f0, double duration, int rate) {
  if (rate <= 0) fail(Errc::kInvalidArgument, "sample rate must be positive");
  if (!(duration > 0.0)) fail(Errc::kInvalidArgument, "duration must be positive");
  if (!(f0 >= 1.0) || !(f0 < rate / 4.0))
    fail(Errc::kBadF0, "f0 " + std::to_string(f0) + " Hz outside [1, rate/4)");
}

inline void normalize_peak(std::vector<double>& x, double amplitude) {
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak > 0.0)
    for (double& v : x) v *= amplitude / peak;
}

// Band-limited impulses: Kaiser-windowed sinc at fractional sample positions.
inline std::vector<double> raw_pulses(double f0, double duration, int rate) {
  const auto n = static_cast<std::size_t>(std::llround(duration * rate));
  std::vector<double> x(n, 0.0);
  const double norm = vocalmark::detail::bessel_i0(8.0);
  for (double t : pulse_times(f0, duration)) {
    const double pos = t * rate;
    const auto lo = static_cast<long>(std::ceil(pos - kPulseHalfWidth));
    const auto hi = static_cast<long>(std::floor(pos + kPulseHalfWidth));
    for (long i = std::max(0L, lo); i <= std::min(static_cast<long>(n) - 1, hi); ++i) {
      const double d = static_cast<double>(i) - pos;
      const double u = d / kPulseHalfWidth;
      const double w = vocalmark::detail::bessel_i0(8.0 * std::sqrt(std::max(0.0, 1.0 - u * u))) / norm;
      x[static_cast<std::size_t>(i)] += kPulseCutoff * vocalmark::detail::sinc(kPulseCutoff * d) * w;
    }
  }
  return x;
}

// Unity-DC-gain two-pole resonator, applied in place.
inline void resonate(std::vector<double>& x, const Resonator& r, int rate) {
  const double t = 1.0 / rate;
  const double c = -std::exp(-2.0 * std::numbers::pi * r.bandwidth * t);
  const double b = 2.0 * std::exp(-std::numbers::pi * r.bandwidth * t) *
                   std::cos(2.0 * std::numbers::pi * r.frequency * t);
  const double a = 1.0 - b - c;
  double y1 = 0.0, y2 = 0.0;
  for (double& v : x) {
    const double y = a * v + b * y1 + c * y2;
    y2 = y1;
    y1 = y;
    v = y;
  }
}

}  // namespace detail

inline AudioBuffer synth_pulse_train(double f0, double duration, int rate = 16000, double amplitude = 0.5) {
  detail::check_voiced(f0, duration, rate);
  auto x = detail::raw_pulses(f0, duration, rate);
  detail::normalize_peak(x, amplitude);
  return AudioBuffer::mono(std::move(x), rate);
}

inline AudioBuffer synth_formant_voice(double f0, std::span<const Resonator> formants, double duration,
                                       int rate = 16000, double amplitude = 0.5) {
  detail::check_voiced(f0, duration, rate);
  for (const auto& r : formants)
    if (!(r.frequency > 0.0) || !(r.frequency < rate / 2.0) || !(r.bandwidth > 0.0))
      fail(Errc::kBadResonator, "resonator at " + std::to_string(r.frequency) + " Hz, bandwidth " +
                                    std::to_string(r.bandwidth) + " Hz");
  auto x = detail::raw_pulses(f0, duration, rate);
  for (const auto& r : formants) detail::resonate(x, r, rate);
  detail::normalize_peak(x, amplitude);
  return AudioBuffer::mono(std::move(x), rate);
}

inline std::vector<double> white_noise(std::size_t n, double rms, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = dist(gen);
  double ss = 0.0;
  for (double v : x) ss += v * v;
  if (n > 0 && ss > 0.0) {
    const double k = rms / std::sqrt(ss / static_cast<double>(n));
    for (double& v : x) v *= k;
  }
  return x;
}

// Adds white Gaussian noise scaled so that the power ratio is exactly snr_db
// for the drawn realization. snr_db = +inf returns the input unchanged.
inline AudioBuffer add_noise(const AudioBuffer& buf, double snr_db, std::uint64_t seed) {
  buf.validate();
  if (std::isinf(snr_db) && snr_db > 0.0) return buf;
  double ps = 0.0;
  std::size_t count = 0;
  for (const auto& ch : buf.channels)
    for (double v : ch) ps += v * v, ++count;
  if (count == 0 || !(ps > 0.0)) fail(Errc::kSilentSignal, "cannot set an SNR on a silent signal");
  ps /= static_cast<double>(count);
  const double noise_rms = std::sqrt(ps / std::pow(10.0, snr_db / 10.0));
  AudioBuffer out = buf;
  std::uint64_t s = seed;
  for (auto& ch : out.channels) {
    const auto n = white_noise(ch.size(), noise_rms, s++);
    for (std::size_t i = 0; i < ch.size(); ++i) ch[i] += n[i];
  }
  return out;
}

struct Segment {
  double start = 0.0;  // seconds, sample-exact
  double end = 0.0;
  SynthSpec spec;
};

struct Pattern {
  AudioBuffer audio;
  std::vector<Segment> segments;
};

inline std::vector<double> render(const SynthSpec& spec, int rate) {
  const auto n = static_cast<std::size_t>(std::llround(spec.duration * rate));
  switch (spec.kind) {
    case Kind::kSilence:
      return std::vector<double>(n, 0.0);
    case Kind::kNoise:
      return white_noise(n, spec.amplitude, spec.seed);
    case Kind::kTone: {
      if (!(spec.f0 > 0.0) || !(spec.f0 < rate / 2.0)) fail(Errc::kBadF0, "tone frequency out of range");
      std::vector<double> x(n);
      const auto ramp = static_cast<std::size_t>(0.005 * rate);
      for (std::size_t i = 0; i < n; ++i) {
        double g = 1.0;
        const std::size_t edge = std::min(i, n - 1 - i);
        if (edge < ramp) g = 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(edge) / ramp);
        x[i] = spec.amplitude * g * std::sin(2.0 * std::numbers::pi * spec.f0 * static_cast<double>(i) / rate);
      }
      return x;
    }
    case Kind::kPulseTrain:
      return synth_pulse_train(spec.f0, spec.duration, rate, spec.amplitude).channels.front();
    case Kind::kFormantVoice:
      return synth_formant_voice(spec.f0, spec.formants, spec.duration, rate, spec.amplitude).channels.front();
  }
  return {};
}

// Concatenation with boundaries at whole samples; reported times are the
// exact sample boundaries divided by the rate.
inline Pattern synth_pattern(std::span<const SynthSpec> specs, int rate = 16000) {
  if (specs.empty()) fail(Errc::kInvalidArgument, "pattern needs at least one segment");
  Pattern p;
  std::vector<double> all;
  for (const auto& s : specs) {
    if (!(s.duration > 0.0)) fail(Errc::kInvalidArgument, "segment duration must be positive");
    const auto x = render(s, rate);
    const double start = static_cast<double>(all.size()) / rate;
    all.insert(all.end(), x.begin(), x.end());
    p.segments.push_back({start, static_cast<double>(all.size()) / rate, s});
  }
  p.audio = AudioBuffer::mono(std::move(all), rate);
  return p;
}

// ------------------------------------------------------------ JSON specs

// {"rate": 16000, "segments": [{"kind": "pulse_train", "f0": 200,
//  "duration": 2, "formants": [[700, 80]], "amplitude": 0.5, "seed": 1}],
//  "snr_db": 20, "noise_seed": 7}
struct PatternRequest {
  int rate = 16000;
  std::vector<SynthSpec> segments;
  std::optional<double> snr_db;
  std::uint64_t noise_seed = 0;
};

inline SynthSpec spec_from_json(const nlohmann::json& j) {
  SynthSpec s;
  try {
    s.kind = kind_from_string(j.at("kind").get<std::string>());
    s.duration = j.at("duration").get<double>();
    s.f0 = j.value("f0", 0.0);
    s.amplitude = j.value("amplitude", 0.5);
    s.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("formants"))
      for (const auto& r : j.at("formants")) s.formants.push_back({r.at(0).get<double>(), r.at(1).get<double>()});
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::kBadConfig, std::string("synth segment: ") + e.what());
  }
  return s;
}

inline PatternRequest pattern_request_from_json(const nlohmann::json& j) {
  PatternRequest r;
  try {
    r.rate = j.value("rate", 16000);
    for (const auto& s : j.at("segments")) r.segments.push_back(spec_from_json(s));
    if (j.contains("snr_db")) r.snr_db = j.at("snr_db").get<double>();
    r.noise_seed = j.value("noise_seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::kBadConfig, std::string("synth request: ") + e.what());
  }
  return r;
}

inline Pattern render_request(const PatternRequest& r) {
  auto p = synth_pattern(r.segments, r.rate);
  if (r.snr_db) p.audio = add_noise(p.audio, *r.snr_db, r.noise_seed);
  return p;
}

// Ground truth sidecar: segment boundaries, pulse counts and the internal
// silent gaps a timing analysis should find.
inline nlohmann::json ground_truth(const PatternRequest& r, const Pattern& p) {
  nlohmann::json segs = nlohmann::json::array();
  nlohmann::json gaps = nlohmann::json::array();
  std::size_t sounding = 0;
  for (std::size_t i = 0; i < p.segments.size(); ++i) {
    const auto& s = p.segments[i];
    nlohmann::json seg{{"kind", std::string(to_string(s.spec.kind))}, {"start", s.start}, {"end", s.end},
                       {"amplitude", s.spec.amplitude}};
    if (s.spec.kind == Kind::kPulseTrain || s.spec.kind == Kind::kFormantVoice || s.spec.kind == Kind::kTone)
      seg["f0"] = s.spec.f0;
    if (s.spec.kind == Kind::kPulseTrain || s.spec.kind == Kind::kFormantVoice)
      seg["pulses"] = pulse_times(s.spec.f0, s.end - s.start).size();
    if (s.spec.kind == Kind::kNoise) seg["seed"] = s.spec.seed;
    if (!s.spec.formants.empty()) {
      auto f = nlohmann::json::array();
      for (const auto& res : s.spec.formants) f.push_back({res.frequency, res.bandwidth});
      seg["formants"] = f;
    }
    if (s.spec.kind != Kind::kSilence) ++sounding;
    if (s.spec.kind == Kind::kSilence && i > 0 && i + 1 < p.segments.size()) gaps.push_back(s.end - s.start);
    segs.push_back(std::move(seg));
  }
  nlohmann::json j{{"rate", r.rate},
                   {"samples", p.audio.frames()},
                   {"duration", p.audio.duration()},
                   {"segments", segs},
                   {"sounding_segments", sounding},
                   {"internal_gaps", gaps}};
  if (r.snr_db) {
    j["snr_db"] = *r.snr_db;
    j["noise_seed"] = r.noise_seed;
  }
  return j;
}

}  // namespace vocalmark::synth
