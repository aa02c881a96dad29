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


// PCM audio container, RIFF/WAVE codec and conversion to the canonical
// analysis format (16 kHz, mono, 16-bit).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vocalmark/error.hpp"

namespace vocalmark {

struct AudioBuffer {
  // channels[c][i]: amplitude of sample i on channel c, nominally in [-1, 1].
  std::vector<std::vector<double>> channels;
  int sample_rate = 16000;
  int source_bit_depth = 16;

  static AudioBuffer mono(std::vector<double> samples, int rate, int bit_depth = 16) {
    AudioBuffer buf;
    buf.channels.push_back(std::move(samples));
    buf.sample_rate = rate;
    buf.source_bit_depth = bit_depth;
    return buf;
  }

  int channel_count() const { return static_cast<int>(channels.size()); }
  std::size_t frames() const { return channels.empty() ? 0 : channels.front().size(); }
  double duration() const {
    return static_cast<double>(frames()) / static_cast<double>(sample_rate);
  }

  // Samples of a single-channel buffer.
  std::span<const double> samples() const {
    if (channels.size() != 1) fail(Errc::kInvalidArgument, "expected a mono buffer");
    return channels.front();
  }

  void validate() const {
    if (sample_rate <= 0) fail(Errc::kInvalidArgument, "sample rate must be positive");
    if (channels.empty()) fail(Errc::kInvalidArgument, "buffer has no channels");
    for (const auto& ch : channels) {
      if (ch.size() != channels.front().size())
        fail(Errc::kInvalidArgument, "channels differ in length");
      for (double x : ch)
        if (!std::isfinite(x)) fail(Errc::kInvalidArgument, "non-finite sample");
    }
  }
};

struct CanonicalPolicy {
  int target_rate = 16000;
  int target_channels = 1;
  int target_bit_depth = 16;
};

struct ResamplerOptions {
  int zero_crossings = 64;   // half-width of the sinc kernel, in cutoff periods
  double rolloff = 0.95;     // passband edge as a fraction of the lower Nyquist
  double kaiser_beta = 7.86; // ~80 dB design stopband
};

namespace detail {

inline std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

// Modified Bessel function of the first kind, order zero (power series).
inline double bessel_i0(double x) {
  double sum = 1.0, term = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

inline double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

inline std::int16_t quantize16(double x) {
  const double v = std::round(std::clamp(x, -1.0, 1.0) * 32768.0);
  return static_cast<std::int16_t>(std::clamp(v, -32768.0, 32767.0));
}

inline std::int32_t quantize24(double x) {
  const double v = std::round(std::clamp(x, -1.0, 1.0) * 8388608.0);
  return static_cast<std::int32_t>(std::clamp(v, -8388608.0, 8388607.0));
}

}  // namespace detail

// Decodes an in-memory RIFF/WAVE image. Integer PCM only (8/16/24/32 bit);
// samples are scaled by 2^-(bits-1) so full scale maps to [-1, 1).
inline AudioBuffer decode_wav(std::string_view bytes) {
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t n = bytes.size();
  if (n < 12 || std::memcmp(p, "RIFF", 4) != 0 || std::memcmp(p + 8, "WAVE", 4) != 0)
    fail(Errc::kMalformedRiff, "missing RIFF/WAVE magic");

  bool have_fmt = false;
  int channels = 0, rate = 0, bits = 0, block_align = 0;
  std::size_t pos = 12;
  while (pos + 8 <= n) {
    const std::string_view id(bytes.data() + pos, 4);
    const std::size_t size = detail::read_u32(p + pos + 4);
    const std::size_t body = pos + 8;
    if (id == "fmt ") {
      if (size < 16 || body + size > n) fail(Errc::kMalformedRiff, "bad fmt chunk size");
      int format = detail::read_u16(p + body);
      channels = detail::read_u16(p + body + 2);
      rate = static_cast<int>(detail::read_u32(p + body + 4));
      block_align = detail::read_u16(p + body + 12);
      bits = detail::read_u16(p + body + 14);
      if (format == 0xFFFE) {
        if (size < 40) fail(Errc::kMalformedRiff, "short WAVE_FORMAT_EXTENSIBLE header");
        format = detail::read_u16(p + body + 24);
      }
      if (format != 1)
        fail(Errc::kUnsupportedEncoding, "format tag " + std::to_string(format) + " is not integer PCM");
      if (bits != 8 && bits != 16 && bits != 24 && bits != 32)
        fail(Errc::kUnsupportedEncoding, "unsupported bit depth " + std::to_string(bits));
      if (channels < 1 || rate < 1 || block_align != channels * bits / 8)
        fail(Errc::kMalformedRiff, "inconsistent fmt fields");
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) fail(Errc::kMalformedRiff, "data chunk before fmt chunk");
      if (body + size > n)
        fail(Errc::kTruncatedData, "data chunk declares " + std::to_string(size) + " bytes, " +
                                       std::to_string(n - std::min(n, body)) + " present");
      if (size % static_cast<std::size_t>(block_align) != 0)
        fail(Errc::kTruncatedData, "data chunk ends mid-frame");
      const std::size_t frames = size / static_cast<std::size_t>(block_align);
      const int bytes_per = bits / 8;
      const double scale = std::ldexp(1.0, -(bits - 1));
      AudioBuffer buf;
      buf.sample_rate = rate;
      buf.source_bit_depth = bits;
      buf.channels.assign(static_cast<std::size_t>(channels), std::vector<double>(frames));
      const unsigned char* d = p + body;
      for (std::size_t f = 0; f < frames; ++f) {
        for (int c = 0; c < channels; ++c, d += bytes_per) {
          std::int64_t v = 0;
          if (bits == 8) {
            v = static_cast<std::int64_t>(d[0]) - 128;
          } else {
            std::uint32_t u = 0;
            for (int b = 0; b < bytes_per; ++b) u |= static_cast<std::uint32_t>(d[b]) << (8 * b);
            const std::uint32_t sign = 1u << (bits - 1);
            v = (u & sign) ? static_cast<std::int64_t>(u) - (std::int64_t{1} << bits)
                           : static_cast<std::int64_t>(u);
          }
          buf.channels[static_cast<std::size_t>(c)][f] = static_cast<double>(v) * scale;
        }
      }
      return buf;
    }
    pos = body + size + (size & 1);
  }
  fail(Errc::kMalformedRiff, have_fmt ? "no data chunk" : "no fmt chunk");
}

inline AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::kIoFailure, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_wav(bytes);
}

// 44-byte-header WAV image, little-endian PCM at 16 (canonical) or 24 bits.
inline std::string encode_wav(const AudioBuffer& buf, int bit_depth = 16) {
  if (bit_depth != 16 && bit_depth != 24) fail(Errc::kInvalidArgument, "output bit depth must be 16 or 24");
  buf.validate();
  const auto ch = static_cast<std::uint32_t>(buf.channel_count());
  const auto bytes_per = static_cast<std::uint32_t>(bit_depth / 8);
  const auto data_bytes = static_cast<std::uint32_t>(buf.frames() * ch * bytes_per);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  detail::put_u32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  detail::put_u32(out, 16);
  detail::put_u16(out, 1);
  detail::put_u16(out, static_cast<std::uint16_t>(ch));
  detail::put_u32(out, static_cast<std::uint32_t>(buf.sample_rate));
  detail::put_u32(out, static_cast<std::uint32_t>(buf.sample_rate) * ch * bytes_per);
  detail::put_u16(out, static_cast<std::uint16_t>(ch * bytes_per));
  detail::put_u16(out, static_cast<std::uint16_t>(bit_depth));
  out += "data";
  detail::put_u32(out, data_bytes);
  for (std::size_t i = 0; i < buf.frames(); ++i)
    for (const auto& c : buf.channels) {
      if (bit_depth == 16) {
        detail::put_u16(out, static_cast<std::uint16_t>(detail::quantize16(c[i])));
      } else {
        const auto u = static_cast<std::uint32_t>(detail::quantize24(c[i]));
        out.push_back(static_cast<char>(u & 0xFF));
        out.push_back(static_cast<char>((u >> 8) & 0xFF));
        out.push_back(static_cast<char>((u >> 16) & 0xFF));
      }
    }
  return out;
}

inline void write_wav(const AudioBuffer& buf, const std::filesystem::path& path, int bit_depth = 16) {
  const std::string bytes = encode_wav(buf, bit_depth);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::kIoFailure, "cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(Errc::kIoFailure, "short write to " + path.string());
}

// Arithmetic mean of all channels, accumulated as offsets from the first
// channel so that identical channels reproduce it exactly.
inline std::vector<double> downmix(const AudioBuffer& buf) {
  std::vector<double> out = buf.channels.front();
  if (buf.channels.size() == 1) return out;
  const double n = static_cast<double>(buf.channels.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double d = 0.0;
    for (std::size_t c = 1; c < buf.channels.size(); ++c) d += buf.channels[c][i] - buf.channels[0][i];
    out[i] += d / n;
  }
  return out;
}

// Polyphase Kaiser-windowed sinc resampler for rational rate ratios.
// Output length is round(n * out_rate / in_rate).
class Resampler {
 public:
  Resampler(int in_rate, int out_rate, ResamplerOptions opts = {})
      : in_rate_(in_rate), out_rate_(out_rate), opts_(opts) {
    if (in_rate <= 0 || out_rate <= 0) fail(Errc::kInvalidArgument, "rates must be positive");
    const int g = std::gcd(in_rate, out_rate);
    up_ = out_rate / g;
    down_ = in_rate / g;
    // Cutoff relative to the input Nyquist frequency.
    cutoff_ = std::min(1.0, static_cast<double>(out_rate) / in_rate) * opts_.rolloff;
    half_width_ = static_cast<int>(std::ceil(opts_.zero_crossings / cutoff_));
    taps_ = 2 * half_width_;
    if (up_ <= kMaxTablePhases) {
      table_.resize(static_cast<std::size_t>(up_) * taps_);
      for (int ph = 0; ph < up_; ++ph) fill_phase(ph, &table_[static_cast<std::size_t>(ph) * taps_]);
    }
  }

  std::vector<double> operator()(std::span<const double> x) const {
    if (up_ == 1 && down_ == 1) return {x.begin(), x.end()};
    const auto n_in = static_cast<std::int64_t>(x.size());
    const std::int64_t n_out = (n_in * up_ + down_ / 2) / down_;
    std::vector<double> y(static_cast<std::size_t>(n_out));
    std::vector<double> scratch(table_.empty() ? static_cast<std::size_t>(taps_) : 0);
    for (std::int64_t j = 0; j < n_out; ++j) {
      const std::int64_t num = j * down_;
      const std::int64_t base = num / up_;
      const int phase = static_cast<int>(num % up_);
      const double* h = nullptr;
      if (table_.empty()) {
        fill_phase(phase, scratch.data());
        h = scratch.data();
      } else {
        h = &table_[static_cast<std::size_t>(phase) * taps_];
      }
      const std::int64_t first = base - half_width_ + 1;
      double acc = 0.0;
      const std::int64_t k0 = std::max<std::int64_t>(0, -first);
      const std::int64_t k1 = std::min<std::int64_t>(taps_, n_in - first);
      for (std::int64_t k = k0; k < k1; ++k) acc += x[static_cast<std::size_t>(first + k)] * h[k];
      y[static_cast<std::size_t>(j)] = acc;
    }
    return y;
  }

 private:
  static constexpr int kMaxTablePhases = 4096;

  void fill_phase(int phase, double* h) const {
    const double frac = static_cast<double>(phase) / up_;
    const double norm = detail::bessel_i0(opts_.kaiser_beta);
    double sum = 0.0;
    for (int k = 0; k < taps_; ++k) {
      const double t = frac + half_width_ - 1 - k;  // distance in input samples
      const double u = t / half_width_;
      double w = 0.0;
      if (std::abs(u) < 1.0) w = detail::bessel_i0(opts_.kaiser_beta * std::sqrt(1.0 - u * u)) / norm;
      h[k] = cutoff_ * detail::sinc(cutoff_ * t) * w;
      sum += h[k];
    }
    for (int k = 0; k < taps_; ++k) h[k] /= sum;
  }

  int in_rate_, out_rate_;
  ResamplerOptions opts_;
  int up_ = 1, down_ = 1;
  double cutoff_ = 1.0;
  int half_width_ = 0, taps_ = 0;
  std::vector<double> table_;
};

inline std::vector<double> resample(std::span<const double> x, int in_rate, int out_rate,
                                    ResamplerOptions opts = {}) {
  return Resampler(in_rate, out_rate, opts)(x);
}

// Downmix, resample and quantize to the policy's format. Idempotent: a buffer
// already in the target format is only re-quantized, which is a no-op for
// 16-bit-exact samples.
inline AudioBuffer to_canonical(const AudioBuffer& buf, const CanonicalPolicy& policy = {}) {
  buf.validate();
  if (policy.target_channels != 1 || policy.target_bit_depth != 16)
    fail(Errc::kInvalidArgument, "canonical format is mono 16-bit");
  std::vector<double> mono = downmix(buf);
  if (buf.sample_rate != policy.target_rate) mono = resample(mono, buf.sample_rate, policy.target_rate);
  for (double& x : mono) x = static_cast<double>(detail::quantize16(x)) / 32768.0;
  return AudioBuffer::mono(std::move(mono), policy.target_rate, 16);
}

}  // namespace vocalmark
