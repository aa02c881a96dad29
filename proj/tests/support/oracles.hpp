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


// Independent reference computations used by the tests. Nothing here calls
// into the library's numerical code.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace oracle {

// |X_k|^2 by direct summation, k = 0 .. n-1.
inline std::vector<double> dft_power(const std::vector<double>& x, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t)
      acc += x[t] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * t % n) / static_cast<double>(n));
    out[k] = std::norm(acc);
  }
  return out;
}

// Frequency of the largest DFT bin below Nyquist.
inline double dominant_frequency(const std::vector<double>& x, double rate) {
  const auto p = dft_power(x, x.size());
  std::size_t best = 1;
  for (std::size_t k = 1; k <= x.size() / 2; ++k)
    if (p[k] > p[best]) best = k;
  return static_cast<double>(best) * rate / static_cast<double>(x.size());
}

// Type-7 quantile by sorting and indexing.
inline double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

// Little-endian 16-bit PCM WAV image assembled field by field.
struct WavImage {
  std::string bytes;

  void u16(unsigned v) {
    bytes += static_cast<char>(v & 0xFF);
    bytes += static_cast<char>((v >> 8) & 0xFF);
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes += static_cast<char>((v >> (8 * i)) & 0xFF);
  }
  void tag(const char* t) { bytes.append(t, 4); }
};

// Hand-built RIFF file with a LIST chunk ahead of the data chunk.
inline std::string pcm16_file(int rate, int channels, const std::vector<std::int16_t>& interleaved,
                              bool with_list_chunk = true) {
  WavImage w;
  const std::uint32_t data = static_cast<std::uint32_t>(interleaved.size() * 2);
  WavImage info;
  info.tag("INFO");
  info.tag("ISFT");
  info.u32(6);
  info.bytes += "oracle";
  const std::string& list = info.bytes;
  const std::uint32_t list_size = with_list_chunk ? static_cast<std::uint32_t>(list.size()) : 0;
  w.tag("RIFF");
  w.u32(4 + 24 + (with_list_chunk ? 8 + list_size : 0) + 8 + data);
  w.tag("WAVE");
  w.tag("fmt ");
  w.u32(16);
  w.u16(1);
  w.u16(static_cast<unsigned>(channels));
  w.u32(static_cast<std::uint32_t>(rate));
  w.u32(static_cast<std::uint32_t>(rate * channels * 2));
  w.u16(static_cast<unsigned>(channels * 2));
  w.u16(16);
  if (with_list_chunk) {
    w.tag("LIST");
    w.u32(list_size);
    w.bytes += list;
  }
  w.tag("data");
  w.u32(data);
  for (auto s : interleaved) w.u16(static_cast<std::uint16_t>(s));
  return w.bytes;
}

// Pulse-free white noise for Monte Carlo checks.
inline std::vector<double> gaussian(std::size_t n, double sd, std::uint64_t seed) {
  std::mt19937_64 g(seed ^ 0x9E3779B97F4A7C15ull);
  std::normal_distribution<double> d(0.0, sd);
  std::vector<double> x(n);
  for (auto& v : x) v = d(g);
  return x;
}

inline std::vector<double> sine(double f, double amplitude, double seconds, double rate, double phase = 0.0) {
  std::vector<double> x(static_cast<std::size_t>(std::llround(seconds * rate)));
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = amplitude * std::sin(2.0 * std::numbers::pi * f * static_cast<double>(i) / rate + phase);
  return x;
}

// Fresh scratch directory under the system temp path.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("vocalmark_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace oracle
