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


// Numerical kernels shared by the feature extractors: windows, framing,
// radix-2 FFT, power spectra, window-compensated autocorrelation, Burg LPC,
// polynomial roots and the real cepstrum.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "vocalmark/audio.hpp"
#include "vocalmark/error.hpp"

namespace vocalmark::dsp {

using Complex = std::complex<double>;

enum class WindowKind { kRectangular, kHann, kGaussian, kKaiser20 };

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Symmetric windows of length n. The Gaussian is the analysis-tool variant
// whose effective width is half its physical width:
//   w(x) = (exp(-48 (x - 1/2)^2) - e^-12) / (1 - e^-12),  x in (0, 1).
inline std::vector<double> make_window(WindowKind kind, std::size_t n) {
  std::vector<double> w(n, 1.0);
  const double nn = static_cast<double>(n);
  switch (kind) {
    case WindowKind::kRectangular:
      break;
    case WindowKind::kHann:
      for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (static_cast<double>(i) + 1.0) / (nn + 1.0));
      break;
    case WindowKind::kGaussian: {
      const double edge = std::exp(-12.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double x = (static_cast<double>(i) + 0.5) / nn - 0.5;
        w[i] = (std::exp(-48.0 * x * x) - edge) / (1.0 - edge);
      }
      break;
    }
    case WindowKind::kKaiser20: {
      const double norm = detail::bessel_i0(20.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double u = 2.0 * (static_cast<double>(i) + 0.5) / nn - 1.0;
        w[i] = detail::bessel_i0(20.0 * std::sqrt(std::max(0.0, 1.0 - u * u))) / norm;
      }
      break;
    }
  }
  return w;
}

// In-place iterative radix-2 FFT. The inverse is scaled by 1/n.
inline void fft(std::vector<Complex>& a, bool inverse = false) {
  const std::size_t n = a.size();
  if (!is_pow2(n)) fail(Errc::kInvalidArgument, "FFT size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    const std::size_t half = len / 2;
    std::vector<Complex> tw(half);
    for (std::size_t k = 0; k < half; ++k)
      tw[k] = Complex(std::cos(ang * static_cast<double>(k)), std::sin(ang * static_cast<double>(k)));
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const Complex u = a[i + k];
        const Complex v = a[i + k + half] * tw[k];
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& z : a) z *= inv;
  }
}

// |X_k|^2 for k in [0, n), of x zero-padded to n.
inline std::vector<double> squared_magnitudes(std::span<const double> x, std::size_t n) {
  if (x.size() > n) fail(Errc::kInvalidArgument, "FFT size smaller than input");
  std::vector<Complex> a(n);
  for (std::size_t i = 0; i < x.size(); ++i) a[i] = x[i];
  fft(a);
  std::vector<double> p(n);
  for (std::size_t k = 0; k < n; ++k) p[k] = std::norm(a[k]);
  return p;
}

struct Frame {
  std::vector<double> samples;
  double start_time = 0.0;
  WindowKind window = WindowKind::kRectangular;
  double sample_rate = 16000.0;

  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
  double center_time() const { return start_time + 0.5 * duration(); }

  std::vector<double> windowed() const {
    std::vector<double> out = samples;
    const auto w = make_window(window, samples.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= w[i];
    return out;
  }
};

// Frame layout in samples; frames are not materialized.
struct FrameGrid {
  std::size_t frame_samples = 0;
  std::size_t hop_samples = 0;
  std::size_t count = 0;
  double sample_rate = 16000.0;

  std::size_t start(std::size_t i) const { return i * hop_samples; }
  double start_time(std::size_t i) const { return static_cast<double>(start(i)) / sample_rate; }
  double center_time(std::size_t i) const {
    return (static_cast<double>(start(i)) + 0.5 * static_cast<double>(frame_samples)) / sample_rate;
  }
};

// count = floor((N - L) / H) + 1 with L, H rounded to whole samples.
inline FrameGrid make_grid(std::size_t n_samples, double rate, double frame_len, double hop) {
  if (!(frame_len > 0.0) || !(hop > 0.0)) fail(Errc::kInvalidArgument, "frame length and hop must be positive");
  FrameGrid g;
  g.sample_rate = rate;
  g.frame_samples = static_cast<std::size_t>(std::llround(frame_len * rate));
  g.hop_samples = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(hop * rate)));
  if (g.frame_samples == 0 || n_samples < g.frame_samples)
    fail(Errc::kSignalTooShort, "signal shorter than one frame");
  g.count = (n_samples - g.frame_samples) / g.hop_samples + 1;
  return g;
}

inline std::vector<Frame> frame_signal(std::span<const double> x, double rate, double frame_len,
                                       double hop, WindowKind kind) {
  const FrameGrid g = make_grid(x.size(), rate, frame_len, hop);
  std::vector<Frame> frames;
  frames.reserve(g.count);
  for (std::size_t i = 0; i < g.count; ++i) {
    const auto first = x.begin() + static_cast<std::ptrdiff_t>(g.start(i));
    frames.push_back({std::vector<double>(first, first + static_cast<std::ptrdiff_t>(g.frame_samples)),
                      g.start_time(i), kind, rate});
  }
  return frames;
}

inline std::vector<Frame> frame_signal(const AudioBuffer& buf, double frame_len, double hop,
                                       WindowKind kind) {
  return frame_signal(buf.samples(), buf.sample_rate, frame_len, hop, kind);
}

struct Spectrum {
  std::vector<double> bin_freqs;  // 0 .. Nyquist
  std::vector<double> power;      // one-sided; sums to the frame energy
  double resolution = 0.0;        // Hz per bin
};

// One-sided power spectrum of already-windowed samples, scaled so that
// sum(power) == sum(x^2) (Parseval).
inline Spectrum power_spectrum(std::span<const double> windowed, double rate, std::size_t fft_size) {
  if (!is_pow2(fft_size) || fft_size < windowed.size())
    fail(Errc::kInvalidArgument, "FFT size must be a power of two not below the frame length");
  const auto mag = squared_magnitudes(windowed, fft_size);
  const std::size_t half = fft_size / 2;
  Spectrum s;
  s.resolution = rate / static_cast<double>(fft_size);
  s.bin_freqs.resize(half + 1);
  s.power.resize(half + 1);
  const double inv = 1.0 / static_cast<double>(fft_size);
  for (std::size_t k = 0; k <= half; ++k) {
    s.bin_freqs[k] = static_cast<double>(k) * s.resolution;
    const bool edge = (k == 0 || k == half);
    s.power[k] = (edge ? 1.0 : 2.0) * mag[k] * inv;
  }
  if (fft_size == 1) s.power[0] = mag[0];
  return s;
}

inline Spectrum power_spectrum(const Frame& frame, std::size_t fft_size) {
  return power_spectrum(frame.windowed(), frame.sample_rate, fft_size);
}

struct Autocorrelation {
  std::vector<double> r;  // r[k] for lags 0..max
  double sample_rate = 16000.0;

  double at(long lag) const { return r.at(static_cast<std::size_t>(std::labs(lag))); }
  double lag_seconds(std::size_t k) const { return static_cast<double>(k) / sample_rate; }
};

// Mean-removed, windowed autocorrelation divided by the window's own
// normalized autocorrelation. Window data are computed once per length.
class AutocorrelationKernel {
 public:
  AutocorrelationKernel(WindowKind kind, std::size_t n)
      : window_(make_window(kind, n)), fft_size_(next_pow2(2 * n)) {
    const auto p = squared_magnitudes(window_, fft_size_);
    window_ac_ = inverse_real(p, n);
  }

  std::size_t length() const { return window_.size(); }
  std::span<const double> window() const { return window_; }

  // Lags 0 .. max_lag (inclusive), values capped to [-1, 1].
  std::vector<double> operator()(std::span<const double> x, std::size_t max_lag) const {
    if (x.size() != window_.size()) fail(Errc::kInvalidArgument, "frame length mismatch");
    max_lag = std::min(max_lag, window_.size() - 1);
    double m = 0.0;
    for (double v : x) m += v;
    m /= static_cast<double>(x.size());
    std::vector<double> xw(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xw[i] = (x[i] - m) * window_[i];
    const auto ra = inverse_real(squared_magnitudes(xw, fft_size_), max_lag + 1);
    if (!(ra[0] > 0.0)) fail(Errc::kZeroEnergyFrame, "frame has no energy");
    std::vector<double> r(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) {
      const double wk = window_ac_[k] / window_ac_[0];
      r[k] = wk > 0.0 ? std::clamp(ra[k] / ra[0] / wk, -1.0, 1.0) : 0.0;
    }
    return r;
  }

 private:
  std::vector<double> inverse_real(const std::vector<double>& power, std::size_t keep) const {
    std::vector<Complex> a(power.begin(), power.end());
    fft(a, true);
    std::vector<double> out(keep);
    for (std::size_t k = 0; k < keep; ++k) out[k] = a[k].real();
    return out;
  }

  std::vector<double> window_;
  std::size_t fft_size_;
  std::vector<double> window_ac_;
};

// Lags up to one third of the frame (one period of a three-period window).
inline Autocorrelation autocorrelation_normalized(const Frame& frame) {
  if (frame.samples.empty()) fail(Errc::kInvalidArgument, "empty frame");
  const AutocorrelationKernel kernel(frame.window, frame.samples.size());
  return {kernel(frame.samples, frame.samples.size() / 3), frame.sample_rate};
}

// Predictor coefficients from Burg's method:
//   x[n] ~= sum_{k=1..p} coefficients[k-1] x[n-k].
struct LpcCoefficients {
  std::vector<double> coefficients;
  double residual_power = 0.0;

  // Error filter A(z) = 1 - sum c_k z^-k, highest power first for root finding:
  // z^p - c_1 z^(p-1) - ... - c_p.
  std::vector<double> polynomial() const {
    std::vector<double> poly{1.0};
    for (double c : coefficients) poly.push_back(-c);
    return poly;
  }
};

inline LpcCoefficients lpc_burg(std::span<const double> x, int order) {
  if (order < 2) fail(Errc::kInvalidArgument, "LPC order must be at least 2");
  const std::size_t n = x.size(), m = static_cast<std::size_t>(order);
  if (n <= m) fail(Errc::kOrderTooHigh, "frame of " + std::to_string(n) + " samples for order " + std::to_string(order));
  double p = 0.0;
  for (double v : x) p += v * v;
  if (!(p > 0.0)) fail(Errc::kZeroEnergyFrame, "frame has no energy");
  double xms = p / static_cast<double>(n);
  std::vector<double> wk1(x.begin(), x.end() - 1), wk2(x.begin() + 1, x.end());
  std::vector<double> d(m, 0.0), wkm(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    double num = 0.0, den = 0.0;
    const std::size_t len = n - 1 - k;
    for (std::size_t j = 0; j < len; ++j) {
      num += wk1[j] * wk2[j];
      den += wk1[j] * wk1[j] + wk2[j] * wk2[j];
    }
    d[k] = den > 0.0 ? 2.0 * num / den : 0.0;
    xms *= 1.0 - d[k] * d[k];
    for (std::size_t i = 0; i < k; ++i) d[i] = wkm[i] - d[k] * wkm[k - 1 - i];
    if (k + 1 == m) break;
    for (std::size_t i = 0; i <= k; ++i) wkm[i] = d[i];
    for (std::size_t j = 0; j + 1 < len; ++j) {
      wk1[j] -= wkm[k] * wk2[j];
      wk2[j] = wk2[j + 1] - wkm[k] * wk1[j + 1];
    }
  }
  return {d, xms};
}

inline LpcCoefficients lpc_burg(const Frame& frame, int order) {
  return lpc_burg(frame.windowed(), order);
}

namespace detail {

// Laguerre iteration for one root of the polynomial a[0] + a[1] z + ... (ascending).
inline Complex laguerre(const std::vector<Complex>& a, Complex x) {
  constexpr int kMaxIter = 80;
  static const double frac[] = {0.0, 0.5, 0.25, 0.75, 0.13, 0.38, 0.62, 0.88, 1.0};
  const int m = static_cast<int>(a.size()) - 1;
  for (int iter = 1; iter <= kMaxIter; ++iter) {
    Complex b = a[static_cast<std::size_t>(m)], d = 0.0, f = 0.0;
    double err = std::abs(b);
    const double abx = std::abs(x);
    for (int j = m - 1; j >= 0; --j) {
      f = x * f + d;
      d = x * d + b;
      b = x * b + a[static_cast<std::size_t>(j)];
      err = std::abs(b) + abx * err;
    }
    err *= 1e-15;
    if (std::abs(b) <= err) return x;
    const Complex g = d / b, g2 = g * g;
    const Complex h = g2 - 2.0 * f / b;
    const Complex sq = std::sqrt(static_cast<double>(m - 1) * (static_cast<double>(m) * h - g2));
    Complex gp = g + sq, gm = g - sq;
    if (std::abs(gp) < std::abs(gm)) gp = gm;
    const Complex dx = std::abs(gp) > 0.0
                           ? static_cast<double>(m) / gp
                           : std::polar(1.0 + abx, static_cast<double>(iter));
    const Complex x1 = x - dx;
    if (x == x1) return x;
    if (iter % 10 != 0) x = x1;
    else x -= frac[(iter / 10) % 9] * dx;
  }
  return x;
}

}  // namespace detail

// All complex roots of c[0] z^p + c[1] z^(p-1) + ... + c[p] (highest power
// first), by Laguerre's method with deflation and polishing.
inline std::vector<Complex> polynomial_roots(std::span<const double> coeffs_high_first) {
  std::size_t start = 0;
  while (start < coeffs_high_first.size() && coeffs_high_first[start] == 0.0) ++start;
  if (coeffs_high_first.size() - start < 2) return {};
  std::vector<Complex> a;  // ascending powers
  for (std::size_t i = coeffs_high_first.size(); i-- > start;) a.emplace_back(coeffs_high_first[i]);
  const int m = static_cast<int>(a.size()) - 1;
  std::vector<Complex> ad = a, roots;
  for (int j = m; j >= 1; --j) {
    std::vector<Complex> part(ad.begin(), ad.begin() + j + 1);
    Complex x = detail::laguerre(part, Complex(0.0, 0.0));
    if (std::abs(x.imag()) <= 2e-15 * std::abs(x.real())) x = Complex(x.real(), 0.0);
    roots.push_back(x);
    Complex b = ad[static_cast<std::size_t>(j)];
    for (int jj = j - 1; jj >= 0; --jj) {
      const Complex c = ad[static_cast<std::size_t>(jj)];
      ad[static_cast<std::size_t>(jj)] = b;
      b = x * b + c;
    }
  }
  for (auto& r : roots) r = detail::laguerre(a, r);
  return roots;
}

struct Cepstrum {
  std::vector<double> quefrency;  // seconds, 0 .. fft_size / (2 rate)
  std::vector<double> values;     // real cepstrum of the dB power spectrum
};

// Real cepstrum: inverse FFT of 10 log10 |X_k|^2 over the full spectrum.
inline Cepstrum real_cepstrum(std::span<const double> windowed, double rate, std::size_t fft_size) {
  if (!is_pow2(fft_size) || fft_size < windowed.size())
    fail(Errc::kInvalidArgument, "FFT size must be a power of two not below the frame length");
  const auto mag = squared_magnitudes(windowed, fft_size);
  const double peak = *std::max_element(mag.begin(), mag.end());
  if (!(peak > 0.0)) fail(Errc::kZeroEnergyFrame, "frame has no energy");
  const double floor = peak * 1e-30;
  std::vector<Complex> a(fft_size);
  for (std::size_t k = 0; k < fft_size; ++k) a[k] = 10.0 * std::log10(mag[k] + floor);
  fft(a, true);
  Cepstrum c;
  const std::size_t half = fft_size / 2;
  c.quefrency.resize(half + 1);
  c.values.resize(half + 1);
  for (std::size_t k = 0; k <= half; ++k) {
    c.quefrency[k] = static_cast<double>(k) / rate;
    c.values[k] = a[k].real();
  }
  return c;
}

inline Cepstrum real_cepstrum(const Frame& frame, std::size_t fft_size) {
  return real_cepstrum(frame.windowed(), frame.sample_rate, fft_size);
}

// First-order pre-emphasis y[n] = x[n] - a x[n-1], a = exp(-2 pi f / rate).
inline std::vector<double> pre_emphasize(std::span<const double> x, double rate, double from_hz) {
  std::vector<double> y(x.begin(), x.end());
  const double a = std::exp(-2.0 * std::numbers::pi * from_hz / rate);
  for (std::size_t i = y.size(); i-- > 1;) y[i] -= a * x[i - 1];
  return y;
}

// Peak location refinement by a parabola through three samples.
struct ParabolicPeak {
  double offset = 0.0;  // in (-0.5, 0.5) samples relative to the middle
  double value = 0.0;
};

inline ParabolicPeak parabolic_peak(double left, double mid, double right) {
  const double dr = 0.5 * (right - left);
  const double d2r = 2.0 * mid - left - right;
  if (!(d2r > 0.0)) return {0.0, mid};
  return {dr / d2r, mid + 0.5 * dr * dr / d2r};
}

// Value at fractional index x of a sequence that is even around index 0
// (an autocorrelation), by raised-cosine-windowed sinc interpolation.
inline double sinc_interpolate_even(std::span<const double> y, double x, int depth) {
  const auto center = static_cast<long>(std::floor(x));
  const long n = static_cast<long>(y.size());
  double sum = 0.0;
  for (long i = center - depth + 1; i <= center + depth; ++i) {
    const long k = std::labs(i);
    if (k >= n) continue;
    const double d = x - static_cast<double>(i);
    const double w = 0.5 + 0.5 * std::cos(std::numbers::pi * d / (depth + 0.5));
    sum += y[static_cast<std::size_t>(k)] * vocalmark::detail::sinc(d) * w;
  }
  return sum;
}

struct InterpolatedPeak {
  double position = 0.0;
  double value = 0.0;
};

// Maximum of the sinc-interpolated sequence within [i - 1, i + 1] by golden
// section search.
inline InterpolatedPeak refine_peak_sinc(std::span<const double> y, std::size_t i, int depth) {
  constexpr double kGolden = 0.6180339887498949;
  double a = static_cast<double>(i) - 1.0, b = static_cast<double>(i) + 1.0;
  double c = b - kGolden * (b - a), d = a + kGolden * (b - a);
  double fc = sinc_interpolate_even(y, c, depth), fd = sinc_interpolate_even(y, d, depth);
  for (int it = 0; it < 40; ++it) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - kGolden * (b - a);
      fc = sinc_interpolate_even(y, c, depth);
    } else {
      a = c; c = d; fc = fd;
      d = a + kGolden * (b - a);
      fd = sinc_interpolate_even(y, d, depth);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, sinc_interpolate_even(y, x, depth)};
}

}  // namespace vocalmark::dsp
