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


#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "vocalmark/error.hpp"

namespace vocalmark::stats {

inline double mean(std::span<const double> v) {
  if (v.empty()) fail(Errc::kInvalidArgument, "mean of empty sequence");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Sample standard deviation (n - 1 denominator); zero for a single value.
inline double stddev(std::span<const double> v) {
  const double m = mean(v);
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// Quantile by linear interpolation between order statistics:
// h = (n - 1) p, result = x[floor h] + (h - floor h) (x[floor h + 1] - x[floor h]).
inline double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) fail(Errc::kInvalidArgument, "quantile of empty sequence");
  if (!(p >= 0.0 && p <= 1.0)) fail(Errc::kInvalidArgument, "quantile probability outside [0, 1]");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  return quantile_sorted(v, p);
}

inline double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

// Population standard deviation (n denominator).
inline double pstddev(std::span<const double> v) {
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

struct Line {
  double intercept = 0.0;
  double slope = 0.0;
  double operator()(double x) const { return intercept + slope * x; }
};

// Ordinary least squares; needs at least two distinct abscissae.
inline Line fit_least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    fail(Errc::kInvalidArgument, "least squares needs at least two points");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx <= 0.0) fail(Errc::kInvalidArgument, "least squares with degenerate abscissae");
  const double b = sxy / sxx;
  return {my - b * mx, b};
}

// Incomplete Theil-Sen estimator: slopes over the n/2 pairs (i, i + n/2),
// median slope, then median residual as intercept. O(n) with nth_element.
inline Line fit_theil_sen_incomplete(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    fail(Errc::kInvalidArgument, "Theil-Sen needs at least two points");
  const std::size_t n = x.size(), half = n / 2;
  std::vector<double> slopes;
  slopes.reserve(half);
  for (std::size_t i = 0; i < half; ++i) {
    const double dx = x[i + half] - x[i];
    if (dx != 0.0) slopes.push_back((y[i + half] - y[i]) / dx);
  }
  if (slopes.empty()) fail(Errc::kInvalidArgument, "Theil-Sen with degenerate abscissae");
  auto mid = slopes.begin() + static_cast<std::ptrdiff_t>(slopes.size() / 2);
  std::nth_element(slopes.begin(), mid, slopes.end());
  const double b = *mid;
  std::vector<double> resid(n);
  for (std::size_t i = 0; i < n; ++i) resid[i] = y[i] - b * x[i];
  auto rmid = resid.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(resid.begin(), rmid, resid.end());
  return {*rmid, b};
}

}  // namespace vocalmark::stats
