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


// Long-format ("ooTextFile") TextGrid reading and writing. Only interval
// tiers are supported.

#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vocalmark/error.hpp"
#include "vocalmark/format.hpp"

namespace vocalmark {

struct Interval {
  double xmin = 0.0;
  double xmax = 0.0;
  std::string label;

  double duration() const { return xmax - xmin; }
  bool operator==(const Interval&) const = default;
};

struct Tier {
  std::string name;
  double xmin = 0.0;
  double xmax = 0.0;
  std::vector<Interval> intervals;

  bool operator==(const Tier&) const = default;
};

struct TierSet {
  double xmin = 0.0;
  double xmax = 0.0;
  std::vector<Tier> tiers;

  const Tier* find(std::string_view name) const {
    for (const auto& t : tiers)
      if (t.name == name) return &t;
    return nullptr;
  }
  bool operator==(const TierSet&) const = default;
};

inline constexpr double kTimeTolerance = 1e-9;

// Throws NonMonotoneIntervals on empty, reversed, overlapping or
// out-of-bounds intervals.
inline void validate(const TierSet& ts) {
  if (!(ts.xmin < ts.xmax)) fail(Errc::kNonMonotoneIntervals, "grid xmin must be below xmax");
  for (const auto& tier : ts.tiers) {
    if (!(tier.xmin < tier.xmax)) fail(Errc::kNonMonotoneIntervals, "tier '" + tier.name + "' has xmin >= xmax");
    if (tier.xmin < ts.xmin - kTimeTolerance || tier.xmax > ts.xmax + kTimeTolerance)
      fail(Errc::kNonMonotoneIntervals, "tier '" + tier.name + "' exceeds the grid bounds");
    double prev = tier.xmin;
    for (std::size_t i = 0; i < tier.intervals.size(); ++i) {
      const auto& iv = tier.intervals[i];
      const std::string where = "tier '" + tier.name + "' interval " + std::to_string(i + 1);
      if (!(iv.xmin < iv.xmax)) fail(Errc::kNonMonotoneIntervals, where + " has xmin >= xmax");
      if (iv.xmin < prev - kTimeTolerance) fail(Errc::kNonMonotoneIntervals, where + " overlaps or precedes its predecessor");
      if (iv.xmax > tier.xmax + kTimeTolerance) fail(Errc::kNonMonotoneIntervals, where + " ends after the tier");
      prev = iv.xmax;
    }
  }
}

namespace detail {

class TextGridLexer {
 public:
  explicit TextGridLexer(std::string_view text) : s_(text) {
    if (s_.starts_with("\xEF\xBB\xBF")) s_.remove_prefix(3);
  }

  bool at_end() {
    skip_space();
    return pos_ >= s_.size();
  }

  // Bare word or quoted string (with "" as an escaped quote).
  std::string next(bool* quoted = nullptr) {
    skip_space();
    if (pos_ >= s_.size()) fail(Errc::kMalformedTextGrid, "unexpected end of file");
    if (s_[pos_] == '"') {
      std::string out;
      ++pos_;
      for (;;) {
        if (pos_ >= s_.size()) fail(Errc::kMalformedTextGrid, "unterminated string");
        const char c = s_[pos_++];
        if (c == '"') {
          if (pos_ < s_.size() && s_[pos_] == '"') {
            out.push_back('"');
            ++pos_;
          } else {
            break;
          }
        } else {
          out.push_back(c);
        }
      }
      if (quoted) *quoted = true;
      return out;
    }
    const std::size_t b = pos_;
    while (pos_ < s_.size() && !is_space(s_[pos_])) ++pos_;
    if (quoted) *quoted = false;
    return std::string(s_.substr(b, pos_ - b));
  }

  void expect(std::string_view word) {
    bool quoted = false;
    const auto got = next(&quoted);
    if (quoted || got != word)
      fail(Errc::kMalformedTextGrid, "expected '" + std::string(word) + "' but found '" + got + "'");
  }

  std::string string_value(std::string_view key) {
    expect(key);
    expect("=");
    bool quoted = false;
    auto v = next(&quoted);
    if (!quoted) fail(Errc::kMalformedTextGrid, "expected a quoted value for '" + std::string(key) + "'");
    return v;
  }

  double number_value(std::string_view key) {
    expect(key);
    expect("=");
    return number();
  }

  double number() {
    bool quoted = false;
    const auto tok = next(&quoted);
    double v = 0.0;
    const auto* end = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
    if (quoted || ec != std::errc() || ptr != end || !std::isfinite(v))
      fail(Errc::kMalformedTextGrid, "expected a number but found '" + tok + "'");
    return v;
  }

  std::size_t count_value(std::string_view key) {
    const double v = number_value(key);
    if (v < 0 || v != std::floor(v) || v > 1e9) fail(Errc::kMalformedTextGrid, "bad count for '" + std::string(key) + "'");
    return static_cast<std::size_t>(v);
  }

 private:
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
  void skip_space() {
    while (pos_ < s_.size() && is_space(s_[pos_])) ++pos_;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

inline std::string format_number(double v) { return format_shortest(v); }

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace detail

inline TierSet parse_textgrid(std::string_view text) {
  detail::TextGridLexer lx(text);
  if (text.find("ooBinaryFile") != std::string_view::npos)
    fail(Errc::kMalformedTextGrid, "binary TextGrid files are not supported");
  lx.expect("File");
  lx.expect("type");
  lx.expect("=");
  if (lx.next() != "ooTextFile") fail(Errc::kMalformedTextGrid, "not an ooTextFile");
  lx.expect("Object");
  lx.expect("class");
  lx.expect("=");
  if (lx.next() != "TextGrid") fail(Errc::kMalformedTextGrid, "object class is not TextGrid");
  bool quoted = false;
  const auto key = lx.next(&quoted);
  if (quoted || key != "xmin")
    fail(Errc::kMalformedTextGrid, "only the long text format is supported (found '" + key + "' after the header)");
  lx.expect("=");
  TierSet ts;
  ts.xmin = lx.number();
  ts.xmax = lx.number_value("xmax");
  lx.expect("tiers?");
  const auto exists = lx.next();
  if (exists != "<exists>" && exists != "<absent>") fail(Errc::kMalformedTextGrid, "bad tiers? flag");
  if (exists == "<absent>") {
    validate(ts);
    return ts;
  }
  const std::size_t n_tiers = lx.count_value("size");
  lx.expect("item");
  lx.expect("[]:");
  for (std::size_t t = 0; t < n_tiers; ++t) {
    lx.expect("item");
    lx.expect("[" + std::to_string(t + 1) + "]:");
    const auto cls = lx.string_value("class");
    if (cls != "IntervalTier") fail(Errc::kMalformedTextGrid, "unsupported tier class '" + cls + "'");
    Tier tier;
    tier.name = lx.string_value("name");
    tier.xmin = lx.number_value("xmin");
    tier.xmax = lx.number_value("xmax");
    lx.expect("intervals:");
    const std::size_t n = lx.count_value("size");
    tier.intervals.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      lx.expect("intervals");
      lx.expect("[" + std::to_string(i + 1) + "]:");
      Interval iv;
      iv.xmin = lx.number_value("xmin");
      iv.xmax = lx.number_value("xmax");
      iv.label = lx.string_value("text");
      tier.intervals.push_back(std::move(iv));
    }
    ts.tiers.push_back(std::move(tier));
  }
  if (!lx.at_end()) fail(Errc::kMalformedTextGrid, "trailing content after the last tier");
  validate(ts);
  return ts;
}

inline TierSet read_textgrid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::kIoFailure, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_textgrid(ss.str());
}

// Writes the layout Praat uses for long text files, numbers in shortest
// round-trip form.
inline std::string serialize_textgrid(const TierSet& ts) {
  using detail::format_number;
  using detail::quote;
  std::string o;
  o += "File type = \"ooTextFile\"\nObject class = \"TextGrid\"\n\n";
  o += "xmin = " + format_number(ts.xmin) + " \n";
  o += "xmax = " + format_number(ts.xmax) + " \n";
  if (ts.tiers.empty()) {
    o += "tiers? <absent> \n";
    return o;
  }
  o += "tiers? <exists> \n";
  o += "size = " + std::to_string(ts.tiers.size()) + " \n";
  o += "item []: \n";
  for (std::size_t t = 0; t < ts.tiers.size(); ++t) {
    const auto& tier = ts.tiers[t];
    o += "    item [" + std::to_string(t + 1) + "]:\n";
    o += "        class = \"IntervalTier\" \n";
    o += "        name = " + quote(tier.name) + " \n";
    o += "        xmin = " + format_number(tier.xmin) + " \n";
    o += "        xmax = " + format_number(tier.xmax) + " \n";
    o += "        intervals: size = " + std::to_string(tier.intervals.size()) + " \n";
    for (std::size_t i = 0; i < tier.intervals.size(); ++i) {
      const auto& iv = tier.intervals[i];
      o += "        intervals [" + std::to_string(i + 1) + "]:\n";
      o += "            xmin = " + format_number(iv.xmin) + " \n";
      o += "            xmax = " + format_number(iv.xmax) + " \n";
      o += "            text = " + quote(iv.label) + " \n";
    }
  }
  return o;
}

}  // namespace vocalmark
