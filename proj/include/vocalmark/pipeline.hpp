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


// Per-recording extraction: canonical audio in, one FeatureRecord per
// requested level out. Also the JSON form of the analysis parameters, which
// each record carries so it can be reproduced.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "vocalmark/alignment.hpp"
#include "vocalmark/analysis.hpp"
#include "vocalmark/audio.hpp"
#include "vocalmark/error.hpp"
#include "vocalmark/records.hpp"
#include "vocalmark/textgrid.hpp"

namespace vocalmark {

namespace detail {

// Lists every tunable parameter once under a dotted key.
template <class Visitor>
void visit_params(AnalysisParams& p, Visitor&& v) {
  v("pitch.pass1_floor", p.pitch.pass1_floor);
  v("pitch.pass1_ceiling", p.pitch.pass1_ceiling);
  v("pitch.q1_factor", p.pitch.q1_factor);
  v("pitch.q3_factor", p.pitch.q3_factor);
  v("pitch.time_step", p.pitch.base.time_step);
  v("pitch.periods_per_window", p.pitch.base.periods_per_window);
  v("pitch.max_candidates", p.pitch.base.max_candidates);
  v("pitch.voicing_threshold", p.pitch.base.voicing_threshold);
  v("pitch.silence_threshold", p.pitch.base.silence_threshold);
  v("pitch.octave_cost", p.pitch.base.octave_cost);
  v("pitch.octave_jump_cost", p.pitch.base.octave_jump_cost);
  v("pitch.voiced_unvoiced_cost", p.pitch.base.voiced_unvoiced_cost);
  v("intensity.min_pitch", p.intensity.min_pitch);
  v("intensity.time_step", p.intensity.time_step);
  v("intensity.subtract_mean", p.intensity.subtract_mean);
  v("intensity.speech_threshold_db", p.speech_threshold_db);
  v("hnr.periods_per_window", p.hnr.periods_per_window);
  v("hnr.min_r", p.hnr.min_r);
  v("hnr.max_r", p.hnr.max_r);
  v("slope.frame_length", p.slope.frame_length);
  v("slope.low_hz", p.slope.low_hz);
  v("slope.high_hz", p.slope.high_hz);
  v("slope.content_range_db", p.slope.content_range_db);
  v("cpp.frame_length", p.cpp.frame_length);
  v("cpp.time_step", p.cpp.time_step);
  v("cpp.pre_emphasis_from", p.cpp.pre_emphasis_from);
  v("cpp.time_smoothing", p.cpp.time_smoothing);
  v("cpp.quefrency_smoothing", p.cpp.quefrency_smoothing);
  v("cpp.peak_low_hz", p.cpp.peak_low_hz);
  v("cpp.peak_high_hz", p.cpp.peak_high_hz);
  v("cpp.trend_from_quefrency", p.cpp.trend_from_quefrency);
  v("cpp.silence_threshold", p.cpp.silence_threshold);
  v("formant.ceiling", p.formant.ceiling);
  v("formant.n_formants", p.formant.n_formants);
  v("formant.window_length", p.formant.window_length);
  v("formant.time_step", p.formant.time_step);
  v("formant.pre_emphasis_from", p.formant.pre_emphasis_from);
  v("formant.edge_margin", p.formant.edge_margin);
  v("formant.max_bandwidth", p.formant.max_bandwidth);
  v("timing.silence_threshold_db", p.timing.silence_threshold_db);
  v("timing.min_dip_db", p.timing.min_dip_db);
  v("timing.min_pause_s", p.timing.min_pause_s);
  v("timing.require_voicing", p.timing.require_voicing);
  v("timing.intensity_min_pitch", p.timing.intensity_min_pitch);
  v("vowels.labels", p.vowels.target_labels);
  v("vowels.min_duration", p.vowels.min_duration);
  v("vowels.phone_tier", p.vowels.phone_tier);
  v("vowels.overrun_tolerance", p.vowel_overrun_tolerance);
}

inline nlohmann::json::json_pointer param_pointer(std::string_view key) {
  std::string s = "/";
  for (char c : key) s += c == '.' ? '/' : c;
  return nlohmann::json::json_pointer(s);
}

inline void flatten(const nlohmann::json& j, const std::string& prefix, std::map<std::string, nlohmann::json>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else {
    out[prefix] = j;
  }
}

}  // namespace detail

inline nlohmann::json params_to_json(const AnalysisParams& params) {
  auto p = params;
  nlohmann::json j = nlohmann::json::object();
  detail::visit_params(p, [&](std::string_view key, const auto& value) { j[detail::param_pointer(key)] = value; });
  return j;
}

// Overlays the keys present in `j` (nested objects or dotted keys) onto
// `base`. Unknown keys and mistyped values are BadConfig.
inline AnalysisParams params_from_json(const nlohmann::json& j, AnalysisParams base = {}) {
  if (!j.is_object()) fail(Errc::kBadConfig, "analysis parameters must be a JSON object");
  std::map<std::string, nlohmann::json> flat;
  detail::flatten(j, "", flat);
  detail::visit_params(base, [&](std::string_view key, auto& value) {
    const auto it = flat.find(std::string(key));
    if (it == flat.end()) return;
    using T = std::decay_t<decltype(value)>;
    const auto& v = it->second;
    const bool ok = std::is_same_v<T, bool>          ? v.is_boolean()
                    : std::is_same_v<T, int>         ? v.is_number_integer()
                    : std::is_same_v<T, double>      ? v.is_number()
                    : std::is_same_v<T, std::string> ? v.is_string()
                                                     : v.is_array();
    if (!ok) fail(Errc::kBadConfig, "parameter '" + std::string(key) + "' has the wrong type");
    try {
      value = v.template get<T>();
    } catch (const nlohmann::json::exception&) {
      fail(Errc::kBadConfig, "parameter '" + std::string(key) + "' has the wrong type");
    }
    flat.erase(it);
  });
  if (!flat.empty()) fail(Errc::kBadConfig, "unknown parameter '" + flat.begin()->first + "'");
  base.timing.validate();
  if (!(base.pitch.pass1_floor > 0.0 && base.pitch.pass1_floor < base.pitch.pass1_ceiling))
    fail(Errc::kBadConfig, "pitch floor must be positive and below the ceiling");
  if (base.formant.n_formants < 1) fail(Errc::kBadConfig, "formant.n_formants must be positive");
  return base;
}

// Sets one parameter from a "key=value" override; the value is parsed as
// JSON and, failing that, taken as a string.
inline void apply_param_override(nlohmann::json& overrides, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) fail(Errc::kBadConfig, "override must be key=value");
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  auto value = nlohmann::json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  overrides[detail::param_pointer(key)] = value;
}

struct ExtractionRequest {
  std::filesystem::path audio;
  std::optional<std::filesystem::path> textgrid;
  std::set<Level> levels{Level::kSuprasegmental};
  AnalysisParams params;
};

inline std::set<Level> levels_from_string(std::string_view s) {
  std::set<Level> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find(',', start);
    if (end == std::string_view::npos) end = s.size();
    const auto item = s.substr(start, end - start);
    if (item.empty()) fail(Errc::kBadConfig, "empty level in '" + std::string(s) + "'");
    try {
      out.insert(level_from_string(item));
    } catch (const Error&) {
      fail(Errc::kBadConfig, "unknown level '" + std::string(item) + "'");
    }
    start = end + 1;
  }
  return out;
}

// Level a from an existing analysis and parsed alignment.
inline FeatureRecord vowel_record(const RecordingAnalysis& analysis, const TierSet& grid, std::string recording) {
  FeatureRecord rec;
  rec.recording = std::move(recording);
  rec.level = Level::kVowel;
  rec.params = params_to_json(analysis.params());
  const auto vowels = find_target_vowels(grid, analysis.params().vowels);
  const auto agg = vowel_level_features(analysis, vowels);
  rec.features = agg.means;
  rec.n_vowels = agg.n_instances;
  rec.n_rejected = agg.n_rejected;
  return rec;
}

inline FeatureRecord suprasegmental_record(const RecordingAnalysis& analysis, std::string recording) {
  FeatureRecord rec;
  rec.recording = std::move(recording);
  rec.level = Level::kSuprasegmental;
  rec.params = params_to_json(analysis.params());
  rec.features = analysis.suprasegmental();
  return rec;
}

inline std::vector<FeatureRecord> extract_recording(const AudioBuffer& audio, const std::optional<TierSet>& grid,
                                                    const std::set<Level>& levels, const AnalysisParams& params,
                                                    const std::string& recording) {
  if (levels.empty()) fail(Errc::kBadConfig, "no extraction level requested");
  if (levels.count(Level::kVowel) && !grid)
    fail(Errc::kAlignmentMissing, "level a needs a TextGrid for '" + recording + "'");
  const RecordingAnalysis analysis(to_canonical(audio), params);
  std::vector<FeatureRecord> out;
  for (auto level : levels)
    out.push_back(level == Level::kSuprasegmental ? suprasegmental_record(analysis, recording)
                                                  : vowel_record(analysis, *grid, recording));
  return out;
}

inline std::vector<FeatureRecord> extract_recording(const ExtractionRequest& req) {
  if (req.levels.count(Level::kVowel) && !req.textgrid)
    fail(Errc::kAlignmentMissing, "level a needs a TextGrid for '" + req.audio.string() + "'");
  std::optional<TierSet> grid;
  if (req.textgrid) grid = read_textgrid(*req.textgrid);
  return extract_recording(read_wav(req.audio), grid, req.levels, req.params, req.audio.filename().string());
}

}  // namespace vocalmark
