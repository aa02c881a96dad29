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


// Pre-recording questionnaire and researcher quality-control log.

#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "json.hpp"
#include "vocalmark/protocol/report.hpp"
#include "vocalmark/protocol/schedule.hpp"

namespace vocalmark::protocol {

inline constexpr std::array<std::string_view, 3> kHealthAnswers{"yes", "no", "unsure"};
inline constexpr std::array<std::string_view, 3> kVoiceUse{"Low Activity", "Intermediate", "High activity"};
inline constexpr std::array<std::string_view, 5> kLastDrink{
    "I had something to drink when I arrived at the recording session", "Within the last hour",
    "More than 1 hour ago", "More than 2 hours ago", "More than 3 hours ago"};
inline constexpr std::array<std::string_view, 4> kLastFood{"Within the last hour", "More than 1 hour ago",
                                                           "More than 2 hours ago", "More than 3 hours ago"};
inline constexpr std::array<std::string_view, 9> kMoodLabels{
    "neutral",  "excited-lively", "cheerful-happy", "tense-nervous", "irritated-annoyed",
    "sad-gloomy", "bored-weary",  "calm-serene",    "relaxed-carefree"};

template <std::size_t N>
bool one_of(const std::array<std::string_view, N>& options, std::string_view v) {
  return std::find(options.begin(), options.end(), v) != options.end();
}

// "HH:MM" in 24-hour time; returns minutes of day.
inline std::optional<int> parse_clock(const std::string& s) {
  int h = -1, m = -1, used = 0;
  if (std::sscanf(s.c_str(), "%2d:%2d%n", &h, &m, &used) != 2 || static_cast<std::size_t>(used) != s.size() ||
      s.size() != 5 || h < 0 || h > 23 || m < 0 || m > 59)
    return std::nullopt;
  return h * 60 + m;
}

namespace detail {

inline void unknown_keys(const nlohmann::json& j, const std::set<std::string>& known, Report& r) {
  for (const auto& [k, v] : j.items())
    if (!known.contains(k)) r.warning("UnknownField", k);
}

inline const nlohmann::json* field(const nlohmann::json& j, const char* key, Report& r, bool required = true) {
  if (!j.contains(key) || j.at(key).is_null()) {
    if (required) r.error("Missing", key);
    return nullptr;
  }
  return &j.at(key);
}

template <std::size_t N>
void enum_field(const nlohmann::json& j, const char* key, const std::array<std::string_view, N>& options, Report& r,
                bool required = true) {
  const auto* v = field(j, key, r, required);
  if (!v) return;
  if (!v->is_string() || !one_of(options, v->get<std::string>()))
    r.error("NotInEnumeration", key, "value " + v->dump() + " is not an allowed option");
}

inline std::optional<int> clock_field(const nlohmann::json& j, const char* key, Report& r) {
  const auto* v = field(j, key, r);
  if (!v) return std::nullopt;
  std::optional<int> t;
  if (v->is_string()) t = parse_clock(v->get<std::string>());
  if (!t) r.error("BadTime", key, "expected HH:MM, got " + v->dump());
  return t;
}

}  // namespace detail

inline Report validate_questionnaire(const nlohmann::json& j) {
  Report r;
  if (!j.is_object()) {
    r.error("NotAnObject", "questionnaire");
    return r;
  }
  detail::unknown_keys(j, {"participant", "session", "minor_health_issues", "wake_time", "out_of_bed_time",
                           "sleep_hours", "voice_use", "last_drink", "last_food", "mood_picture", "mood_label"},
                       r);
  if (const auto* h = detail::field(j, "minor_health_issues", r)) {
    const nlohmann::json* answer = h->is_object() && h->contains("answer") ? &h->at("answer") : h;
    if (!answer->is_string() || !one_of(kHealthAnswers, answer->get<std::string>()))
      r.error("NotInEnumeration", "minor_health_issues", "expected yes, no or unsure");
    else if (h->is_object() && h->contains("details") && !h->at("details").is_string())
      r.error("BadType", "minor_health_issues.details", "details must be text");
  }
  const auto wake = detail::clock_field(j, "wake_time", r);
  const auto up = detail::clock_field(j, "out_of_bed_time", r);
  if (wake && up && *up < *wake) r.warning("OutOfBedBeforeWake", "out_of_bed_time");
  if (const auto* s = detail::field(j, "sleep_hours", r)) {
    if (!s->is_number() || s->get<double>() < 0.0 || s->get<double>() > 24.0)
      r.error("OutOfRange", "sleep_hours", "expected hours in [0, 24]");
  }
  detail::enum_field(j, "voice_use", kVoiceUse, r);
  detail::enum_field(j, "last_drink", kLastDrink, r);
  detail::enum_field(j, "last_food", kLastFood, r);
  if (const auto* m = detail::field(j, "mood_picture", r)) {
    if (!m->is_number_integer() || m->get<int>() < 1 || m->get<int>() > 9)
      r.error("OutOfRange", "mood_picture", "expected an image number 1-9");
  }
  detail::enum_field(j, "mood_label", kMoodLabels, r, false);
  return r;
}

// Seven log fields plus the post-session upload checks.
inline Report validate_qc_log(const nlohmann::json& j) {
  Report r;
  if (!j.is_object()) {
    r.error("NotAnObject", "qc_log");
    return r;
  }
  static const std::array<const char*, 5> text_fields{"interruptions", "extraneous_noise", "vowel_task_issues",
                                                      "task_difficulties", "other"};
  static const std::array<const char*, 3> checks{"files_in_correct_folders", "correct_speaker",
                                                 "tasks_in_stated_order"};
  std::set<std::string> known{"participant", "session", "session_start_time", "water_drunk", "additional_issues"};
  for (auto k : text_fields) known.insert(k);
  for (auto k : checks) known.insert(k);
  detail::unknown_keys(j, known, r);
  if (const auto* t = detail::field(j, "session_start_time", r)) {
    bool ok = false;
    if (t->is_string()) {
      const auto s = t->get<std::string>();
      if (parse_clock(s)) ok = true;
      else {
        try {
          parse_datetime(s);
          ok = true;
        } catch (const Error&) {
        }
      }
    }
    if (!ok) r.error("BadTime", "session_start_time", "expected HH:MM or YYYY-MM-DDTHH:MM");
  }
  if (const auto* w = detail::field(j, "water_drunk", r))
    if (!w->is_boolean()) r.error("BadType", "water_drunk", "expected true or false");
  for (auto k : text_fields)
    if (const auto* v = detail::field(j, k, r))
      if (!v->is_string()) r.error("BadType", k, "expected text (empty when nothing to report)");
  for (auto k : checks)
    if (const auto* v = detail::field(j, k, r, false)) {
      if (!v->is_boolean()) r.error("BadType", k, "expected true or false");
      else if (!v->get<bool>()) r.error("CheckFailed", k);
    }
  return r;
}

}  // namespace vocalmark::protocol
