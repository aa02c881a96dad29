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


// Recording file names of the form Participant_Device_Day_Session[_Task]
// and manifest completeness checks.

#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "vocalmark/error.hpp"
#include "vocalmark/protocol/report.hpp"

namespace vocalmark::protocol {

struct RecordingId {
  std::string participant;
  std::string device;
  std::string day;
  std::string session;
  std::optional<std::string> task;
  std::string extension;  // including the dot, or empty

  // Identity ignores the extension.
  auto key() const { return std::tie(participant, device, day, session, task); }
  bool operator==(const RecordingId& o) const { return key() == o.key(); }
  std::strong_ordering operator<=>(const RecordingId& o) const { return key() <=> o.key(); }
};

inline RecordingId parse_recording_filename(std::string_view name) {
  std::string_view stem = name;
  std::string extension;
  if (const auto dot = name.rfind('.'); dot != std::string_view::npos && name.find('_', dot) == std::string_view::npos) {
    extension = std::string(name.substr(dot));
    stem = name.substr(0, dot);
  }
  std::vector<std::string> fields;
  std::size_t b = 0;
  for (;;) {
    const auto u = stem.find('_', b);
    fields.emplace_back(stem.substr(b, u == std::string_view::npos ? std::string_view::npos : u - b));
    if (u == std::string_view::npos) break;
    b = u + 1;
  }
  if (fields.size() != 4 && fields.size() != 5)
    fail(Errc::kBadFieldCount, "'" + std::string(name) + "' has " + std::to_string(fields.size()) +
                                   " underscore-separated fields; expected 4 or 5");
  for (std::size_t i = 0; i < fields.size(); ++i)
    if (fields[i].empty()) fail(Errc::kEmptyField, "'" + std::string(name) + "' field " + std::to_string(i + 1) + " is empty");
  if (extension == ".") fail(Errc::kEmptyField, "'" + std::string(name) + "' has an empty extension");
  RecordingId id{fields[0], fields[1], fields[2], fields[3], std::nullopt, extension};
  if (fields.size() == 5) id.task = fields[4];
  return id;
}

inline std::string format_recording_id(const RecordingId& id) {
  std::string s = id.participant + "_" + id.device + "_" + id.day + "_" + id.session;
  if (id.task) s += "_" + *id.task;
  return s + id.extension;
}

// Device and task vocabulary. Patterns are full-match regular expressions.
struct Vocabulary {
  std::vector<std::string> devices{"condenser", "iPhone11", "SamsungS20FE", "MotorolaG5", "headset"};
  std::vector<std::string> tasks{"NorthWind", "RainbowPassage", "OralReading", "Comma", "Picture\\d+", "Vowels"};
  std::vector<std::string> days{"D1", "D2", "Mon", "Wed", "Fri"};
  std::vector<std::string> sessions{"S1", "S2", "S3"};

  static bool matches(const std::vector<std::string>& patterns, const std::string& token) {
    return std::any_of(patterns.begin(), patterns.end(),
                       [&](const std::string& p) { return std::regex_match(token, std::regex(p)); });
  }
};

inline void check_vocabulary(const RecordingId& id, const Vocabulary& vocab, Report& report) {
  const auto name = format_recording_id(id);
  if (!Vocabulary::matches(vocab.devices, id.device)) report.error("UnknownDevice", name, "device '" + id.device + "'");
  if (!Vocabulary::matches(vocab.days, id.day)) report.error("UnknownDay", name, "day '" + id.day + "'");
  if (!Vocabulary::matches(vocab.sessions, id.session)) report.error("UnknownSession", name, "session '" + id.session + "'");
  if (id.task && !Vocabulary::matches(vocab.tasks, *id.task)) report.error("UnknownTask", name, "task '" + *id.task + "'");
}

struct SessionKey {
  std::string participant;
  std::string day;
  std::string session;
};

// The expected file grid: every session on every device, once per task (or
// once without a task when the task list is empty).
struct ManifestExpectation {
  std::vector<SessionKey> sessions;
  std::vector<std::string> devices;
  std::vector<std::string> tasks;

  std::vector<RecordingId> expected() const {
    std::vector<RecordingId> out;
    for (const auto& s : sessions)
      for (const auto& d : devices) {
        if (tasks.empty()) out.push_back({s.participant, d, s.day, s.session, std::nullopt, ""});
        for (const auto& t : tasks) out.push_back({s.participant, d, s.day, s.session, t, ""});
      }
    std::sort(out.begin(), out.end());
    return out;
  }
  std::size_t expected_count() const { return sessions.size() * devices.size() * std::max<std::size_t>(1, tasks.size()); }
};

// Either an explicit "sessions" list or the product of "participants",
// "days" and "session_labels".
inline ManifestExpectation expectation_from_json(const nlohmann::json& j) {
  ManifestExpectation e;
  try {
    e.devices = j.at("devices").get<std::vector<std::string>>();
    if (j.contains("tasks")) e.tasks = j.at("tasks").get<std::vector<std::string>>();
    if (j.contains("sessions")) {
      for (const auto& s : j.at("sessions"))
        e.sessions.push_back({s.at("participant").get<std::string>(), s.at("day").get<std::string>(),
                              s.at("session").get<std::string>()});
    } else {
      for (const auto& p : j.at("participants"))
        for (const auto& d : j.at("days"))
          for (const auto& s : j.at("session_labels"))
            e.sessions.push_back({p.get<std::string>(), d.get<std::string>(), s.get<std::string>()});
    }
  } catch (const nlohmann::json::exception& ex) {
    fail(Errc::kBadConfig, std::string("manifest expectation: ") + ex.what());
  }
  return e;
}

struct ManifestReport {
  Report report;
  std::size_t expected_count = 0;
  std::size_t observed_count = 0;
  std::vector<RecordingId> missing, duplicates, unexpected;

  bool passed() const { return report.passed(); }
};

inline ManifestReport validate_manifest(std::vector<RecordingId> manifest, const ManifestExpectation& expect,
                                        const Vocabulary* vocab = nullptr) {
  ManifestReport r;
  r.expected_count = expect.expected_count();
  r.observed_count = manifest.size();
  std::sort(manifest.begin(), manifest.end());
  const auto grid = expect.expected();
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] == grid[i - 1]) r.report.error("DuplicateExpectation", format_recording_id(grid[i]));
  for (std::size_t i = 0; i < manifest.size();) {
    std::size_t j = i;
    while (j < manifest.size() && manifest[j] == manifest[i]) ++j;
    if (j - i > 1) {
      r.duplicates.push_back(manifest[i]);
      r.report.error("Duplicate", format_recording_id(manifest[i]), std::to_string(j - i) + " copies");
    }
    i = j;
  }
  std::set_difference(grid.begin(), grid.end(), manifest.begin(), manifest.end(), std::back_inserter(r.missing));
  std::vector<RecordingId> unique = manifest;
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  std::set_difference(unique.begin(), unique.end(), grid.begin(), grid.end(), std::back_inserter(r.unexpected));
  for (const auto& m : r.missing) r.report.error("Missing", format_recording_id(m));
  for (const auto& u : r.unexpected) r.report.error("Unexpected", format_recording_id(u));
  if (vocab)
    for (const auto& id : unique) check_vocabulary(id, *vocab, r.report);
  return r;
}

inline nlohmann::json to_json(const ManifestReport& m) {
  auto j = to_json(m.report);
  auto names = [](const std::vector<RecordingId>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& id : v) a.push_back(format_recording_id(id));
    return a;
  };
  j["expected_count"] = m.expected_count;
  j["observed_count"] = m.observed_count;
  j["missing"] = names(m.missing);
  j["duplicates"] = names(m.duplicates);
  j["unexpected"] = names(m.unexpected);
  return j;
}

// File names straight from a listing; names that do not parse are reported
// as BadFilename and left out of the grid comparison.
inline ManifestReport validate_manifest_names(const std::vector<std::string>& names, const ManifestExpectation& expect,
                                              const Vocabulary* vocab = nullptr) {
  std::vector<RecordingId> ids;
  Report bad;
  for (const auto& n : names) {
    try {
      ids.push_back(parse_recording_filename(n));
    } catch (const Error& e) {
      bad.error("BadFilename", n, e.what());
    }
  }
  auto r = validate_manifest(std::move(ids), expect, vocab);
  r.observed_count = names.size();
  r.report.findings.insert(r.report.findings.begin(), bad.findings.begin(), bad.findings.end());
  return r;
}

}  // namespace vocalmark::protocol
