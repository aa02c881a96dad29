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


#include <gtest/gtest.h>

#include <random>

#include "vocalmark/protocol/checklist.hpp"
#include "vocalmark/protocol/filename.hpp"
#include "vocalmark/protocol/questionnaire.hpp"
#include "vocalmark/protocol/schedule.hpp"

using namespace vocalmark;
using namespace vocalmark::protocol;
using nlohmann::json;

namespace {

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::kInvalidArgument;
}

const std::vector<std::string> kDevices{"condenser", "iPhone11", "SamsungS20FE", "MotorolaG5", "headset"};

// Day arm: 28 participants, 3 sessions on each of two days. Week arm: 26
// participants, Monday/Wednesday/Friday.
std::vector<SessionKey> study_sessions() {
  std::vector<SessionKey> s;
  for (int p = 1; p <= 28; ++p)
    for (auto d : {"D1", "D2"})
      for (auto k : {"S1", "S2", "S3"}) s.push_back({"P" + std::to_string(p), d, k});
  for (int p = 101; p <= 126; ++p)
    for (auto d : {"Mon", "Wed", "Fri"}) s.push_back({"P" + std::to_string(p), d, "S1"});
  return s;
}

std::vector<RecordingId> files_for(const std::vector<SessionKey>& sessions) {
  std::vector<RecordingId> out;
  for (const auto& s : sessions)
    for (const auto& d : kDevices) out.push_back({s.participant, d, s.day, s.session, std::nullopt, ".wav"});
  return out;
}

SessionSchedule day_schedule(std::vector<std::string> times) {
  SessionSchedule s;
  s.arm = Arm::kDay;
  for (const auto& t : times) s.session_starts.push_back(parse_datetime(t));
  return s;
}

SessionSchedule week_schedule(std::vector<std::string> times) {
  auto s = day_schedule(std::move(times));
  s.arm = Arm::kWeek;
  return s;
}

}  // namespace

// ------------------------------------------------------------- file names

TEST(Filename, ParsesFourAndFiveFields) {
  const auto a = parse_recording_filename("P07_condenser_D1_S2.wav");
  EXPECT_EQ(a.participant, "P07");
  EXPECT_EQ(a.device, "condenser");
  EXPECT_EQ(a.day, "D1");
  EXPECT_EQ(a.session, "S2");
  EXPECT_FALSE(a.task);
  EXPECT_EQ(a.extension, ".wav");
  const auto b = parse_recording_filename("P07_iPhone11_Wed_S1_RainbowPassage");
  EXPECT_EQ(b.task, "RainbowPassage");
  EXPECT_EQ(b.extension, "");
}

TEST(Filename, RoundTripsAThousandGeneratedNames) {
  std::mt19937_64 gen(2026);
  const std::string chars = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-";
  auto token = [&](std::size_t max_len) {
    std::string s;
    for (std::size_t k = 1 + gen() % max_len; k > 0; --k) s.push_back(chars[gen() % chars.size()]);
    return s;
  };
  const std::vector<std::string> exts{"", ".wav", ".WAV", ".TextGrid", ".flac"};
  for (int i = 0; i < 1000; ++i) {
    RecordingId id{token(6), token(12), token(4), token(3), std::nullopt, exts[gen() % exts.size()]};
    if (gen() % 2) id.task = token(14);
    const auto name = format_recording_id(id);
    SCOPED_TRACE(name);
    const auto back = parse_recording_filename(name);
    EXPECT_EQ(back, id);
    EXPECT_EQ(back.extension, id.extension);
    EXPECT_EQ(format_recording_id(back), name);
  }
}

TEST(Filename, Rejections) {
  EXPECT_EQ(code_of([] { parse_recording_filename("P1_condenser_D1.wav"); }), Errc::kBadFieldCount);
  EXPECT_EQ(code_of([] { parse_recording_filename("P1_condenser_D1_S1_Task_Extra"); }), Errc::kBadFieldCount);
  EXPECT_EQ(code_of([] { parse_recording_filename("P1__D1_S1"); }), Errc::kEmptyField);
  EXPECT_EQ(code_of([] { parse_recording_filename("P1_condenser_D1_S1_"); }), Errc::kEmptyField);
  EXPECT_EQ(code_of([] { parse_recording_filename("P1_condenser_D1_S1."); }), Errc::kEmptyField);
}

TEST(Filename, DotsInsideFieldsAreNotExtensions) {
  const auto id = parse_recording_filename("P1_v1.2_D1_S1");
  EXPECT_EQ(id.device, "v1.2");
  EXPECT_EQ(id.extension, "");
}

TEST(Filename, VocabularyChecks) {
  Vocabulary v;
  Report r;
  check_vocabulary(parse_recording_filename("P1_condenser_D1_S1_Picture3.wav"), v, r);
  EXPECT_TRUE(r.passed());
  check_vocabulary(parse_recording_filename("P1_walkman_Tue_S4_Singing.wav"), v, r);
  EXPECT_EQ(r.error_count(), 4u);
  EXPECT_TRUE(r.has("UnknownDevice(P1_walkman_Tue_S4_Singing.wav)"));
}

// --------------------------------------------------------------- manifest

TEST(Manifest, StudyArithmetic) {
  auto sessions = study_sessions();
  ASSERT_EQ(sessions.size(), 28u * 6 + 26u * 3);
  sessions.erase(sessions.begin() + 200);  // one Week session never happened
  ManifestExpectation held{sessions, kDevices, {}};
  EXPECT_EQ(sessions.size(), 245u);
  EXPECT_EQ(held.expected_count(), 1225u);
  const auto r = validate_manifest(files_for(sessions), held, nullptr);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.observed_count, 1225u);
  EXPECT_EQ(r.expected_count, 245u * 5);
}

TEST(Manifest, MissingSessionShowsUpAsFiveFiles) {
  const auto all = study_sessions();
  auto held = all;
  held.erase(held.begin() + 200);
  const auto r = validate_manifest(files_for(held), {all, kDevices, {}});
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.expected_count, 1230u);
  EXPECT_EQ(r.observed_count, 1225u);
  EXPECT_EQ(r.missing.size(), 5u);
  for (const auto& m : r.missing) EXPECT_EQ(m.participant, all[200].participant);
}

TEST(Manifest, DuplicatesAndUnexpected) {
  const std::vector<SessionKey> s{{"P1", "D1", "S1"}};
  auto files = files_for(s);
  files.push_back(files[0]);
  files[files.size() - 1].extension = ".WAV";
  files.push_back({"P9", "condenser", "D1", "S1", std::nullopt, ".wav"});
  const auto r = validate_manifest(files, {s, kDevices, {}});
  EXPECT_EQ(r.duplicates.size(), 1u);
  EXPECT_EQ(r.unexpected.size(), 1u);
  EXPECT_TRUE(r.missing.empty());
  EXPECT_TRUE(r.report.has("Duplicate(P1_condenser_D1_S1.wav)"));
  EXPECT_TRUE(r.report.has("Unexpected(P9_condenser_D1_S1.wav)"));
}

TEST(Manifest, TaskGridAndBadNames) {
  const std::vector<SessionKey> s{{"P1", "D1", "S1"}};
  ManifestExpectation e{s, {"condenser"}, {"NorthWind", "RainbowPassage"}};
  EXPECT_EQ(e.expected_count(), 2u);
  const auto r = validate_manifest_names({"P1_condenser_D1_S1_NorthWind.wav", "readme.txt"}, e);
  EXPECT_EQ(r.observed_count, 2u);
  EXPECT_TRUE(r.report.has("BadFilename(readme.txt)"));
  EXPECT_TRUE(r.report.has("Missing(P1_condenser_D1_S1_RainbowPassage)"));
}

TEST(Manifest, ExpectationFromJson) {
  const auto e = expectation_from_json(
      json{{"devices", kDevices}, {"participants", {"P1", "P2"}}, {"days", {"D1", "D2"}}, {"session_labels", {"S1", "S2", "S3"}}});
  EXPECT_EQ(e.expected_count(), 2u * 2 * 3 * 5);
  EXPECT_EQ(code_of([] { expectation_from_json(json{{"participants", {"P1"}}}); }), Errc::kBadConfig);
}

// --------------------------------------------------------------- schedule

TEST(Schedule, MedianDayTimesPass) {
  // Median start times from the study, Day 2 nine weeks after Day 1.
  const auto r = day_schedule({"2023-06-12T09:12", "2023-06-12T14:05", "2023-06-12T18:04", "2023-08-14T09:11",
                               "2023-08-14T14:05", "2023-08-14T18:04"});
  const auto rep = validate_schedule(r);
  EXPECT_TRUE(rep.passed()) << to_json(rep).dump();
}

TEST(Schedule, ThreeHourGapFails) {
  const auto rep = validate_schedule(day_schedule({"2023-06-12T09:12", "2023-06-12T14:05", "2023-06-12T17:05"}));
  EXPECT_FALSE(rep.passed());
  EXPECT_TRUE(rep.has("MinGap(D1/S2-S3)"));
  EXPECT_EQ(rep.error_count(), 1u);
}

TEST(Schedule, GapBoundaryIsInclusive) {
  EXPECT_TRUE(validate_schedule(day_schedule({"2023-06-12T09:00", "2023-06-12T13:00", "2023-06-12T17:00"})).passed());
  EXPECT_TRUE(validate_schedule(day_schedule({"2023-06-12T10:00", "2023-06-12T13:30", "2023-06-12T17:00"})).passed());
  EXPECT_FALSE(validate_schedule(day_schedule({"2023-06-12T10:00", "2023-06-12T13:29", "2023-06-12T17:00"})).passed());
}

TEST(Schedule, DayArmWindowsAndSecondDay) {
  auto rep = validate_schedule(day_schedule({"2023-06-12T07:59", "2023-06-12T13:00", "2023-06-12T17:00"}));
  EXPECT_TRUE(rep.has("OutsideWindow(D1/S1)"));
  rep = validate_schedule(day_schedule({"2023-06-12T09:00", "2023-06-12T14:00", "2023-06-12T18:00",
                                        "2023-06-13T09:00", "2023-06-13T14:00", "2023-06-13T18:00"}));
  EXPECT_TRUE(rep.has("Day2Interval(D2)"));
  EXPECT_TRUE(rep.has("WeekdayMismatch(D2)"));
  rep = validate_schedule(day_schedule({"2023-06-12T09:00", "2023-06-12T14:00", "2023-06-12T18:00",
                                        "2023-08-28T09:00", "2023-08-28T14:00", "2023-08-28T18:00"}));
  EXPECT_TRUE(rep.passed());  // 77 days
  rep = validate_schedule(day_schedule({"2023-06-12T09:00", "2023-06-12T14:00"}));
  EXPECT_TRUE(rep.has("SessionCount(D1)"));
}

TEST(Schedule, InputOrderDoesNotMatter) {
  const auto a = validate_schedule(day_schedule({"2023-06-12T18:04", "2023-06-12T09:12", "2023-06-12T14:05"}));
  EXPECT_TRUE(a.passed());
}

TEST(Schedule, WeekArm) {
  EXPECT_TRUE(validate_schedule(week_schedule({"2023-06-12T10:15", "2023-06-14T10:30", "2023-06-16T10:05"})).passed());
  auto rep = validate_schedule(week_schedule({"2023-06-12T10:00", "2023-06-14T10:30", "2023-06-16T10:00"}));
  EXPECT_TRUE(rep.has("StartTimeDrift(S1-S2)"));
  rep = validate_schedule(week_schedule({"2023-06-12T10:00", "2023-06-13T10:00", "2023-06-16T10:00"}));
  EXPECT_TRUE(rep.has("WrongWeekday(S2)"));
  rep = validate_schedule(week_schedule({"2023-06-12T10:00", "2023-06-14T10:00", "2023-06-23T10:00"}));
  EXPECT_TRUE(rep.has("NotSameWeek"));
}

TEST(Schedule, JsonAndDateParsing) {
  const auto s = schedule_from_json(json{{"arm", "Week"}, {"sessions", {"2023-06-12 10:00:30", "2023-06-14T10:00"}}});
  EXPECT_EQ(s.arm, Arm::kWeek);
  EXPECT_EQ(format_datetime(s.session_starts[0]), "2023-06-12T10:00");
  EXPECT_EQ(code_of([] { schedule_from_json(json{{"arm", "Month"}, {"sessions", json::array()}}); }), Errc::kBadConfig);
  EXPECT_EQ(code_of([] { schedule_from_json(json{{"arm", "Day"}, {"sessions", {"2023-02-30T10:00"}}}); }),
            Errc::kBadConfig);
  EXPECT_EQ(code_of([] { parse_datetime("2023-06-12T25:00"); }), Errc::kInvalidArgument);
}

// ---------------------------------------------------------- questionnaire

namespace {

json good_questionnaire() {
  return {{"minor_health_issues", {{"answer", "yes"}, {"details", "slight cold"}}},
          {"wake_time", "07:10"},
          {"out_of_bed_time", "07:30"},
          {"sleep_hours", 7.5},
          {"voice_use", "Intermediate"},
          {"last_drink", "Within the last hour"},
          {"last_food", "More than 2 hours ago"},
          {"mood_picture", 4}};
}

}  // namespace

TEST(Questionnaire, ValidAnswersPassAndMoodLabelIsOptional) {
  auto q = good_questionnaire();
  EXPECT_TRUE(validate_questionnaire(q).passed());
  q["mood_label"] = "calm-serene";
  EXPECT_TRUE(validate_questionnaire(q).passed());
  q["minor_health_issues"] = "unsure";
  EXPECT_TRUE(validate_questionnaire(q).passed());
}

TEST(Questionnaire, Violations) {
  auto q = good_questionnaire();
  q["voice_use"] = "Very high";
  q["wake_time"] = "7:10";
  q["mood_picture"] = 10;
  q["mood_label"] = "furious";
  q.erase("last_food");
  const auto r = validate_questionnaire(q);
  EXPECT_TRUE(r.has("NotInEnumeration(voice_use)"));
  EXPECT_TRUE(r.has("BadTime(wake_time)"));
  EXPECT_TRUE(r.has("OutOfRange(mood_picture)"));
  EXPECT_TRUE(r.has("NotInEnumeration(mood_label)"));
  EXPECT_TRUE(r.has("Missing(last_food)"));
  EXPECT_EQ(r.error_count(), 5u);
}

TEST(Questionnaire, WarningsDoNotFail) {
  auto q = good_questionnaire();
  q["out_of_bed_time"] = "06:00";
  q["favourite_colour"] = "blue";
  const auto r = validate_questionnaire(q);
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(r.has("OutOfBedBeforeWake(out_of_bed_time)"));
  EXPECT_TRUE(r.has("UnknownField(favourite_colour)"));
}

TEST(Questionnaire, ClockParsing) {
  EXPECT_EQ(parse_clock("00:00"), 0);
  EXPECT_EQ(parse_clock("23:59"), 23 * 60 + 59);
  EXPECT_FALSE(parse_clock("24:00"));
  EXPECT_FALSE(parse_clock("12:60"));
  EXPECT_FALSE(parse_clock("12:5"));
  EXPECT_FALSE(parse_clock("12:05pm"));
}

TEST(QcLog, FieldsAndUploadChecks) {
  json log{{"session_start_time", "09:12"}, {"water_drunk", false},   {"interruptions", ""},
           {"extraneous_noise", "door"},    {"vowel_task_issues", ""}, {"task_difficulties", ""},
           {"other", ""}};
  EXPECT_TRUE(validate_qc_log(log).passed());
  log["files_in_correct_folders"] = false;
  log["water_drunk"] = "no";
  log.erase("other");
  const auto r = validate_qc_log(log);
  EXPECT_TRUE(r.has("CheckFailed(files_in_correct_folders)"));
  EXPECT_TRUE(r.has("BadType(water_drunk)"));
  EXPECT_TRUE(r.has("Missing(other)"));
  EXPECT_EQ(r.error_count(), 3u);
  EXPECT_FALSE(validate_qc_log(json::array()).passed());
}

// -------------------------------------------------------------- checklist

TEST(Checklist, CompleteTemplatePasses) {
  const auto c = lint_study_design(complete_checklist_template());
  EXPECT_TRUE(c.report.findings.empty()) << to_json(c).dump();
}

TEST(Checklist, EveryRemovedAspectIsFlagged) {
  std::size_t n = 0;
  for (const auto& section : design_checklist())
    for (const auto& aspect : section.aspects) {
      ++n;
      auto cfg = complete_checklist_template();
      cfg[section.name].erase(aspect.name);
      const auto c = lint_study_design(cfg);
      const std::string label = "Missing(" + section.name + "/" + aspect.name + ")";
      EXPECT_TRUE(c.report.has(label)) << label;
      EXPECT_EQ(c.report.error_count(), 1u) << label;
    }
  EXPECT_EQ(n, 15u);
}

TEST(Checklist, EveryRemovedItemIsFlagged) {
  for (const auto& section : design_checklist())
    for (const auto& aspect : section.aspects)
      for (const auto& item : aspect.items) {
        auto cfg = complete_checklist_template();
        cfg[section.name][aspect.name]["items"].erase(item);
        EXPECT_TRUE(lint_study_design(cfg).report.has("Missing(" + aspect.name + "/" + item + ")")) << item;
      }
}

TEST(Checklist, StatusesAndUnknowns) {
  auto cfg = complete_checklist_template();
  cfg["Data Processing"]["Preprocessing"] = {{"status", "not-applicable"}, {"reason", "raw audio only"}};
  cfg["Data Collection"]["Metadata"] = {{"status", "not-applicable"}};
  cfg["Data Collection"]["Data Quality Log"] = {{"status", "missing"}};
  cfg["Participants"]["Recruitment"]["status"] = "maybe";
  cfg["Participants"]["Budget"] = {{"status", "addressed"}};
  cfg["Ethics"] = json::object();
  const auto c = lint_study_design(cfg);
  EXPECT_FALSE(c.report.has("Missing(Data Processing/Preprocessing)"));
  EXPECT_TRUE(c.report.has("MissingReason(Data Collection/Metadata)"));
  EXPECT_TRUE(c.report.has("Missing(Data Collection/Data Quality Log)"));
  EXPECT_TRUE(c.report.has("BadStatus(Participants/Recruitment)"));
  EXPECT_TRUE(c.report.has("UnknownAspect(Participants/Budget)"));
  EXPECT_TRUE(c.report.has("UnknownSection(Ethics)"));
  EXPECT_EQ(c.report.error_count(), 3u);
  const auto j = to_json(c);
  EXPECT_EQ(j["by_section"]["Other"].size(), 1u);
  EXPECT_EQ(j["by_section"]["Data Collection"].size(), 2u);
}
