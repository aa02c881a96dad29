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

#include <algorithm>
#include <random>

#include "../support/oracles.hpp"
#include "vocalmark/reporting.hpp"

using namespace vocalmark;

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

FeatureRecord record(std::string name, Level level, std::vector<std::pair<Feature, double>> values,
                     std::map<std::string, std::string> extra = {}) {
  FeatureRecord r;
  r.recording = std::move(name);
  r.level = level;
  for (auto [f, v] : values) r.features.set(f, v);
  r.extra = std::move(extra);
  return r;
}

}  // namespace

TEST(Summary, FivePoints) {
  const auto c = summarize_values({5, 1, 4, 2, 3});
  EXPECT_EQ(c.n, 5u);
  EXPECT_EQ(c.median, 3.0);
  EXPECT_EQ(c.q1, 2.0);
  EXPECT_EQ(c.q3, 4.0);
}

TEST(Summary, SingleValueCollapses) {
  const auto c = summarize_values({7.25});
  EXPECT_EQ(c.median, 7.25);
  EXPECT_EQ(c.q1, 7.25);
  EXPECT_EQ(c.q3, 7.25);
  EXPECT_EQ(code_of([] { summarize_values({}); }), Errc::kEmptyGroup);
}

TEST(Summary, MatchesSortOracleOnRandomCohorts) {
  std::mt19937_64 gen(4);
  for (int cohort = 0; cohort < 100; ++cohort) {
    const std::size_t n = 1 + gen() % 60;
    std::lognormal_distribution<double> dist(std::log(100.0 + cohort), 0.4);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(gen);
    std::vector<FeatureRecord> recs;
    for (std::size_t i = 0; i < n; ++i)
      recs.push_back(record("r" + std::to_string(i), Level::kSuprasegmental, {{Feature::kPitchMean, v[i]}}));
    std::shuffle(recs.begin(), recs.end(), gen);
    const auto t = summarize_features(recs);
    ASSERT_EQ(t.rows.size(), 1u);
    const auto& c = t.rows[0].cells.at("all");
    EXPECT_EQ(c.n, n);
    EXPECT_NEAR(c.median, oracle::quantile(v, 0.5), 1e-12);
    EXPECT_NEAR(c.q1, oracle::quantile(v, 0.25), 1e-12);
    EXPECT_NEAR(c.q3, oracle::quantile(v, 0.75), 1e-12);
  }
}

TEST(Summary, CellFormatting) {
  // Full-precision inputs; only the display rounds.
  const auto c = summarize_values({3.3, 3.4012, 3.6899, 3.9876, 4.1});
  EXPECT_EQ(format_cell(Feature::kSpeakingRate, c), "3.69 (3.40, 3.99)");
  EXPECT_EQ(format_cell(Feature::kPitchMean, summarize_values({110.0, 120.2, 186.6, 201.9, 230.0})),
            "187 (120, 202)");
  EXPECT_EQ(format_cell(Feature::kF2Mean, {3, 1650.4, 1560.0, 1724.9}), "1.65 (1.56, 1.72)");
  EXPECT_EQ(format_cell(Feature::kPauseRate, {3, 0.2334, 0.2049, 0.2641}), "0.233 (0.205, 0.264)");
  EXPECT_EQ(format_cell(Feature::kSpectralSlope, {3, -17.04, -18.6, -15.6}), "-17.0 (-18.6, -15.6)");
}

TEST(Summary, GroupsLevelsAndOrder) {
  std::vector<FeatureRecord> recs{
      record("P1_condenser_D1_S1.wav", Level::kSuprasegmental, {{Feature::kPitchMean, 100}, {Feature::kDuration, 60}}),
      record("P2_condenser_D1_S1.wav", Level::kSuprasegmental, {{Feature::kPitchMean, 200}}),
      record("P1_condenser_D1_S1.wav", Level::kVowel, {{Feature::kPitchMean, 110}, {Feature::kF1Mean, 650}}),
      record("P3_condenser_Mon_S1.wav", Level::kSuprasegmental, {{Feature::kPitchMean, 150}}),
  };
  const auto t = summarize_features(recs, "day");
  EXPECT_EQ(t.groups, (std::vector<std::string>{"D1", "Mon"}));
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(t.rows[0].feature, Feature::kDuration);
  EXPECT_EQ(t.rows[1].feature, Feature::kPitchMean);
  EXPECT_EQ(t.rows[1].level, Level::kSuprasegmental);
  EXPECT_EQ(t.rows[2].level, Level::kVowel);
  EXPECT_EQ(t.rows[3].feature, Feature::kF1Mean);
  EXPECT_EQ(t.rows[1].cells.at("D1").median, 150.0);
  EXPECT_FALSE(t.rows[2].cells.contains("Mon"));

  auto shuffled = recs;
  std::reverse(shuffled.begin(), shuffled.end());
  EXPECT_EQ(summarize_features(shuffled, "day"), t);
}

TEST(Summary, MissingValuesAreSkippedNotZeroed) {
  auto a = record("a", Level::kSuprasegmental, {{Feature::kHnrMean, 10}});
  auto b = record("b", Level::kSuprasegmental, {});
  b.features.set_error(Feature::kHnrMean, Errc::kNoVoicedFrames);
  const auto t = summarize_features({a, b});
  EXPECT_EQ(t.rows.at(0).cells.at("all").n, 1u);
  EXPECT_EQ(t.rows.at(0).cells.at("all").median, 10.0);
}

TEST(Summary, GroupErrors) {
  const auto r = record("noid.wav", Level::kSuprasegmental, {{Feature::kPitchMean, 1}}, {{"cohort", "Week"}});
  EXPECT_EQ(code_of([&] { summarize_features({r}, "day"); }), Errc::kBadConfig);
  EXPECT_EQ(code_of([&] { summarize_features({r}, "cohort", {"Week", "Day"}); }), Errc::kEmptyGroup);
  EXPECT_EQ(summarize_features({r}, "cohort", {"Week"}).groups, (std::vector<std::string>{"Week"}));
}

TEST(Summary, EmptyTableIsHeaderOnly) {
  const auto t = summarize_features({});
  EXPECT_TRUE(t.rows.empty());
  EXPECT_EQ(table_to_markdown(t), "| Feature | L |\n|---|---|\n");
  EXPECT_EQ(table_to_csv(t), "feature,level,group,n,median,q1,q3\r\n");  // RFC 4180 line ends
}

TEST(Summary, MarkdownLayout) {
  std::vector<FeatureRecord> recs;
  for (int i = 0; i < 5; ++i) {
    recs.push_back(record("w" + std::to_string(i), Level::kSuprasegmental,
                          {{Feature::kSpeakingRate, 3.3 + 0.2 * i}}, {{"cohort", "Week"}}));
    recs.push_back(record("d" + std::to_string(i), Level::kVowel, {{Feature::kF1Mean, 600.0 + 10 * i}},
                          {{"cohort", "Day"}}));
  }
  EXPECT_EQ(table_to_markdown(summarize_features(recs, "cohort")),
            "| Feature | L | Day (n = 5) | Week (n = 5) |\n"
            "|---|---|---|---|\n"
            "| Speaking rate, syllables/s | S | - | 3.70 (3.50, 3.90) |\n"
            "| First formant, Hz | a | 620 (610, 630) | - |\n");
}

TEST(Summary, TableRoundTrips) {
  std::mt19937_64 gen(9);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<FeatureRecord> recs;
  for (int i = 0; i < 40; ++i) {
    std::vector<std::pair<Feature, double>> v;
    for (auto f : kAllFeatures) v.push_back({f, 100.0 * d(gen)});
    recs.push_back(record("r" + std::to_string(i), i % 3 ? Level::kSuprasegmental : Level::kVowel, v,
                          {{"cohort", i % 2 ? "Day, Day 1" : "Week \"A\""}}));
  }
  const auto t = summarize_features(recs, "cohort");
  EXPECT_EQ(table_from_csv(table_to_csv(t)), t);
  EXPECT_EQ(table_from_json(nlohmann::json::parse(emit_table(t, TableFormat::kJson))), t);
  EXPECT_EQ(table_format_from_string("md"), TableFormat::kMarkdown);
  EXPECT_EQ(code_of([] { table_format_from_string("xlsx"); }), Errc::kBadConfig);
}

TEST(Records, CsvAndJsonRoundTrip) {
  std::vector<FeatureRecord> recs;
  auto a = record("P01_condenser_D1_S1_RainbowPassage.wav", Level::kSuprasegmental,
                  {{Feature::kDuration, 121.7}, {Feature::kPitchMean, 0.1 + 0.2}, {Feature::kSpectralSlope, -17.25}},
                  {{"cohort", "Day"}});
  a.features.set_error(Feature::kCppMean, Errc::kSilentSignal);
  a.params = {{"pitch", {{"floor", 75}}}};
  recs.push_back(a);
  auto b = record("odd name, with comma.wav", Level::kVowel, {{Feature::kF1Mean, 648.0}}, {{"cohort", "Week"}});
  b.n_vowels = 12;
  b.n_rejected = 1;
  recs.push_back(b);
  EXPECT_EQ(records_from_csv(records_to_csv(recs)), recs);
  EXPECT_EQ(records_from_json(records_to_json(recs)), recs);
  const auto csv = records_to_csv(recs);
  EXPECT_NE(csv.find("P01,condenser,D1,S1,RainbowPassage"), std::string::npos);
  EXPECT_EQ(summarize_features(records_from_csv(csv), "cohort"), summarize_features(recs, "cohort"));
}

TEST(Records, BadInputs) {
  EXPECT_EQ(code_of([] { records_from_csv("recording,pitch_mean\nx,1\n"); }), Errc::kInvalidArgument);
  EXPECT_EQ(code_of([] { records_from_csv("level,pitch_mean\nS,abc\n"); }), Errc::kInvalidArgument);
  EXPECT_EQ(code_of([] { records_from_json("{}"); }), Errc::kInvalidArgument);
  EXPECT_EQ(code_of([] { records_from_json("[{\"recording\": \"x\", \"level\": \"Q\", \"features\": {}}]"); }),
            Errc::kInvalidArgument);
}
