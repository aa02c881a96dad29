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


// Study-design checklist: three sections of aspects, each aspect with short
// item labels. A config answers every aspect with a status and, when
// addressed, an answer per item.
//
//   { "Data Processing": {
//       "Digitization": { "status": "addressed",
//                         "items": { "sampling rate": "16 kHz", ... } },
//       "Preprocessing": { "status": "not-applicable", "reason": "none used" } } }

#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "json.hpp"
#include "vocalmark/protocol/report.hpp"

namespace vocalmark::protocol {

struct ChecklistAspect {
  std::string name;
  std::vector<std::string> items;
};

struct ChecklistSection {
  std::string name;
  std::vector<ChecklistAspect> aspects;
};

inline const std::vector<ChecklistSection>& design_checklist() {
  static const std::vector<ChecklistSection> kChecklist{
      {"Participants",
       {
           {"Input and Feedback",
            {"project descriptions and consent documents", "recording device and set-up",
             "acceptability of speech elicitation prompts", "participant instructions", "choice of speech measures",
             "choice of clinical outcome and analysis"}},
           {"Eligibility criteria",
            {"sociodemographic factors", "vocal tract and hearing disorders", "respiratory conditions",
             "mental health disorders", "neurological disorders", "lifestyle factors"}},
           {"Recruitment",
            {"sociodemographic and socioeconomic biases", "clinical vs general populations", "partnerships",
             "time limitations"}},
       }},
      {"Data Collection",
       {
           {"Metadata", {}},
           {"Clinical assessments", {"clinician vs self-reported", "time required and participant burden"}},
           {"Recording devices",
            {"mobile versus non-mobile devices", "microphone directionality", "ambient noise", "affordability and accessibility",
             "device-specific signal processing", "gain settings"}},
           {"Recording set-up and environment",
            {"device positioning", "ambient noise and room acoustics", "participant comfort", "standing or sitting",
             "office furniture", "positioning of prompts", "remote versus in-lab", "background noise collection"}},
           {"Speech elicitation task",
            {"warm-up and familiarization", "practice effects", "task order", "task difficulty", "task acceptability",
             "collection procedure"}},
           {"Participant instructions",
            {"reproducible positioning", "participant comfort", "eliciting natural speech", "feedback and encouragement"}},
           {"Data Quality Log", {}},
       }},
      {"Data Processing",
       {
           {"Digitization", {"sampling rate", "bit rate", "audio file format"}},
           {"Data Preparation", {"remove audio before and after tasks", "separate tasks into files", "manual checks"}},
           {"Preprocessing", {}},
           {"Feature selection", {"construct relevance", "interpretability"}},
           {"Feature extraction",
            {"transcription tool", "alignment tool", "software and key settings", "level of extraction",
             "outlier handling"}},
       }},
  };
  return kChecklist;
}

struct ChecklistReport {
  Report report;
  // Finding indices grouped by section, in checklist order; findings not tied
  // to a known section go under "Other".
  std::vector<std::pair<std::string, std::vector<std::size_t>>> by_section;
};

inline ChecklistReport lint_study_design(const nlohmann::json& config) {
  ChecklistReport out;
  auto& r = out.report;
  auto group = [&](const std::string& section, std::size_t from) {
    std::vector<std::size_t> idx;
    for (std::size_t i = from; i < r.findings.size(); ++i) idx.push_back(i);
    out.by_section.emplace_back(section, std::move(idx));
  };
  if (!config.is_object()) {
    r.error("NotAnObject", "config");
    group("Other", 0);
    return out;
  }
  for (const auto& section : design_checklist()) {
    const std::size_t from = r.findings.size();
    const nlohmann::json* sj = config.contains(section.name) ? &config.at(section.name) : nullptr;
    if (sj && !sj->is_object()) {
      r.error("BadType", section.name, "section must be an object");
      sj = nullptr;
    }
    for (const auto& aspect : section.aspects) {
      const std::string where = section.name + "/" + aspect.name;
      if (!sj || !sj->contains(aspect.name)) {
        r.error("Missing", where);
        continue;
      }
      const auto& aj = sj->at(aspect.name);
      const std::string status = aj.is_object() ? aj.value("status", "") : "";
      if (status == "missing") {
        r.error("Missing", where, "declared missing");
      } else if (status == "not-applicable") {
        if (!aj.contains("reason") || !aj.at("reason").is_string() || aj.at("reason").get<std::string>().empty())
          r.error("MissingReason", where, "not-applicable needs a reason");
      } else if (status == "addressed") {
        const nlohmann::json* items = aj.contains("items") && aj.at("items").is_object() ? &aj.at("items") : nullptr;
        for (const auto& item : aspect.items) {
          const bool answered = items && items->contains(item) &&
                                ((items->at(item).is_string() && !items->at(item).get<std::string>().empty()) ||
                                 (items->at(item).is_object() && items->at(item).value("status", "") == "not-applicable"));
          if (!answered) r.error("Missing", aspect.name + "/" + item);
        }
        if (items)
          for (const auto& [k, v] : items->items())
            if (std::find(aspect.items.begin(), aspect.items.end(), k) == aspect.items.end())
              r.warning("UnknownItem", aspect.name + "/" + k);
      } else {
        r.error("BadStatus", where, "status must be addressed, not-applicable or missing");
      }
    }
    if (sj)
      for (const auto& [k, v] : sj->items()) {
        const bool known = std::any_of(section.aspects.begin(), section.aspects.end(),
                                       [&](const ChecklistAspect& a) { return a.name == k; });
        if (!known) r.warning("UnknownAspect", section.name + "/" + k);
      }
    group(section.name, from);
  }
  const std::size_t from = r.findings.size();
  for (const auto& [k, v] : config.items()) {
    const auto& sections = design_checklist();
    if (std::none_of(sections.begin(), sections.end(), [&](const ChecklistSection& s) { return s.name == k; }))
      r.warning("UnknownSection", k);
  }
  if (r.findings.size() > from) group("Other", from);
  return out;
}

// A config answering every aspect and item; handy as a template.
inline nlohmann::json complete_checklist_template(const std::string& answer = "documented") {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& section : design_checklist()) {
    auto& sj = j[section.name] = nlohmann::json::object();
    for (const auto& aspect : section.aspects) {
      nlohmann::json items = nlohmann::json::object();
      for (const auto& item : aspect.items) items[item] = answer;
      sj[aspect.name] = {{"status", "addressed"}, {"items", items}};
    }
  }
  return j;
}

inline nlohmann::json to_json(const ChecklistReport& c) {
  auto j = to_json(c.report);
  nlohmann::json sections = nlohmann::json::object();
  for (const auto& [name, idx] : c.by_section) {
    nlohmann::json a = nlohmann::json::array();
    for (auto i : idx) a.push_back(c.report.findings[i].label());
    sections[name] = a;
  }
  j["by_section"] = sections;
  return j;
}

}  // namespace vocalmark::protocol
