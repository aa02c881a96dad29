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


// Findings produced by the study-protocol validators.

#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace vocalmark::protocol {

enum class Severity { kError, kWarning };

inline std::string to_string(Severity s) { return s == Severity::kError ? "error" : "warning"; }

struct Finding {
  Severity severity = Severity::kError;
  std::string code;     // e.g. "MinGap", "Missing", "UnknownAspect"
  std::string subject;  // what the finding is about
  std::string message;

  // "Code(subject)".
  std::string label() const { return subject.empty() ? code : code + "(" + subject + ")"; }
};

struct Report {
  std::vector<Finding> findings;

  void error(std::string code, std::string subject, std::string message = {}) {
    findings.push_back({Severity::kError, std::move(code), std::move(subject), std::move(message)});
  }
  void warning(std::string code, std::string subject, std::string message = {}) {
    findings.push_back({Severity::kWarning, std::move(code), std::move(subject), std::move(message)});
  }

  std::size_t error_count() const {
    std::size_t n = 0;
    for (const auto& f : findings) n += f.severity == Severity::kError;
    return n;
  }
  bool passed() const { return error_count() == 0; }

  bool has(const std::string& label) const {
    for (const auto& f : findings)
      if (f.label() == label) return true;
    return false;
  }
};

inline nlohmann::json to_json(const Finding& f) {
  return {{"severity", to_string(f.severity)}, {"code", f.code}, {"subject", f.subject}, {"message", f.message}};
}

inline nlohmann::json to_json(const Report& r) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& f : r.findings) items.push_back(to_json(f));
  return {{"passed", r.passed()}, {"errors", r.error_count()}, {"findings", items}};
}

}  // namespace vocalmark::protocol
