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


// Selection of target vowel instances from a phone tier.

#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "vocalmark/error.hpp"
#include "vocalmark/textgrid.hpp"

namespace vocalmark {

struct VowelInterval {
  double start = 0.0;
  double end = 0.0;
  std::string label;
  std::string source_tier;

  double duration() const { return end - start; }
};

struct VowelSelection {
  std::set<std::string> target_labels{"AA", "AA0", "AA1", "AA2"};
  double min_duration = 0.050;
  std::string phone_tier = "phones";
};

// The phone tier is the one named exactly `name`, or failing that one whose
// name ends in " - <name>" (speaker-prefixed aligner output).
inline const Tier* find_phone_tier(const TierSet& ts, const std::string& name) {
  if (const auto* t = ts.find(name)) return t;
  const std::string suffix = " - " + name;
  for (const auto& t : ts.tiers)
    if (t.name.size() > suffix.size() && t.name.ends_with(suffix)) return &t;
  return nullptr;
}

inline std::vector<VowelInterval> find_target_vowels(const TierSet& ts, const VowelSelection& sel = {}) {
  const Tier* tier = find_phone_tier(ts, sel.phone_tier);
  if (!tier) fail(Errc::kMissingPhoneTier, "no tier named '" + sel.phone_tier + "'");
  std::vector<VowelInterval> out;
  for (const auto& iv : tier->intervals) {
    // Tolerance keeps a 0.050 s interval stored as 0.25 .. 0.3 selectable.
    if (sel.target_labels.contains(iv.label) && iv.duration() >= sel.min_duration - kTimeTolerance)
      out.push_back({iv.xmin, iv.xmax, iv.label, tier->name});
  }
  return out;
}

}  // namespace vocalmark
