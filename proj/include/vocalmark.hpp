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


// Umbrella header.

#pragma once

#include "vocalmark/error.hpp"
#include "vocalmark/stats.hpp"
#include "vocalmark/format.hpp"
#include "vocalmark/csv.hpp"
#include "vocalmark/audio.hpp"
#include "vocalmark/dsp.hpp"
#include "vocalmark/synth.hpp"
#include "vocalmark/pitch.hpp"
#include "vocalmark/phonation.hpp"
#include "vocalmark/articulation.hpp"
#include "vocalmark/timing.hpp"
#include "vocalmark/textgrid.hpp"
#include "vocalmark/alignment.hpp"
#include "vocalmark/features.hpp"
#include "vocalmark/analysis.hpp"
#include "vocalmark/records.hpp"
#include "vocalmark/reporting.hpp"
#include "vocalmark/pipeline.hpp"
#include "vocalmark/protocol/report.hpp"
#include "vocalmark/protocol/filename.hpp"
#include "vocalmark/protocol/schedule.hpp"
#include "vocalmark/protocol/questionnaire.hpp"
#include "vocalmark/protocol/checklist.hpp"
