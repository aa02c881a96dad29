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


// vocalmark command-line tool.
//
// Exit codes: 0 success, 1 validation findings, 2 operational error.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vocalmark.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vocalmark;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFindings = 1;
constexpr int kExitError = 2;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(Errc::kIoFailure, "cannot open '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) {
  auto j = json::parse(read_file(p), nullptr, false);
  if (j.is_discarded()) fail(Errc::kBadConfig, "'" + p.string() + "' is not valid JSON");
  return j;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::kIoFailure, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(Errc::kIoFailure, "write to '" + path + "' failed");
}

// Settings that may come from the config file; command-line flags win.
struct Config {
  json params = json::object();
  std::string levels = "S";
  std::string format;  // empty: per-command default
  int threads = 1;
  std::string group;
};

Config load_config(const std::string& path) {
  Config c;
  if (path.empty()) return c;
  const auto j = read_json(path);
  if (!j.is_object()) fail(Errc::kBadConfig, "config must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    try {
      if (k == "params") c.params = v;
      else if (k == "levels") c.levels = v.get<std::string>();
      else if (k == "format") c.format = v.get<std::string>();
      else if (k == "threads") c.threads = v.get<int>();
      else if (k == "group") c.group = v.get<std::string>();
      else fail(Errc::kBadConfig, "unknown config key '" + k + "'");
    } catch (const json::exception&) {
      fail(Errc::kBadConfig, "config key '" + k + "' has the wrong type");
    }
  }
  return c;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

// Sort key for deterministic output: parsed recording id when available.
bool record_less(const FeatureRecord& a, const FeatureRecord& b) {
  const auto ia = a.id(), ib = b.id();
  if (ia && ib && *ia != *ib) return *ia < *ib;
  if (ia.has_value() != ib.has_value()) return ia.has_value();
  if (a.recording != b.recording) return a.recording < b.recording;
  return a.level < b.level;
}

std::vector<FeatureRecord> load_records(const std::string& path) {
  const auto text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n\xEF\xBB\xBF");
  if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) return records_from_json(text);
  return records_from_csv(text);
}

// ------------------------------------------------------------- commands

struct ExtractOptions {
  std::vector<std::string> inputs;
  std::string textgrid;
  std::string textgrid_dir;
  std::string levels;
  std::string format;
  std::string output;
  int threads = 0;
  std::vector<std::string> overrides;
  std::vector<std::string> tags;
};

void print_error(bool as_json, const std::string& code, const std::string& message,
                 const std::string& subject = {}) {
  if (as_json) {
    json j{{"error", code}, {"message", message}};
    if (!subject.empty()) j["subject"] = subject;
    std::cerr << j.dump() << "\n";
  } else {
    std::cerr << "vocalmark: " << (subject.empty() ? "" : subject + ": ") << code << ": " << message << "\n";
  }
}

int run_extract(const ExtractOptions& o, const Config& cfg, bool as_json) {
  const auto levels = levels_from_string(o.levels.empty() ? cfg.levels : o.levels);
  const std::string format = !o.format.empty() ? o.format : (!cfg.format.empty() ? cfg.format : "csv");
  if (format != "csv" && format != "json") fail(Errc::kBadConfig, "extract format must be csv or json");
  const int threads = o.threads > 0 ? o.threads : cfg.threads;
  if (threads < 1) fail(Errc::kBadConfig, "--threads must be at least 1");
  if (!o.textgrid.empty() && o.inputs.size() != 1)
    fail(Errc::kBadConfig, "--textgrid takes one input; use --textgrid-dir for several");
  json overrides = cfg.params;
  for (const auto& s : o.overrides) apply_param_override(overrides, s);
  const auto params = params_from_json(overrides);
  std::map<std::string, std::string> extra;
  for (const auto& t : o.tags) {
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) fail(Errc::kBadConfig, "--tag must be key=value");
    extra[t.substr(0, eq)] = t.substr(eq + 1);
  }

  std::vector<ExtractionRequest> requests;
  for (const auto& in : o.inputs) {
    ExtractionRequest r{in, std::nullopt, levels, params};
    if (!o.textgrid.empty()) r.textgrid = o.textgrid;
    else if (!o.textgrid_dir.empty()) {
      const auto p = fs::path(o.textgrid_dir) / (fs::path(in).stem().string() + ".TextGrid");
      if (fs::exists(p)) r.textgrid = p;
    }
    requests.push_back(std::move(r));
  }

  std::vector<std::vector<FeatureRecord>> results(requests.size());
  std::vector<std::optional<Error>> failures(requests.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < requests.size();) {
      try {
        results[i] = extract_recording(requests[i]);
      } catch (const Error& e) {
        failures[i] = e;
      } catch (const std::exception& e) {
        failures[i] = Error(Errc::kInvalidArgument, e.what());
      }
    }
  };
  std::vector<std::thread> pool;
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(threads), requests.size());
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<FeatureRecord> records;
  for (auto& r : results)
    for (auto& rec : r) {
      rec.extra.insert(extra.begin(), extra.end());
      records.push_back(std::move(rec));
    }
  std::stable_sort(records.begin(), records.end(), record_less);
  write_output(format == "csv" ? records_to_csv(records) : records_to_json(records), o.output);

  bool failed = false;
  for (std::size_t i = 0; i < failures.size(); ++i)
    if (failures[i]) {
      print_error(as_json, std::string(to_string(failures[i]->code())), failures[i]->message(), o.inputs[i]);
      failed = true;
    }
  return failed ? kExitError : kExitOk;
}

int run_canonicalize(const std::string& in, const std::string& out) {
  write_wav(to_canonical(read_wav(in)), out, 16);
  return kExitOk;
}

int run_vowels(const std::string& path, const std::string& labels, double min_duration, const std::string& tier,
               const std::string& format) {
  VowelSelection sel;
  if (!labels.empty()) {
    const auto l = split(labels, ',');
    sel.target_labels = {l.begin(), l.end()};
  }
  if (min_duration >= 0.0) sel.min_duration = min_duration;
  if (!tier.empty()) sel.phone_tier = tier;
  const auto vowels = find_target_vowels(read_textgrid(path), sel);
  if (format == "json") {
    json a = json::array();
    for (const auto& v : vowels)
      a.push_back({{"start", v.start}, {"end", v.end}, {"label", v.label}, {"tier", v.source_tier}});
    std::cout << a.dump(2) << "\n";
  } else if (format == "csv") {
    std::vector<csv::Row> rows{{"start", "end", "duration", "label", "tier"}};
    for (const auto& v : vowels)
      rows.push_back({format_shortest(v.start), format_shortest(v.end), format_shortest(v.end - v.start), v.label,
                      v.source_tier});
    std::cout << csv::write(rows);
  } else {
    fail(Errc::kBadConfig, "vowels format must be csv or json");
  }
  return kExitOk;
}

int run_summarize(const std::string& path, const std::string& group, const std::string& require,
                  const std::string& format, const std::string& output) {
  const auto table = summarize_features(load_records(path), group, split(require, ','));
  write_output(emit_table(table, table_format_from_string(format)), output);
  return kExitOk;
}

int emit_report(const json& j, bool passed) {
  std::cout << j.dump(2) << "\n";
  return passed ? kExitOk : kExitFindings;
}

std::vector<std::string> manifest_names(const std::string& path) {
  std::vector<std::string> names;
  if (fs::is_directory(path)) {
    for (const auto& e : fs::directory_iterator(path))
      if (e.is_regular_file()) names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
  }
  const auto text = read_file(path);
  const auto j = json::parse(text, nullptr, false);
  if (!j.is_discarded() && j.is_array()) return j.get<std::vector<std::string>>();
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) names.push_back(fs::path(line).filename().string());
  }
  return names;
}

struct SynthOptions {
  std::string spec;
  std::string output;
  std::string truth;
  std::string kind = "pulse_train";
  double f0 = 200.0;
  double duration = 1.0;
  double amplitude = 0.5;
  std::vector<std::string> formants;
  std::optional<double> snr;
  std::uint64_t seed = 0;
  int rate = 16000;
};

int run_synth(const SynthOptions& o) {
  synth::PatternRequest req;
  if (!o.spec.empty()) {
    req = synth::pattern_request_from_json(read_json(o.spec));
  } else {
    synth::SynthSpec s;
    s.kind = synth::kind_from_string(o.kind);
    s.f0 = o.f0;
    s.duration = o.duration;
    s.amplitude = o.amplitude;
    s.seed = o.seed;
    for (const auto& f : o.formants) {
      const auto parts = split(f, ':');
      if (parts.size() != 2) fail(Errc::kBadConfig, "--formant takes FREQ:BANDWIDTH");
      s.formants.push_back({parse_double(parts[0]), parse_double(parts[1])});
    }
    if (!s.formants.empty() && s.kind == synth::Kind::kPulseTrain) s.kind = synth::Kind::kFormantVoice;
    req.rate = o.rate;
    req.segments.push_back(s);
    req.snr_db = o.snr;
    req.noise_seed = o.seed;
  }
  const auto pattern = synth::render_request(req);
  write_wav(pattern.audio, o.output, 16);
  const auto truth = synth::ground_truth(req, pattern).dump(2) + "\n";
  if (!o.truth.empty()) write_output(truth, o.truth);
  else write_output(truth, fs::path(o.output).replace_extension(".json").string());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acoustic feature extraction and study-protocol validation for repeated speech recordings"};
  app.require_subcommand(1);
  bool as_json = false;
  std::string config_path;
  if (const char* env = std::getenv("VOCALMARK_CONFIG")) config_path = env;
  app.add_flag("--json", as_json, "Write errors to stderr as JSON");
  app.add_option("--config", config_path, "JSON config file (default: $VOCALMARK_CONFIG)");

  std::string in_path, out_path;
  auto* canon = app.add_subcommand("canonicalize", "Convert a WAV file to 16 kHz mono 16-bit");
  canon->add_option("input", in_path, "Input WAV")->required();
  canon->add_option("output", out_path, "Output WAV")->required();

  ExtractOptions ex;
  auto* extract = app.add_subcommand("extract", "Extract features from recordings");
  extract->add_option("inputs", ex.inputs, "Input WAV files")->required();
  extract->add_option("--textgrid", ex.textgrid, "Alignment for a single input");
  extract->add_option("--textgrid-dir", ex.textgrid_dir, "Directory of <stem>.TextGrid alignments");
  extract->add_option("--level", ex.levels, "Levels to extract: S, a or S,a");
  extract->add_option("--format", ex.format, "csv or json");
  extract->add_option("-o,--output", ex.output, "Output file (default stdout)");
  extract->add_option("--threads", ex.threads, "Recordings analysed in parallel");
  extract->add_option("--set", ex.overrides, "Parameter override key=value, e.g. pitch.pass1_floor=60");
  extract->add_option("--tag", ex.tags, "Extra column key=value added to every record");

  std::string tg_path, labels, tier, vowel_format = "csv";
  double min_duration = -1.0;
  auto* vowels = app.add_subcommand("vowels", "List target vowel intervals in a TextGrid");
  vowels->add_option("textgrid", tg_path, "TextGrid file")->required();
  vowels->add_option("--labels", labels, "Comma-separated target labels");
  vowels->add_option("--min-duration", min_duration, "Minimum duration in seconds");
  vowels->add_option("--tier", tier, "Phone tier name");
  vowels->add_option("--format", vowel_format, "csv or json");

  std::string features_path, group, require, table_format, table_out;
  auto* summarize = app.add_subcommand("summarize", "Median and quartile table per feature and group");
  summarize->add_option("features", features_path, "Feature records (CSV or JSON)")->required();
  summarize->add_option("--group", group, "Column to group by");
  summarize->add_option("--require", require, "Comma-separated groups that must be present");
  summarize->add_option("--format", table_format, "markdown, csv or json");
  summarize->add_option("-o,--output", table_out, "Output file (default stdout)");

  auto* validate = app.add_subcommand("validate", "Check study-protocol files");
  validate->require_subcommand(1);
  std::string v_path, expect_path;
  bool check_vocab = false;
  auto* v_manifest = validate->add_subcommand("manifest", "File names against the expected grid");
  v_manifest->add_option("listing", v_path, "Directory, JSON array or one name per line")->required();
  v_manifest->add_option("--expect", expect_path, "Expected grid (JSON)")->required();
  v_manifest->add_flag("--vocabulary", check_vocab, "Also check devices, days, sessions and tasks");
  auto* v_schedule = validate->add_subcommand("schedule", "Session times against the schedule rules");
  v_schedule->add_option("file", v_path, "Schedule JSON")->required();
  auto* v_quest = validate->add_subcommand("questionnaire", "Pre-session questionnaire answers");
  v_quest->add_option("file", v_path, "Questionnaire JSON")->required();
  auto* v_check = validate->add_subcommand("checklist", "Study design against the reporting checklist");
  v_check->add_option("file", v_path, "Study design JSON")->required();
  auto* v_qc = validate->add_subcommand("qclog", "Quality-control log entry");
  v_qc->add_option("file", v_path, "QC log JSON")->required();

  SynthOptions so;
  double snr = 0.0;
  auto* syn = app.add_subcommand("synth", "Write a test signal and its ground truth");
  syn->add_option("output", so.output, "Output WAV")->required();
  syn->add_option("--spec", so.spec, "Pattern request (JSON); overrides the single-segment flags");
  syn->add_option("--truth", so.truth, "Ground truth JSON (default: output with .json)");
  syn->add_option("--kind", so.kind, "pulse_train, formant_voice, tone, noise or silence");
  syn->add_option("--f0", so.f0, "Fundamental frequency, Hz");
  syn->add_option("--duration", so.duration, "Seconds");
  syn->add_option("--amplitude", so.amplitude, "Peak amplitude (RMS for noise)");
  syn->add_option("--formant", so.formants, "Resonator FREQ:BANDWIDTH, repeatable");
  auto* snr_opt = syn->add_option("--snr", snr, "Add white noise at this SNR, dB");
  syn->add_option("--seed", so.seed, "Noise seed");
  syn->add_option("--rate", so.rate, "Sample rate, Hz");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (as_json) print_error(true, "UsageError", e.what());
    else app.exit(e);
    return kExitError;
  }

  try {
    const auto cfg = load_config(config_path);
    if (*canon) return run_canonicalize(in_path, out_path);
    if (*extract) return run_extract(ex, cfg, as_json);
    if (*vowels) return run_vowels(tg_path, labels, min_duration, tier, vowel_format);
    if (*summarize) {
      const auto fmt = !table_format.empty() ? table_format : (!cfg.format.empty() ? cfg.format : "markdown");
      return run_summarize(features_path, group.empty() ? cfg.group : group, require, fmt, table_out);
    }
    if (*v_manifest) {
      const protocol::Vocabulary vocab;
      const auto r = protocol::validate_manifest_names(
          manifest_names(v_path), protocol::expectation_from_json(read_json(expect_path)), check_vocab ? &vocab : nullptr);
      return emit_report(protocol::to_json(r), r.passed());
    }
    if (*v_schedule) {
      const auto r = protocol::validate_schedule(protocol::schedule_from_json(read_json(v_path)));
      return emit_report(protocol::to_json(r), r.passed());
    }
    if (*v_quest) {
      const auto r = protocol::validate_questionnaire(read_json(v_path));
      return emit_report(protocol::to_json(r), r.passed());
    }
    if (*v_check) {
      const auto r = protocol::lint_study_design(read_json(v_path));
      return emit_report(protocol::to_json(r), r.report.passed());
    }
    if (*v_qc) {
      const auto r = protocol::validate_qc_log(read_json(v_path));
      return emit_report(protocol::to_json(r), r.passed());
    }
    if (*syn) {
      if (snr_opt->count() > 0) so.snr = snr;
      return run_synth(so);
    }
  } catch (const Error& e) {
    print_error(as_json, std::string(to_string(e.code())), e.message());
    return kExitError;
  } catch (const std::exception& e) {
    print_error(as_json, "InternalError", e.what());
    return kExitError;
  }
  return kExitError;
}
