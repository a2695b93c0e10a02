// Copyright (c) 2026 The tsot Authors. All Rights Reserved.
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

#include "tsot/cli.h"

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tsot/demux.h"
#include "tsot/io.h"
#include "tsot/metrics.h"
#include "tsot/parallel.h"
#include "tsot/serializer.h"
#include "tsot/simulator.h"

namespace tsot {

namespace {

using Json = nlohmann::ordered_json;

struct Context {
  std::size_t diagnostics = 0;

  void Emit(const Diagnostic& d) {
    std::cerr << DiagnosticToJson(d) << "\n";
    ++diagnostics;
  }
  void Emit(const std::vector<Diagnostic>& ds) {
    for (const auto& d : ds) Emit(d);
  }
  int Code() const { return diagnostics > 0 ? kExitDiagnostics : kExitOk; }
};

void CheckFormat(const std::string& format) {
  if (format != "json" && format != "table")
    throw Error("--format must be json or table");
}

// ---- build ----

struct BuildArgs {
  std::string method;
  std::optional<std::string> gamma;
  std::optional<Millis> group_ms;
  std::string tags, input, output;
  std::optional<std::string> text_output, traces_output;
  std::string replay = "auto";
  Millis overhead_ms = 0;
  std::size_t jobs = 1;
};

int RunBuild(const BuildArgs& a) {
  Method method;
  if (a.method == "inter-time") {
    if (a.gamma) throw Error("--gamma only applies to --method inter-gamma");
    method = a.group_ms ? Method::Grouped(*GroupingConfig::Step(*a.group_ms).step_ms)
                        : Method::InterTime();
  } else {
    if (a.group_ms) throw Error("--group-ms only applies to --method inter-time");
    if (!a.gamma) throw Error("--method inter-gamma requires --gamma");
    method = Method::InterGamma(Gamma::Parse(*a.gamma));
  }
  ReplayPolicy policy;
  policy.overhead_ms = a.overhead_ms;
  if (a.replay == "group" ||
      (a.replay == "auto" && method.kind == Method::Kind::kGrouped))
    policy.mode = ReplayPolicy::Mode::kGroupBoundary;
  if (policy.mode == ReplayPolicy::Mode::kGroupBoundary &&
      method.kind != Method::Kind::kGrouped)
    throw Error("--replay group needs --group-ms");
  if (a.overhead_ms < 0) throw Error("--overhead-ms must be >= 0");

  TagSet tags = ReadTagSet(a.tags);
  auto corpus = ReadCorpus(a.input, &tags);
  Context ctx;
  ctx.Emit(corpus.diagnostics);

  const auto& utts = corpus.items;
  std::vector<std::optional<SerializedRecord>> records(utts.size());
  std::vector<std::vector<EmissionTrace>> traces(utts.size());
  std::vector<std::optional<Diagnostic>> failures(utts.size());
  ParallelFor(utts.size(), a.jobs, [&](std::size_t i) {
    try {
      SerializedSequence s = Serialize(utts[i], tags, method);
      if (a.traces_output)
        traces[i] = Replay(s, tags, policy, utts[i].duration_ms);
      records[i] = ToRecord(s);
    } catch (const Error& e) {
      failures[i] = Diagnostic{utts[i].utt_id, "", std::nullopt, std::nullopt,
                               e.what()};
    }
  });

  std::vector<SerializedRecord> out;
  std::string trace_text;
  for (std::size_t i = 0; i < utts.size(); ++i) {
    if (failures[i]) {
      ctx.Emit(*failures[i]);
      continue;
    }
    out.push_back(std::move(*records[i]));
    for (const auto& t : traces[i]) trace_text += TraceToJson(t) + "\n";
  }
  WriteSerialized(out, a.output);
  if (a.text_output) WriteFile(*a.text_output, SerializedToText(out));
  if (a.traces_output) WriteFile(*a.traces_output, trace_text);
  return ctx.Code();
}

// ---- demux ----

struct DemuxArgs {
  std::string tags, input, output;
  bool text = false;
  std::size_t jobs = 1;
};

int RunDemux(const DemuxArgs& a) {
  TagSet tags = ReadTagSet(a.tags);
  Context ctx;
  std::vector<DemuxResult> results;
  if (a.text) {
    std::string text = ReadFile(a.input);
    if (!IsValidUtf8(text)) throw Error(a.input + ": input is not UTF-8");
    std::vector<std::pair<std::string, std::string>> lines;
    std::size_t pos = 0, line_no = 0;
    while (pos < text.size()) {
      std::size_t nl = text.find('\n', pos);
      std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
      pos = nl == std::string::npos ? text.size() : nl + 1;
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::size_t tab = line.find('\t');
      if (tab == std::string::npos) {
        lines.emplace_back("line-" + std::to_string(line_no), line);
      } else {
        lines.emplace_back(line.substr(0, tab), line.substr(tab + 1));
      }
    }
    results.resize(lines.size());
    ParallelFor(lines.size(), a.jobs, [&](std::size_t i) {
      results[i] = DemuxFull(std::string_view(lines[i].second), tags, lines[i].first);
    });
  } else {
    auto records = ReadSerialized(a.input);
    ctx.Emit(records.diagnostics);
    results.resize(records.items.size());
    ParallelFor(records.items.size(), a.jobs, [&](std::size_t i) {
      const auto& r = records.items[i];
      results[i] = DemuxFull(RecordTokens(r), tags, r.utt_id);
    });
  }
  std::string out;
  for (const auto& r : results) {
    ctx.Emit(r.diagnostics);
    out += DemuxResultToJson(r) + "\n";
  }
  WriteFile(a.output, out);
  return ctx.Code();
}

// ---- stats ----

struct StatsArgs {
  std::string base, variant;
  std::optional<std::string> tags;
  std::string format = "json";
  std::string output = "-";
};

std::vector<SwitchCount> CountRecordTags(
    const std::vector<SerializedRecord>& records, const TagSet* tags) {
  std::vector<SwitchCount> out;
  for (const auto& r : records) {
    std::size_t n = 0;
    for (const auto& t : r.tokens)
      if ((tags && tags->IsTagSurface(t)) || LooksLikeTag(t)) ++n;
    out.push_back({r.utt_id, n});
  }
  return out;
}

int RunStats(const StatsArgs& a) {
  CheckFormat(a.format);
  std::optional<TagSet> tags;
  if (a.tags) tags = ReadTagSet(*a.tags);
  Context ctx;
  auto base = ReadSerialized(a.base);
  auto variant = ReadSerialized(a.variant);
  ctx.Emit(base.diagnostics);
  ctx.Emit(variant.diagnostics);
  auto b = CountRecordTags(base.items, tags ? &*tags : nullptr);
  auto v = CountRecordTags(variant.items, tags ? &*tags : nullptr);
  double reduction = SwitchReduction(std::span<const SwitchCount>(b),
                                     std::span<const SwitchCount>(v));
  std::size_t bt = 0, vt = 0;
  for (const auto& c : b) bt += c.tags;
  for (const auto& c : v) vt += c.tags;
  std::string text;
  if (a.format == "json") {
    Json j;
    j["utterances"] = b.size();
    j["base_tags"] = bt;
    j["variant_tags"] = vt;
    j["reduction"] = reduction;
    text = j.dump() + "\n";
  } else {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "utterances  base_tags  variant_tags  reduction\n"
                  "%10zu  %9zu  %12zu  %9.4f\n",
                  b.size(), bt, vt, reduction);
    text = buf;
  }
  WriteFile(a.output, text);
  return ctx.Code();
}

// ---- eval / laal ----

struct EvalArgs {
  std::string refs, hyps;
  std::optional<std::string> tags, traces;
  bool normalize = false, smooth = false;
  std::string format = "json";
  std::string output = "-";
};

int RunEval(const EvalArgs& a) {
  CheckFormat(a.format);
  std::optional<TagSet> tags;
  if (a.tags) tags = ReadTagSet(*a.tags);
  Context ctx;
  auto refs = ReadCorpus(a.refs, tags ? &*tags : nullptr);
  auto hyps = ReadDemuxed(a.hyps);
  ctx.Emit(refs.diagnostics);
  ctx.Emit(hyps.diagnostics);
  std::optional<std::vector<EmissionTrace>> traces;
  if (a.traces) {
    auto t = ReadTraces(*a.traces);
    ctx.Emit(t.diagnostics);
    traces = std::move(t.items);
  }
  EvalOptions options;
  options.normalize = a.normalize;
  options.smooth_bleu = a.smooth;
  MetricReport report = EvaluateCorpus(refs.items, hyps.items,
                                       traces ? &*traces : nullptr, options);
  WriteFile(a.output, a.format == "json" ? MetricReportToJson(report)
                                         : MetricReportToTable(report));
  return ctx.Code();
}

struct LaalArgs {
  std::string traces;
  std::string format = "json";
  std::string output = "-";
};

int RunLaal(const LaalArgs& a) {
  CheckFormat(a.format);
  Context ctx;
  auto traces = ReadTraces(a.traces);
  ctx.Emit(traces.diagnostics);
  auto rows = SummarizeLatency(traces.items);
  WriteFile(a.output,
            a.format == "json" ? LatencyToJson(rows) : LatencyToTable(rows));
  return ctx.Code();
}

// ---- synth / study ----

struct SynthArgs {
  std::string config, output;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> tags_output;
};

int RunSynth(const SynthArgs& a) {
  if (!a.seed) throw Error("synth requires --seed");
  SynthConfig config = ParseSynthConfig(ReadFile(a.config));
  config.seed = *a.seed;
  WriteCorpus(SynthCorpus(config), a.output);
  if (a.tags_output) WriteFile(*a.tags_output, TagSetToJson(config.Tags()));
  return kExitOk;
}

struct StudyArgs {
  std::string config, output;
  bool table = false;
  std::size_t jobs = 1;
};

int RunStudy(const StudyArgs& a) {
  namespace fs = std::filesystem;
  const fs::path base_dir = fs::path(a.config).parent_path();
  auto resolve = [&](const std::string& p) {
    fs::path path(p);
    return (path.is_absolute() ? path : base_dir / path).string();
  };

  Json j;
  try {
    j = Json::parse(ReadFile(a.config));
  } catch (const Json::exception& e) {
    throw Error(a.config + ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) throw Error(a.config + ": study config must be an object");

  Context ctx;
  std::vector<Utterance> corpus;
  std::optional<TagSet> tags;
  if (j.contains("synth")) {
    SynthConfig sc = ParseSynthConfig(j["synth"].dump());
    if (!j["synth"].contains("seed"))
      throw Error(a.config + ": synth section requires an explicit seed");
    corpus = SynthCorpus(sc);
    tags = sc.Tags();
  }
  if (j.contains("tags")) tags = ReadTagSet(resolve(j["tags"].get<std::string>()));
  if (j.contains("corpus")) {
    if (!tags) throw Error(a.config + ": \"corpus\" needs \"tags\"");
    auto read = ReadCorpus(resolve(j["corpus"].get<std::string>()), &*tags);
    ctx.Emit(read.diagnostics);
    corpus = std::move(read.items);
  }
  if (!tags) throw Error(a.config + ": needs \"synth\" or \"corpus\"+\"tags\"");

  std::vector<Method> methods;
  if (!j.contains("methods") || !j["methods"].is_array() || j["methods"].empty())
    throw Error(a.config + ": \"methods\" must be a non-empty array");
  for (const auto& m : j["methods"]) methods.push_back(ParseMethodSpec(m.dump()));

  ReplayPolicy policy;
  policy.mode = ReplayPolicy::Mode::kGroupBoundary;
  if (j.contains("policy")) {
    const Json& p = j["policy"];
    std::string mode = p.value("mode", std::string("group_boundary"));
    if (mode == "origin_time") {
      policy.mode = ReplayPolicy::Mode::kOriginTime;
    } else if (mode != "group_boundary") {
      throw Error(a.config + ": policy.mode must be origin_time or group_boundary");
    }
    policy.overhead_ms = p.value("overhead_ms", Millis{0});
    if (policy.overhead_ms < 0) throw Error(a.config + ": overhead_ms must be >= 0");
  }

  StudyReport report = LatencyStudy(corpus, *tags, methods, policy, a.jobs);
  WriteFile(a.output, StudyToJson(report));
  if (a.table) std::cout << StudyToTable(report);
  return ctx.Code();
}

}  // namespace

int RunCli(int argc, const char* const* argv) {
  CLI::App app{"Joint serialized-output toolkit for streaming transcription "
               "and translation streams"};
  app.name("tsot");
  app.require_subcommand(1);

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Serialize a timed corpus");
  b->add_option("--method", build.method, "inter-time or inter-gamma")
      ->required()
      ->check(CLI::IsMember({"inter-time", "inter-gamma"}));
  b->add_option("--gamma", build.gamma, "Ratio in [0, 1], e.g. 0.5 or 1/3");
  b->add_option("--group-ms", build.group_ms, "Time step for grouping (ms)");
  b->add_option("--tags", build.tags, "Tag set JSON")->required();
  b->add_option("--input", build.input, "Corpus JSONL")->required();
  b->add_option("--output", build.output, "Serialized JSONL")->required();
  b->add_option("--text", build.text_output, "Also write plain text");
  b->add_option("--traces", build.traces_output, "Also write replay traces");
  b->add_option("--replay", build.replay, "auto, origin or group")
      ->check(CLI::IsMember({"auto", "origin", "group"}));
  b->add_option("--overhead-ms", build.overhead_ms, "Replay cost per token");
  b->add_option("--jobs", build.jobs, "Worker threads")->check(CLI::PositiveNumber);

  DemuxArgs demux;
  auto* d = app.add_subcommand("demux", "Split serialized streams by channel");
  d->add_option("--tags", demux.tags, "Tag set JSON")->required();
  d->add_option("--input", demux.input, "Serialized JSONL (or text)")->required();
  d->add_option("--output", demux.output, "Channels JSONL")->required();
  d->add_flag("--text", demux.text, "Input is plain text, utt_id<TAB>tokens");
  d->add_option("--jobs", demux.jobs, "Worker threads")->check(CLI::PositiveNumber);

  StatsArgs stats;
  auto* s = app.add_subcommand("stats", "Tag counts and switch reduction");
  s->add_option("--base", stats.base, "Baseline serialized JSONL")->required();
  s->add_option("--variant", stats.variant, "Variant serialized JSONL")->required();
  s->add_option("--tags", stats.tags, "Tag set JSON");
  s->add_option("--format", stats.format, "json or table");
  s->add_option("--output", stats.output, "Report path");

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "WER / BLEU (/ LAAL) report");
  e->add_option("--refs", eval.refs, "Reference corpus JSONL")->required();
  e->add_option("--hyps", eval.hyps, "Demuxed channels JSONL")->required();
  e->add_option("--tags", eval.tags, "Tag set JSON");
  e->add_option("--traces", eval.traces, "Emission traces JSONL");
  e->add_flag("--normalize", eval.normalize, "Lowercase, strip punctuation (WER)");
  e->add_flag("--smooth", eval.smooth, "Add-one BLEU smoothing");
  e->add_option("--format", eval.format, "json or table");
  e->add_option("--output", eval.output, "Report path");

  LaalArgs laal;
  auto* l = app.add_subcommand("laal", "Latency report from emission traces");
  l->add_option("--traces", laal.traces, "Emission traces JSONL")->required();
  l->add_option("--format", laal.format, "json or table");
  l->add_option("--output", laal.output, "Report path");

  SynthArgs synth;
  auto* y = app.add_subcommand("synth", "Generate a synthetic timed corpus");
  y->add_option("--config", synth.config, "Synth config JSON")->required();
  y->add_option("--output", synth.output, "Corpus JSONL")->required();
  y->add_option("--seed", synth.seed, "Random seed")->required();
  y->add_option("--tags-output", synth.tags_output, "Write the tag set JSON");

  StudyArgs study;
  auto* t = app.add_subcommand("study", "Latency / switch comparison of methods");
  t->add_option("--config", study.config, "Study config JSON")->required();
  t->add_option("--output", study.output, "Report JSON")->required();
  t->add_flag("--table", study.table, "Also print a table to stdout");
  t->add_option("--jobs", study.jobs, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return kExitFatal;
  }

  try {
    if (b->parsed()) return RunBuild(build);
    if (d->parsed()) return RunDemux(demux);
    if (s->parsed()) return RunStats(stats);
    if (e->parsed()) return RunEval(eval);
    if (l->parsed()) return RunLaal(laal);
    if (y->parsed()) return RunSynth(synth);
    if (t->parsed()) return RunStudy(study);
  } catch (const std::exception& ex) {
    Json j;
    j["level"] = "error";
    j["message"] = ex.what();
    std::cerr << j.dump() << "\n";
    return kExitFatal;
  }
  return kExitFatal;
}

}  // namespace tsot
