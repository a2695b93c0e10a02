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


#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "test_util.h"
#include "tsot/cli.h"
#include "tsot/io.h"
#include "tsot/serializer.h"
#include "tsot/simulator.h"

namespace tsot {
namespace {

namespace fs = std::filesystem;
using testing::ExampleTags;
using testing::ExampleUtterance;

std::string Dir() {
  static const std::string dir = [] {
    fs::path d = fs::path(TSOT_TEST_TMPDIR) / "cli";
    fs::remove_all(d);
    fs::create_directories(d);
    return d.string();
  }();
  return dir;
}

std::string P(const std::string& name) { return Dir() + "/" + name; }

// Runs the real executable; stderr goes to err.log.
int Run(const std::string& args) {
  std::string cmd = std::string("\"") + TSOT_BINARY + "\" " + args + " 2> \"" +
                    P("err.log") + "\" > \"" + P("out.log") + "\"";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Stderr() { return ReadFile(P("err.log")); }
std::string Stdout() { return ReadFile(P("out.log")); }

void WriteExampleInputs() {
  WriteFile(P("tags.json"), TagSetToJson(ExampleTags()));
  WriteCorpus({ExampleUtterance()}, P("ex.jsonl"));
}

std::string Quote(const std::string& s) { return "\"" + s + "\""; }

TEST_SUITE("cli") {

TEST_CASE("example pipeline: build, demux, eval") {
  WriteExampleInputs();
  REQUIRE(Run("build --method inter-time --tags " + Quote(P("tags.json")) +
              " --input " + Quote(P("ex.jsonl")) + " --output " +
              Quote(P("ser.jsonl")) + " --text " + Quote(P("ser.txt"))) == 0);
  TagSet tags = ExampleTags();
  SerializedRecord rec = ToRecord(InterTime(ExampleUtterance(), tags));
  CHECK(ReadFile(P("ser.jsonl")) == SerializedToJsonl({rec}));
  CHECK(ReadFile(P("ser.txt")) == std::string("ex1\t") + testing::kExampleInterTime + "\n");

  REQUIRE(Run("demux --tags " + Quote(P("tags.json")) + " --input " +
              Quote(P("ser.jsonl")) + " --output " + Quote(P("ch.jsonl"))) == 0);
  DemuxResult d = DemuxFull(RecordTokens(rec), tags, "ex1");
  CHECK(ReadFile(P("ch.jsonl")) == DemuxResultToJson(d) + "\n");

  REQUIRE(Run("eval --refs " + Quote(P("ex.jsonl")) + " --hyps " +
              Quote(P("ch.jsonl")) + " --output " + Quote(P("report.json"))) == 0);
  std::vector<Utterance> refs{ExampleUtterance()};
  std::vector<DemuxResult> hyps{d};
  CHECK(ReadFile(P("report.json")) == MetricReportToJson(EvaluateCorpus(refs, hyps)));
  auto j = nlohmann::json::parse(ReadFile(P("report.json")));
  bool saw_asr = false, saw_st = false;
  for (const auto& ch : j["channels"]) {
    if (ch["tag"] == "#ASR#") {
      CHECK(ch["wer"].get<double>() == 0.0);
      saw_asr = true;
    } else {
      CHECK(ch["bleu"].get<double>() == doctest::Approx(100.0));
      saw_st = true;
    }
  }
  CHECK(saw_asr);
  CHECK(saw_st);

  // plain-text path gives the same channels
  REQUIRE(Run("demux --text --tags " + Quote(P("tags.json")) + " --input " +
              Quote(P("ser.txt")) + " --output " + Quote(P("ch_text.jsonl"))) == 0);
  CHECK(ReadFile(P("ch_text.jsonl")) == ReadFile(P("ch.jsonl")));
}

TEST_CASE("grouped build and stats give a quarter fewer tags") {
  WriteExampleInputs();
  std::string common = " --tags " + Quote(P("tags.json")) + " --input " + Quote(P("ex.jsonl"));
  REQUIRE(Run("build --method inter-time" + common + " --output " + Quote(P("base.jsonl"))) == 0);
  REQUIRE(Run("build --method inter-time --group-ms 500" + common + " --output " +
              Quote(P("g500.jsonl")) + " --traces " + Quote(P("traces.jsonl"))) == 0);
  REQUIRE(Run("stats --base " + Quote(P("base.jsonl")) + " --variant " +
              Quote(P("g500.jsonl"))) == 0);
  auto j = nlohmann::json::parse(Stdout());
  CHECK(j["base_tags"] == 8);
  CHECK(j["variant_tags"] == 6);
  CHECK(j["reduction"].get<double>() == 0.25);

  TagSet tags = ExampleTags();
  auto traces = Replay(InterTime(ExampleUtterance(), tags, GroupingConfig::Step(500)), tags,
                       {ReplayPolicy::Mode::kGroupBoundary, 0}, 1000);
  std::string want;
  for (const auto& t : traces) want += TraceToJson(t) + "\n";
  CHECK(ReadFile(P("traces.jsonl")) == want);

  REQUIRE(Run("laal --traces " + Quote(P("traces.jsonl")) + " --output " +
              Quote(P("laal.json"))) == 0);
  CHECK(ReadFile(P("laal.json")) == LatencyToJson(SummarizeLatency(traces)));
}

TEST_CASE("gamma outside the unit interval is fatal") {
  WriteExampleInputs();
  WriteCorpus({{"p", 100,
                {testing::MakeChannel(ExampleTags().tags()[0], {"a"}),
                 testing::MakeChannel(ExampleTags().tags()[1], {"b"})}}},
              P("pair.jsonl"));
  CHECK(Run("build --method inter-gamma --gamma 1.5 --tags " + Quote(P("tags.json")) +
            " --input " + Quote(P("pair.jsonl")) + " --output " + Quote(P("g.jsonl"))) ==
        kExitFatal);
  CHECK(Stderr().find("\"level\":\"error\"") != std::string::npos);
  CHECK(Run("build --method inter-gamma --gamma 0.5 --tags " + Quote(P("tags.json")) +
            " --input " + Quote(P("pair.jsonl")) + " --output " + Quote(P("g.jsonl"))) ==
        kExitOk);
  CHECK(ReadFile(P("g.jsonl")) ==
        RecordToJson(ToRecord(InterGamma(ReadCorpus(P("pair.jsonl")).items[0],
                                         Gamma(1, 2)))) +
            "\n");
}

TEST_CASE("gamma on a three-channel utterance is a per-utterance diagnostic") {
  WriteExampleInputs();
  CHECK(Run("build --method inter-gamma --gamma 0.5 --tags " + Quote(P("tags.json")) +
            " --input " + Quote(P("ex.jsonl")) + " --output " + Quote(P("g3.jsonl"))) ==
        kExitDiagnostics);
  CHECK(ReadFile(P("g3.jsonl")).empty());
}

TEST_CASE("usage errors exit 2") {
  CHECK(Run("") == kExitFatal);
  CHECK(Run("frobnicate") == kExitFatal);
  CHECK(Run("build --method inter-time --bogus 1") == kExitFatal);
  CHECK(Run("build --method sideways --tags a --input b --output c") == kExitFatal);
  WriteFile(P("synth.json"), R"({"channels":[{"lang":"en","modality":"asr"}]})");
  CHECK(Run("synth --config " + Quote(P("synth.json")) + " --output " +
            Quote(P("s.jsonl"))) == kExitFatal);
  CHECK(Run("demux --tags " + Quote(P("nope.json")) + " --input x --output y") ==
        kExitFatal);
}

TEST_CASE("bad corpus lines give exit 1 and the rest still builds") {
  WriteExampleInputs();
  std::string text = ReadFile(P("ex.jsonl")) + "{\"broken\n";
  WriteFile(P("mixed.jsonl"), text);
  CHECK(Run("build --method inter-time --tags " + Quote(P("tags.json")) + " --input " +
            Quote(P("mixed.jsonl")) + " --output " + Quote(P("mixed_ser.jsonl"))) ==
        kExitDiagnostics);
  CHECK(Stderr().find("\"line\":2") != std::string::npos);
  CHECK(ReadSerialized(P("mixed_ser.jsonl")).items.size() == 1);
}

TEST_CASE("demux of a malformed stream reports and exits 1") {
  WriteExampleInputs();
  WriteFile(P("bad.txt"), "u1\t#ASR# a #ASR# b\n");
  CHECK(Run("demux --text --tags " + Quote(P("tags.json")) + " --input " +
            Quote(P("bad.txt")) + " --output " + Quote(P("bad.jsonl"))) ==
        kExitDiagnostics);
  CHECK(Stderr().find("redundant tag") != std::string::npos);
}

TEST_CASE("stdin and stdout via dash") {
  WriteExampleInputs();
  std::string cmd = std::string("\"") + TSOT_BINARY + "\" build --method inter-time --tags " +
                    Quote(P("tags.json")) + " --input - --output - < " +
                    Quote(P("ex.jsonl")) + " > " + Quote(P("piped.jsonl"));
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(ReadFile(P("piped.jsonl")) ==
        SerializedToJsonl({ToRecord(InterTime(ExampleUtterance(), ExampleTags()))}));
}

TEST_CASE("synth and study match the library and ignore job count") {
  std::string cfg =
      R"({"num_utterances":300,"words_per_channel":[0,30],"channels_per_utterance":[1,3],)"
      R"("channels":[{"lang":"en","modality":"asr"},{"lang":"es","modality":"st"},{"lang":"de","modality":"st"}]})";
  WriteFile(P("synth.json"), cfg);
  REQUIRE(Run("synth --config " + Quote(P("synth.json")) + " --seed 42 --output " +
              Quote(P("syn.jsonl")) + " --tags-output " + Quote(P("syn_tags.json"))) == 0);
  SynthConfig c = ParseSynthConfig(cfg);
  c.seed = 42;
  auto corpus = SynthCorpus(c);
  CHECK(ReadFile(P("syn.jsonl")) == CorpusToJsonl(corpus));
  CHECK(ReadFile(P("syn_tags.json")) == TagSetToJson(c.Tags()));

  std::string common = " --tags " + Quote(P("syn_tags.json")) + " --input " + Quote(P("syn.jsonl"));
  REQUIRE(Run("build --method inter-time --group-ms 250 --jobs 1" + common + " --output " +
              Quote(P("j1.jsonl"))) == 0);
  REQUIRE(Run("build --method inter-time --group-ms 250 --jobs 4" + common + " --output " +
              Quote(P("j4.jsonl"))) == 0);
  CHECK(ReadFile(P("j1.jsonl")) == ReadFile(P("j4.jsonl")));
  REQUIRE(Run("demux --jobs 3 --tags " + Quote(P("syn_tags.json")) + " --input " +
              Quote(P("j4.jsonl")) + " --output " + Quote(P("jch.jsonl"))) == 0);
  REQUIRE(Run("eval --format table --refs " + Quote(P("syn.jsonl")) + " --hyps " +
              Quote(P("jch.jsonl"))) == 0);
  CHECK(Stdout().find("100.00") != std::string::npos);

  WriteFile(P("study.json"),
            R"({"synth":)" + cfg.substr(0, cfg.size() - 1) + R"(,"seed":42},)" +
                R"("methods":[{"name":"inter_time"},{"name":"grouped","group_ms":500}],)"
                R"("policy":{"mode":"group_boundary","overhead_ms":0}})");
  REQUIRE(Run("study --jobs 4 --config " + Quote(P("study.json")) + " --output " +
              Quote(P("study_out.json"))) == 0);
  StudyReport r = LatencyStudy(corpus, c.Tags(), {Method::InterTime(), Method::Grouped(500)},
                               {ReplayPolicy::Mode::kGroupBoundary, 0}, 1);
  CHECK(ReadFile(P("study_out.json")) == StudyToJson(r));

  // same study against the files on disk, paths relative to the config
  WriteFile(P("study_files.json"),
            R"({"corpus":"syn.jsonl","tags":"syn_tags.json",)"
            R"("methods":[{"name":"inter_time"},{"name":"grouped","group_ms":500}]})");
  REQUIRE(Run("study --config " + Quote(P("study_files.json")) + " --output " +
              Quote(P("study_files_out.json"))) == 0);
  CHECK(ReadFile(P("study_files_out.json")) == ReadFile(P("study_out.json")));

  WriteFile(P("study_noseed.json"),
            R"({"synth":)" + cfg + R"(,"methods":[{"name":"inter_time"}]})");
  CHECK(Run("study --config " + Quote(P("study_noseed.json")) + " --output " +
            Quote(P("x.json"))) == kExitFatal);
}

TEST_CASE("in-process entry point") {
  const char* argv[] = {"tsot", "build", "--method", "inter-gamma", "--gamma", "7",
                        "--tags", "t", "--input", "i", "--output", "o"};
  CHECK(RunCli(12, argv) == kExitFatal);
}

}  // TEST_SUITE

}  // namespace
}  // namespace tsot
