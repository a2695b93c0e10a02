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

// On-disk formats. Every JSONL line carries "v": 1 and is written in
// canonical form: keys in schema order, no insignificant whitespace,
// integers unquoted, UTF-8. A path of "-" means stdin or stdout.
//
//   corpus      {"v":1,"utt_id":..,"duration_ms":..,"channels":[
//                 {"tag":"#ASR#","modality":"asr","lang":"en",
//                  "words":[{"t":200,"w":"I"},..]},..]}
//   serialized  {"v":1,"utt_id":..,"method":{"name":"grouped","group_ms":500},
//                "tokens":["#ASR#","I",..],"origin_times":[null,200,..]}
//   channels    {"v":1,"utt_id":..,"tag_count":8,"channels":[
//                 {"tag":"#ASR#","words":[..]},..],"diagnostics":[..]}
//   traces      {"v":1,"utt_id":..,"tag":"#ES#","source_ms":1000,
//                "ref_len":2,"ordinals":[2,13],"delays":[300,900]}
//   tag set     {"v":1,"tags":[{"id":..,"surface":"#ASR#","modality":"asr",
//                 "lang":"en"},..]}

#ifndef TSOT_IO_H_
#define TSOT_IO_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsot/demux.h"
#include "tsot/metrics.h"
#include "tsot/simulator.h"
#include "tsot/types.h"

namespace tsot {

inline constexpr int kFormatVersion = 1;

template <typename T>
struct ReadResult {
  std::vector<T> items;
  std::vector<Diagnostic> diagnostics;
};

bool IsValidUtf8(std::string_view s);

// Whole-file helpers; "-" is stdin/stdout. Errors carry the path.
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

// Tag set sidecar.
TagSet ParseTagSet(std::string_view json_text);
TagSet ReadTagSet(const std::string& path);
std::string TagSetToJson(const TagSet& tags);

// Corpus records.
std::string UtteranceToJson(const Utterance& u);
Utterance ParseUtterance(std::string_view line);
// Invalid lines are skipped with a line-numbered diagnostic; duplicate
// utt_ids are rejected the same way. With `tags`, every utterance is also
// validated against it; without, against its own channel tags.
// Throws Error on unreadable input or non-UTF-8 bytes.
ReadResult<Utterance> ParseCorpus(std::string_view text,
                                  const TagSet* tags = nullptr);
ReadResult<Utterance> ReadCorpus(const std::string& path,
                                 const TagSet* tags = nullptr);
std::string CorpusToJsonl(const std::vector<Utterance>& corpus);
void WriteCorpus(const std::vector<Utterance>& corpus, const std::string& path);

// Serialized records: the on-disk form of a SerializedSequence.
struct SerializedRecord {
  std::string utt_id;
  Method method;
  std::vector<std::string> tokens;
  // Parallel to tokens (nullopt for tags); absent when no word has a time.
  std::optional<std::vector<std::optional<Millis>>> origin_times;

  friend bool operator==(const SerializedRecord&,
                         const SerializedRecord&) = default;
};

SerializedRecord ToRecord(const SerializedSequence& s);
// Throws Error when a token cannot be classified cleanly against `tags`.
SerializedSequence ToSequence(const SerializedRecord& r, const TagSet& tags);
std::vector<RawToken> RecordTokens(const SerializedRecord& r);
// Same text as RenderText on the originating sequence.
std::string RenderText(const SerializedRecord& r);

std::string RecordToJson(const SerializedRecord& r);
SerializedRecord ParseRecord(std::string_view line);
ReadResult<SerializedRecord> ParseSerialized(std::string_view text);
ReadResult<SerializedRecord> ReadSerialized(const std::string& path);
std::string SerializedToJsonl(const std::vector<SerializedRecord>& records);
void WriteSerialized(const std::vector<SerializedRecord>& records,
                     const std::string& path);
// "utt_id<TAB>rendered text" per line.
std::string SerializedToText(const std::vector<SerializedRecord>& records);

// Demux output.
std::string DemuxResultToJson(const DemuxResult& r);
DemuxResult ParseDemuxResult(std::string_view line);
ReadResult<DemuxResult> ReadDemuxed(const std::string& path);

// Emission traces.
std::string TraceToJson(const EmissionTrace& t);
EmissionTrace ParseTrace(std::string_view line);
ReadResult<EmissionTrace> ReadTraces(const std::string& path);

// Configs.
SynthConfig ParseSynthConfig(std::string_view json_text);
Method ParseMethodSpec(std::string_view json_text);  // {"name":..,..}
std::string MethodToJson(const Method& m);

// Reports.
std::string DiagnosticToJson(const Diagnostic& d);
std::string MetricReportToJson(const MetricReport& r);
std::string MetricReportToTable(const MetricReport& r);
std::string LatencyToJson(const std::vector<LatencyRow>& rows);
std::string LatencyToTable(const std::vector<LatencyRow>& rows);
std::string StudyToJson(const StudyReport& r);
std::string StudyToTable(const StudyReport& r);

}  // namespace tsot

#endif  // TSOT_IO_H_
