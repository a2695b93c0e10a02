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

#ifndef TSOT_METRICS_H_
#define TSOT_METRICS_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsot/demux.h"
#include "tsot/types.h"

namespace tsot {

using Words = std::vector<std::string>;

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t ref_len = 0;

  std::size_t errors() const { return substitutions + insertions + deletions; }
  EditCounts& operator+=(const EditCounts& o);
};

// Minimum-cost word alignment with unit costs.
EditCounts AlignCounts(const Words& reference, const Words& hypothesis);

// Throws Error on an empty reference.
double Wer(const Words& reference, const Words& hypothesis);

// Lowercases ASCII and strips ASCII punctuation; words that become empty are
// dropped.
Words NormalizeWords(const Words& words);

inline constexpr int kBleuMaxOrder = 4;

struct BleuStats {
  std::array<std::size_t, kBleuMaxOrder> matches{};
  std::array<std::size_t, kBleuMaxOrder> totals{};
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
  int order = 0;  // orders that entered the geometric mean
  double brevity_penalty = 0.0;
  double score = 0.0;  // [0, 100]

  double precision(int n) const;  // 1-based order
};

// Corpus BLEU over pre-tokenized segments: clipped n-gram counts pooled over
// the corpus, uniform weights, brevity penalty. Orders with no hypothesis
// n-grams anywhere in the corpus are left out of the mean (segments shorter
// than four words). `smooth` adds one to every match and total.
BleuStats BleuCorpus(std::span<const Words> references,
                     std::span<const Words> hypotheses, bool smooth = false);

struct EmissionPoint {
  std::size_t token_ordinal = 0;
  Millis delay_ms = 0;

  friend bool operator==(const EmissionPoint&, const EmissionPoint&) = default;
};

struct EmissionTrace {
  std::string utt_id;
  std::string tag;
  std::vector<EmissionPoint> points;
  Millis source_duration_ms = 0;
  std::size_t ref_len = 0;

  std::size_t hyp_len() const { return points.size(); }
  friend bool operator==(const EmissionTrace&, const EmissionTrace&) = default;
};

// Length-adaptive average lagging, in milliseconds.
double Laal(const EmissionTrace& trace);

std::size_t CountSwitches(const SerializedSequence& s);

struct SwitchCount {
  std::string utt_id;
  std::size_t tags = 0;
};

// 1 - sum(variant) / sum(base), utterances matched by id.
double SwitchReduction(std::span<const SwitchCount> base,
                       std::span<const SwitchCount> variant);
double SwitchReduction(std::span<const SerializedSequence> base,
                       std::span<const SerializedSequence> variant);

struct LatencyRow {
  std::string tag;
  std::size_t traces = 0;
  double mean_laal_ms = 0.0;
};

// Mean LAAL per tag, tags in order of first appearance.
std::vector<LatencyRow> SummarizeLatency(std::span<const EmissionTrace> traces);

struct ChannelReport {
  std::string tag;
  Modality modality = Modality::kTranscription;
  std::size_t utterances = 0;
  EditCounts edits;              // transcription channels
  std::optional<double> wer;     // transcription channels
  std::optional<BleuStats> bleu; // translation channels
  std::optional<LatencyRow> latency;
};

struct MetricReport {
  std::size_t utterances = 0;
  std::size_t total_tags = 0;  // tag tokens seen across the hypotheses
  std::size_t total_diagnostics = 0;
  std::vector<ChannelReport> channels;

  const ChannelReport* Find(std::string_view tag) const;
};

struct EvalOptions {
  bool normalize = false;  // applies to WER only
  bool smooth_bleu = false;
};

// Utterances are matched by id; a reference without hypothesis (or the
// reverse) is an Error naming the utt_id.
MetricReport EvaluateCorpus(std::span<const Utterance> references,
                            std::span<const DemuxResult> hypotheses,
                            const std::vector<EmissionTrace>* traces = nullptr,
                            const EvalOptions& options = {});

}  // namespace tsot

#endif  // TSOT_METRICS_H_
