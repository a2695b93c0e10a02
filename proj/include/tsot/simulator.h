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

// Synthetic timed corpora and idealized emission replay.
//
// Transcription channels get monotone timelines with inter-word gaps drawn
// from `word_gap_ms`. A translation word is anchored on the proportional
// source word, delayed by a lag and jittered inside the reordering window;
// the jittered times are sorted again so the channel stays monotone.

#ifndef TSOT_SIMULATOR_H_
#define TSOT_SIMULATOR_H_

#include <cstdint>
#include <string>
#include <vector>

#include "tsot/metrics.h"
#include "tsot/types.h"

namespace tsot {

struct IntRange {
  std::int64_t min = 0;
  std::int64_t max = 0;
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct SynthConfig {
  std::uint64_t seed = 0;
  std::size_t num_utterances = 100;
  IntRange words_per_channel{0, 50};
  IntRange word_gap_ms{150, 450};
  IntRange lag_ms{0, 800};
  Millis reorder_window_ms = 300;
  // How many plan channels each utterance draws (plan order is kept).
  // Defaults to every channel of the plan when left at {0, 0}.
  IntRange channels_per_utterance{0, 0};
  std::vector<Tag> channels;
  std::size_t vocab_size = 1000;
  std::string utt_prefix = "synth";

  // Throws Error on empty or negative ranges, an empty plan, or vocab 0.
  void Validate() const;
  TagSet Tags() const { return TagSet(channels); }
};

std::vector<Utterance> SynthCorpus(const SynthConfig& config);
// One utterance; utterance i of SynthCorpus(config) for the same config.
Utterance SynthUtterance(const SynthConfig& config, std::size_t index);

struct ReplayPolicy {
  enum class Mode { kOriginTime, kGroupBoundary };
  Mode mode = Mode::kOriginTime;
  Millis overhead_ms = 0;  // charged per token ordinal in the stream
};

// Per-channel emission traces (TagSet order, channels with words only).
// Every word token must carry origin_time; group-boundary mode needs a
// grouped sequence. ref_len is the channel's own word count.
std::vector<EmissionTrace> Replay(const SerializedSequence& s,
                                  const TagSet& tags,
                                  const ReplayPolicy& policy,
                                  Millis source_duration_ms);

struct StudyRow {
  std::string method;  // Method::Label()
  std::string tag;
  std::size_t utterances = 0;  // utterances serialized by this method
  std::size_t skipped = 0;     // utterances the method cannot serialize
  std::size_t traces = 0;
  double mean_laal_ms = 0.0;
  double mean_switches = 0.0;  // tags per serialized utterance
  double mean_delay_ms = 0.0;  // over every replayed word of the channel
};

struct StudyReport {
  std::vector<StudyRow> rows;
};

// Ungrouped methods always replay at origin time; grouped methods use
// `policy.mode`. INTER gamma skips utterances that are not exactly one
// transcription plus one translation channel.
StudyReport LatencyStudy(const std::vector<Utterance>& corpus,
                         const TagSet& tags,
                         const std::vector<Method>& methods,
                         const ReplayPolicy& policy, std::size_t jobs = 1);

}  // namespace tsot

#endif  // TSOT_SIMULATOR_H_
