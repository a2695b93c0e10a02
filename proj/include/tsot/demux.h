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

// Streaming demultiplexer: routes the words of a serialized stream back to
// their channels by tracking the most recent tag. Malformed streams never
// abort; stray words land in the UNKNOWN channel and a diagnostic is kept.

#ifndef TSOT_DEMUX_H_
#define TSOT_DEMUX_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tsot/types.h"

namespace tsot {

inline constexpr std::string_view kUnknownChannel = "<UNKNOWN>";

// A raw stream token before classification: text plus optional timestamp.
struct RawToken {
  std::string text;
  std::optional<Millis> time;
};

struct RoutedEvent {
  std::string tag;  // surface, or kUnknownChannel
  std::string word;
  std::size_t token_index = 0;
  std::optional<Millis> emission_time;

  friend bool operator==(const RoutedEvent&, const RoutedEvent&) = default;
};

struct DemuxedChannel {
  std::string tag;  // surface, or kUnknownChannel
  std::vector<std::string> words;
  std::vector<std::optional<Millis>> times;  // parallel to words

  friend bool operator==(const DemuxedChannel&,
                         const DemuxedChannel&) = default;
};

struct DemuxState {
  std::string utt_id;
  // Index into the TagSet of the active tag. `current_unknown` holds the
  // surface when the last tag was not in the TagSet.
  std::optional<std::size_t> current;
  std::optional<std::string> current_unknown;
  // One slot per TagSet entry; engaged once the tag has appeared.
  std::vector<std::optional<DemuxedChannel>> channels;
  std::optional<DemuxedChannel> unknown;
  std::size_t token_index = 0;
  std::size_t tag_count = 0;
  std::vector<Diagnostic> diagnostics;
};

// Per-utterance demux output. Channels are in TagSet order, followed by
// UNKNOWN when it received words.
struct DemuxResult {
  std::string utt_id;
  std::vector<DemuxedChannel> channels;
  std::size_t tag_count = 0;
  std::vector<Diagnostic> diagnostics;

  const DemuxedChannel* Find(std::string_view tag) const;
  friend bool operator==(const DemuxResult&, const DemuxResult&) = default;
};

// True for tokens shaped like a tag ("#X#") that should be treated as tags
// even when absent from the TagSet.
bool LooksLikeTag(std::string_view token);

DemuxState MakeDemuxState(const TagSet& tags, std::string utt_id = {});

std::pair<DemuxState, std::optional<RoutedEvent>> Feed(
    DemuxState state, const SerializedToken& token, const TagSet& tags);
std::pair<DemuxState, std::optional<RoutedEvent>> Feed(DemuxState state,
                                                       const RawToken& token,
                                                       const TagSet& tags);

DemuxResult Finish(DemuxState state);

// Incremental wrapper around Feed for stream consumers.
class Demuxer {
 public:
  explicit Demuxer(const TagSet& tags, std::string utt_id = {})
      : tags_(&tags), state_(MakeDemuxState(tags, std::move(utt_id))) {}

  std::optional<RoutedEvent> Feed(const SerializedToken& token);
  std::optional<RoutedEvent> Feed(const RawToken& token);
  const DemuxState& state() const { return state_; }
  DemuxResult Finish() &&;

 private:
  const TagSet* tags_;
  DemuxState state_;
};

DemuxResult DemuxFull(const SerializedSequence& s, const TagSet& tags);
DemuxResult DemuxFull(const std::vector<RawToken>& tokens, const TagSet& tags,
                      std::string utt_id = {});
// Splits on single spaces; empty tokens are skipped with a diagnostic.
DemuxResult DemuxFull(std::string_view text, const TagSet& tags,
                      std::string utt_id = {});

// Word-level Levenshtein distance with unit costs.
std::size_t EditDistance(const std::vector<std::string>& a,
                         const std::vector<std::string>& b);

struct ChannelDistance {
  std::string tag;
  std::size_t distance = 0;
  std::size_t expected_words = 0;
  bool missing = false;  // expected channel absent from the demux output
  bool extra = false;    // output channel absent from the expected utterance

  friend bool operator==(const ChannelDistance&,
                         const ChannelDistance&) = default;
};

std::vector<ChannelDistance> DiffChannels(const Utterance& expected,
                                          const DemuxResult& actual);

}  // namespace tsot

#endif  // TSOT_DEMUX_H_
