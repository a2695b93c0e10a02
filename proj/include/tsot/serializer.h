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

// Builds joint serialized token sequences from multi-channel utterances.
//
// Timestamp interleaving concatenates the words of every channel, sorts them
// by emission time and inserts a channel tag whenever the channel changes.
// With a time step T, each word is moved to the end of its step window
// t_s = T * (floor(time / T) + 1) and, inside a window, the words of a
// channel are emitted as one contiguous run (channels in order of their
// first word in the window). The count-ratio baseline interleaves exactly one
// transcription and one translation channel.

#ifndef TSOT_SERIALIZER_H_
#define TSOT_SERIALIZER_H_

#include <string>
#include <vector>

#include "tsot/types.h"

namespace tsot {

struct MergedWord {
  Millis time = 0;  // sort key; the group boundary once grouped
  Tag tag;
  std::string word;
  Millis origin_time = 0;
  std::size_t channel_rank = 0;  // position of the word within its channel
  std::size_t tag_priority = 0;  // index of `tag` in the TagSet

  friend bool operator==(const MergedWord&, const MergedWord&) = default;
};

// All words of all channels, stably sorted by (time, tag priority, rank).
// Throws Error if a channel tag is missing from `tags`.
std::vector<MergedWord> MergeAndSort(const Utterance& u, const TagSet& tags);

// Emits a tag token before every word whose tag differs from the previous
// word's tag. Method defaults to plain timestamp interleaving.
SerializedSequence EmitWithTags(const std::vector<MergedWord>& words,
                                std::string utt_id = {},
                                Method method = Method::InterTime());

// Upper boundary of the half-open window [t_s - T, t_s) containing `time`.
Millis AssignGroup(Millis time, Millis step_ms);

std::vector<MergedWord> GroupAndReorder(std::vector<MergedWord> words,
                                        Millis step_ms);

SerializedSequence InterTime(const Utterance& u, const TagSet& tags,
                             const GroupingConfig& grouping = {});

SerializedSequence InterGamma(const Channel& asr, const Channel& st,
                              const Gamma& gamma, std::string utt_id = {});

// Utterance form of InterGamma: requires exactly one transcription and one
// translation channel, otherwise throws Error.
SerializedSequence InterGamma(const Utterance& u, const Gamma& gamma);

// Dispatches on `method` (InterTime, Grouped or InterGamma).
SerializedSequence Serialize(const Utterance& u, const TagSet& tags,
                             const Method& method);

// Tokens joined by single spaces, tags as their surface.
std::string RenderText(const SerializedSequence& s);

}  // namespace tsot

#endif  // TSOT_SERIALIZER_H_
