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

#include "tsot/serializer.h"

#include <algorithm>
#include <limits>

namespace tsot {

std::vector<MergedWord> MergeAndSort(const Utterance& u, const TagSet& tags) {
  std::vector<MergedWord> merged;
  std::size_t total = 0;
  for (const auto& ch : u.channels) total += ch.words.size();
  merged.reserve(total);

  for (const auto& ch : u.channels) {
    auto priority = tags.IndexOf(ch.tag.surface);
    if (!priority)
      throw Error("utterance " + u.utt_id + ": channel tag " +
                  ch.tag.surface + " is not in the tag set");
    for (std::size_t r = 0; r < ch.words.size(); ++r) {
      const TimedWord& w = ch.words[r];
      merged.push_back({w.time, ch.tag, w.word, w.time, r, *priority});
    }
  }

  std::sort(merged.begin(), merged.end(),
            [](const MergedWord& a, const MergedWord& b) {
              if (a.time != b.time) return a.time < b.time;
              if (a.tag_priority != b.tag_priority)
                return a.tag_priority < b.tag_priority;
              return a.channel_rank < b.channel_rank;
            });
  return merged;
}

SerializedSequence EmitWithTags(const std::vector<MergedWord>& words,
                                std::string utt_id, Method method) {
  SerializedSequence out;
  out.utt_id = std::move(utt_id);
  out.method = std::move(method);
  out.tokens.reserve(words.size() * 2);
  const Tag* prev = nullptr;
  for (const auto& w : words) {
    if (prev == nullptr || prev->surface != w.tag.surface) {
      out.tokens.emplace_back(TagToken{w.tag});
      prev = &w.tag;
    }
    out.tokens.emplace_back(WordToken{w.word, w.origin_time});
  }
  return out;
}

Millis AssignGroup(Millis time, Millis step_ms) {
  if (step_ms < 1) throw Error("time step must be >= 1 ms");
  if (time < 0) throw Error("time must be non-negative");
  return step_ms * (time / step_ms + 1);
}

std::vector<MergedWord> GroupAndReorder(std::vector<MergedWord> words,
                                        Millis step_ms) {
  if (step_ms < 1) throw Error("time step must be >= 1 ms");
  for (auto& w : words) w.time = AssignGroup(w.origin_time, step_ms);
  // Input comes from MergeAndSort, so this only matters for foreign input.
  std::stable_sort(words.begin(), words.end(),
                   [](const MergedWord& a, const MergedWord& b) {
                     return a.time < b.time;
                   });

  constexpr std::size_t kUnseen = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> first_seen;
  auto begin = words.begin();
  while (begin != words.end()) {
    auto end = std::find_if(begin, words.end(), [&](const MergedWord& w) {
      return w.time != begin->time;
    });
    first_seen.assign(first_seen.size(), kUnseen);
    std::size_t order = 0;
    for (auto it = begin; it != end; ++it) {
      if (it->tag_priority >= first_seen.size())
        first_seen.resize(it->tag_priority + 1, kUnseen);
      if (first_seen[it->tag_priority] == kUnseen)
        first_seen[it->tag_priority] = order++;
    }
    std::stable_sort(begin, end, [&](const MergedWord& a, const MergedWord& b) {
      return first_seen[a.tag_priority] < first_seen[b.tag_priority];
    });
    begin = end;
  }
  return words;
}

SerializedSequence InterTime(const Utterance& u, const TagSet& tags,
                             const GroupingConfig& grouping) {
  auto merged = MergeAndSort(u, tags);
  if (!grouping.step_ms) return EmitWithTags(merged, u.utt_id);
  return EmitWithTags(GroupAndReorder(std::move(merged), *grouping.step_ms),
                      u.utt_id, Method::Grouped(*grouping.step_ms));
}

SerializedSequence InterGamma(const Channel& asr, const Channel& st,
                              const Gamma& gamma, std::string utt_id) {
  // Emit transcription iff (1 - g)(1 + j) >= g(1 + i) with g = p/q, i.e.
  // (q - p)(1 + j) >= p(1 + i). 128-bit products cannot overflow here.
  const __int128 p = gamma.num();
  const __int128 q = gamma.den();
  std::vector<MergedWord> order;
  order.reserve(asr.words.size() + st.words.size());
  std::size_t i = 0, j = 0;
  auto take = [&order](const Channel& ch, std::size_t rank,
                       std::size_t priority) {
    const TimedWord& w = ch.words[rank];
    order.push_back({w.time, ch.tag, w.word, w.time, rank, priority});
  };
  while (i < asr.words.size() || j < st.words.size()) {
    bool pick_asr;
    if (i == asr.words.size()) {
      pick_asr = false;
    } else if (j == st.words.size()) {
      pick_asr = true;
    } else {
      pick_asr = (q - p) * static_cast<__int128>(1 + j) >=
                 p * static_cast<__int128>(1 + i);
    }
    if (pick_asr) {
      take(asr, i++, 0);
    } else {
      take(st, j++, 1);
    }
  }
  return EmitWithTags(order, std::move(utt_id), Method::InterGamma(gamma));
}

SerializedSequence InterGamma(const Utterance& u, const Gamma& gamma) {
  const Channel* asr = nullptr;
  const Channel* st = nullptr;
  for (const auto& ch : u.channels) {
    const Channel*& slot =
        ch.tag.modality == Modality::kTranscription ? asr : st;
    if (slot != nullptr || u.channels.size() != 2)
      throw Error("utterance " + u.utt_id +
                  ": inter_gamma needs exactly one transcription and one "
                  "translation channel");
    slot = &ch;
  }
  if (asr == nullptr || st == nullptr)
    throw Error("utterance " + u.utt_id +
                ": inter_gamma needs exactly one transcription and one "
                "translation channel");
  return InterGamma(*asr, *st, gamma, u.utt_id);
}

SerializedSequence Serialize(const Utterance& u, const TagSet& tags,
                             const Method& method) {
  switch (method.kind) {
    case Method::Kind::kInterTime:
      return InterTime(u, tags);
    case Method::Kind::kGrouped:
      if (!method.group_ms) throw Error("grouped method without group_ms");
      return InterTime(u, tags, GroupingConfig::Step(*method.group_ms));
    case Method::Kind::kInterGamma:
      if (!method.gamma) throw Error("inter_gamma method without gamma");
      return InterGamma(u, *method.gamma);
  }
  throw Error("unknown serialization method");
}

std::string RenderText(const SerializedSequence& s) {
  std::string out;
  for (const auto& token : s.tokens) {
    if (!out.empty()) out.push_back(' ');
    if (const auto* tag = std::get_if<TagToken>(&token)) {
      out += tag->tag.surface;
    } else {
      out += std::get<WordToken>(token).word;
    }
  }
  return out;
}

}  // namespace tsot
