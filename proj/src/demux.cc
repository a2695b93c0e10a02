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

#include "tsot/demux.h"

#include <algorithm>
#include <numeric>

namespace tsot {

namespace {

void Report(DemuxState& state, std::string tag, std::string message) {
  state.diagnostics.push_back({state.utt_id, std::move(tag), state.token_index,
                               std::nullopt, std::move(message)});
}

void OnKnownTag(DemuxState& state, std::size_t index, const TagSet& tags) {
  const std::string& surface = tags.tags()[index].surface;
  if (state.current == index) Report(state, surface, "redundant tag");
  state.current = index;
  state.current_unknown.reset();
  if (!state.channels[index]) state.channels[index] = DemuxedChannel{surface};
}

void OnUnknownTag(DemuxState& state, const std::string& surface) {
  if (state.current_unknown == surface) Report(state, surface, "redundant tag");
  Report(state, surface, "unknown tag");
  state.current.reset();
  state.current_unknown = surface;
}

RoutedEvent OnWord(DemuxState& state, const std::string& word,
                   std::optional<Millis> time) {
  DemuxedChannel* target = nullptr;
  if (state.current) {
    target = &*state.channels[*state.current];
  } else {
    if (!state.current_unknown) Report(state, "", "untagged word");
    if (!state.unknown) state.unknown = DemuxedChannel{std::string(kUnknownChannel)};
    target = &*state.unknown;
  }
  target->words.push_back(word);
  target->times.push_back(time);
  return {target->tag, word, state.token_index, time};
}

}  // namespace

const DemuxedChannel* DemuxResult::Find(std::string_view tag) const {
  for (const auto& c : channels)
    if (c.tag == tag) return &c;
  return nullptr;
}

bool LooksLikeTag(std::string_view token) {
  return token.size() >= 3 && token.front() == '#' && token.back() == '#' &&
         token.substr(1, token.size() - 2).find('#') == std::string_view::npos;
}

DemuxState MakeDemuxState(const TagSet& tags, std::string utt_id) {
  DemuxState state;
  state.utt_id = std::move(utt_id);
  state.channels.resize(tags.size());
  return state;
}

std::pair<DemuxState, std::optional<RoutedEvent>> Feed(
    DemuxState state, const SerializedToken& token, const TagSet& tags) {
  std::optional<RoutedEvent> event;
  if (const auto* tag = std::get_if<TagToken>(&token)) {
    ++state.tag_count;
    auto index = tags.IndexOf(tag->tag.surface);
    if (index) {
      OnKnownTag(state, *index, tags);
    } else {
      OnUnknownTag(state, tag->tag.surface);
    }
  } else {
    const auto& word = std::get<WordToken>(token);
    event = OnWord(state, word.word, word.origin_time);
  }
  ++state.token_index;
  return {std::move(state), std::move(event)};
}

std::pair<DemuxState, std::optional<RoutedEvent>> Feed(DemuxState state,
                                                       const RawToken& token,
                                                       const TagSet& tags) {
  std::optional<RoutedEvent> event;
  if (token.text.empty() || ContainsWhitespace(token.text)) {
    Report(state, "", "malformed token");
  } else if (auto index = tags.IndexOf(token.text)) {
    ++state.tag_count;
    OnKnownTag(state, *index, tags);
  } else if (LooksLikeTag(token.text)) {
    ++state.tag_count;
    OnUnknownTag(state, token.text);
  } else {
    event = OnWord(state, token.text, token.time);
  }
  ++state.token_index;
  return {std::move(state), std::move(event)};
}

DemuxResult Finish(DemuxState state) {
  DemuxResult out;
  out.utt_id = std::move(state.utt_id);
  for (auto& c : state.channels)
    if (c) out.channels.push_back(std::move(*c));
  if (state.unknown) out.channels.push_back(std::move(*state.unknown));
  out.tag_count = state.tag_count;
  out.diagnostics = std::move(state.diagnostics);
  return out;
}

std::optional<RoutedEvent> Demuxer::Feed(const SerializedToken& token) {
  auto [next, event] = tsot::Feed(std::move(state_), token, *tags_);
  state_ = std::move(next);
  return event;
}

std::optional<RoutedEvent> Demuxer::Feed(const RawToken& token) {
  auto [next, event] = tsot::Feed(std::move(state_), token, *tags_);
  state_ = std::move(next);
  return event;
}

DemuxResult Demuxer::Finish() && { return tsot::Finish(std::move(state_)); }

DemuxResult DemuxFull(const SerializedSequence& s, const TagSet& tags) {
  Demuxer demux(tags, s.utt_id);
  for (const auto& token : s.tokens) demux.Feed(token);
  return std::move(demux).Finish();
}

DemuxResult DemuxFull(const std::vector<RawToken>& tokens, const TagSet& tags,
                      std::string utt_id) {
  Demuxer demux(tags, std::move(utt_id));
  for (const auto& token : tokens) demux.Feed(token);
  return std::move(demux).Finish();
}

DemuxResult DemuxFull(std::string_view text, const TagSet& tags,
                      std::string utt_id) {
  Demuxer demux(tags, std::move(utt_id));
  std::vector<Diagnostic> spacing;
  if (!text.empty()) {
    std::size_t start = 0;
    while (true) {
      std::size_t end = text.find(' ', start);
      std::string_view piece = text.substr(
          start, end == std::string_view::npos ? std::string_view::npos
                                               : end - start);
      if (piece.empty()) {
        spacing.push_back({demux.state().utt_id, "", demux.state().token_index,
                           std::nullopt, "empty token (repeated space)"});
      } else {
        demux.Feed(RawToken{std::string(piece), std::nullopt});
      }
      if (end == std::string_view::npos) break;
      start = end + 1;
    }
  }
  DemuxResult result = std::move(demux).Finish();
  if (!spacing.empty()) {
    result.diagnostics.insert(result.diagnostics.end(), spacing.begin(),
                              spacing.end());
    std::stable_sort(result.diagnostics.begin(), result.diagnostics.end(),
                     [](const Diagnostic& a, const Diagnostic& b) {
                       return a.index.value_or(0) < b.index.value_or(0);
                     });
  }
  return result;
}

std::size_t EditDistance(const std::vector<std::string>& a,
                         const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<ChannelDistance> DiffChannels(const Utterance& expected,
                                          const DemuxResult& actual) {
  std::vector<ChannelDistance> out;
  for (const auto& ch : expected.channels) {
    ChannelDistance d;
    d.tag = ch.tag.surface;
    d.expected_words = ch.words.size();
    if (const DemuxedChannel* got = actual.Find(ch.tag.surface)) {
      d.distance = EditDistance(ch.Words(), got->words);
    } else {
      d.distance = ch.words.size();
      d.missing = !ch.words.empty();
    }
    out.push_back(std::move(d));
  }
  for (const auto& got : actual.channels) {
    if (expected.FindChannel(got.tag) != nullptr) continue;
    out.push_back({got.tag, got.words.size(), 0, false, true});
  }
  return out;
}

}  // namespace tsot
