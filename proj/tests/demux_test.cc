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


#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "test_util.h"
#include "tsot/demux.h"
#include "tsot/serializer.h"

namespace tsot {
namespace {

using testing::ExampleTags;
using testing::ExampleUtterance;
using W = std::vector<std::string>;

std::vector<RawToken> Tokenize(const std::string& text) {
  std::vector<RawToken> out;
  std::istringstream in(text);
  std::string piece;
  while (in >> piece) out.push_back({piece, std::nullopt});
  return out;
}

bool HasMessage(const DemuxResult& r, const std::string& m) {
  for (const auto& d : r.diagnostics)
    if (d.message == m) return true;
  return false;
}

void CheckExampleChannels(const DemuxResult& r) {
  REQUIRE(r.Find("#ASR#"));
  REQUIRE(r.Find("#ES#"));
  REQUIRE(r.Find("#DE#"));
  CHECK(r.Find("#ASR#")->words == W{"I", "am", "happy."});
  CHECK(r.Find("#ES#")->words == W{"Estoy", "feliz."});
  CHECK(r.Find("#DE#")->words == W{"Ich", "bin", "froh."});
  CHECK(r.diagnostics.empty());
}

TEST_SUITE("demux") {

TEST_CASE("feeding the worked example stream token by token") {
  TagSet tags = ExampleTags();
  DemuxState state = MakeDemuxState(tags, "ex1");
  std::vector<std::size_t> indices;
  for (const auto& tok : Tokenize(testing::kExampleInterTime)) {
    auto [next, event] = Feed(std::move(state), tok, tags);
    state = std::move(next);
    if (event) indices.push_back(event->token_index);
  }
  CHECK(std::is_sorted(indices.begin(), indices.end()));
  CHECK(std::adjacent_find(indices.begin(), indices.end()) == indices.end());
  DemuxResult r = Finish(std::move(state));
  CheckExampleChannels(r);
  CHECK(r.tag_count == 8);
}

TEST_CASE("both example strings decode to the same channels") {
  CheckExampleChannels(DemuxFull(std::string_view(testing::kExampleInterTime), ExampleTags()));
  CheckExampleChannels(DemuxFull(std::string_view(testing::kExampleGrouped500), ExampleTags()));
}

TEST_CASE("empty stream") {
  DemuxResult r = DemuxFull(std::vector<RawToken>{}, ExampleTags());
  CHECK(r.channels.empty());
  CHECK(r.diagnostics.empty());
  CHECK(DemuxFull(std::string_view(""), ExampleTags()).channels.empty());
}

TEST_CASE("untagged word goes to the unknown channel") {
  DemuxResult r = DemuxFull(std::vector<RawToken>{{"hello", {}}}, ExampleTags());
  REQUIRE(r.Find(kUnknownChannel));
  CHECK(r.Find(kUnknownChannel)->words == W{"hello"});
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].message == "untagged word");
}

TEST_CASE("redundant tag is reported and the stream still decodes") {
  DemuxResult r = DemuxFull(std::string_view("#ASR# a #ASR# b"), ExampleTags());
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].message == "redundant tag");
  CHECK(r.diagnostics[0].index == std::optional<std::size_t>(2));
  CHECK(r.Find("#ASR#")->words == W{"a", "b"});
}

TEST_CASE("unknown tag routes to the unknown channel until a known tag") {
  DemuxResult r = DemuxFull(std::string_view("#ASR# a #IT# x y #ES# b"), ExampleTags());
  CHECK(HasMessage(r, "unknown tag"));
  CHECK(r.diagnostics.size() == 1);
  CHECK(r.Find(kUnknownChannel)->words == W{"x", "y"});
  CHECK(r.Find("#ES#")->words == W{"b"});
  CHECK(r.tag_count == 3);
}

TEST_CASE("repeated spaces are diagnosed, words survive") {
  DemuxResult r = DemuxFull(std::string_view("#ASR# a  b"), ExampleTags());
  CHECK(HasMessage(r, "empty token (repeated space)"));
  CHECK(r.Find("#ASR#")->words == W{"a", "b"});
}

TEST_CASE("tag with no words is present but empty") {
  DemuxResult r = DemuxFull(std::string_view("#ASR# a #DE#"), ExampleTags());
  REQUIRE(r.Find("#DE#"));
  CHECK(r.Find("#DE#")->words.empty());
  CHECK(r.Find("#ES#") == nullptr);
}

TEST_CASE("looks like tag") {
  CHECK(LooksLikeTag("#IT#"));
  CHECK(LooksLikeTag("#ASR#"));
  CHECK_FALSE(LooksLikeTag("##"));
  CHECK_FALSE(LooksLikeTag("#"));
  CHECK_FALSE(LooksLikeTag("#a#b#"));
  CHECK_FALSE(LooksLikeTag("word#"));
}

TEST_CASE("sequence input carries origin times into events") {
  TagSet tags = ExampleTags();
  auto s = InterTime(ExampleUtterance(), tags);
  Demuxer d(tags, s.utt_id);
  std::vector<Millis> es;
  for (const auto& t : s.tokens)
    if (auto e = d.Feed(t); e && e->tag == "#ES#") es.push_back(*e->emission_time);
  CHECK(es == std::vector<Millis>{300, 900});
  CheckExampleChannels(std::move(d).Finish());
}

TEST_CASE("incremental feed equals batch on arbitrary junk") {
  std::mt19937_64 rng(13);
  TagSet tags = ExampleTags();
  const std::vector<std::string> pool = {"#ASR#", "#ES#", "#DE#", "#IT#", "#X#",
                                         "w1", "w2", "w3", "a b", ""};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1), len(0, 30);
  for (int k = 0; k < 1000; ++k) {
    std::vector<RawToken> toks;
    std::size_t n = len(rng);
    for (std::size_t i = 0; i < n; ++i) toks.push_back({pool[pick(rng)], {}});
    DemuxState state = MakeDemuxState(tags, "j");
    std::size_t words = 0;
    for (const auto& t : toks) {
      auto [next, ev] = Feed(std::move(state), t, tags);
      state = std::move(next);
      words += ev.has_value();
    }
    DemuxResult folded = Finish(std::move(state));
    DemuxResult batch = DemuxFull(toks, tags, "j");
    CHECK(folded == batch);
    // never loses a decodable word
    std::size_t total = 0;
    for (const auto& c : batch.channels) total += c.words.size();
    CHECK(total == words);
  }
}

TEST_CASE("round trip through text for random utterances") {
  std::mt19937_64 rng(17);
  TagSet tags = TagSet::OneToMany("en", {"es", "de", "it"});
  for (std::size_t i = 0; i < 500; ++i) {
    Utterance u = testing::RandomUtterance(rng, tags, i, 15);
    for (auto g : {GroupingConfig::None(), GroupingConfig::Step(500)}) {
      DemuxResult r = DemuxFull(std::string_view(RenderText(InterTime(u, tags, g))), tags,
                                u.utt_id);
      CHECK(r.diagnostics.empty());
      for (const auto& d : DiffChannels(u, r)) {
        CHECK(d.distance == 0);
        CHECK_FALSE(d.extra);
      }
    }
  }
}

TEST_CASE("diff channels") {
  TagSet tags = ExampleTags();
  Utterance u = ExampleUtterance();
  DemuxResult same = DemuxFull(std::string_view(testing::kExampleInterTime), tags);
  for (const auto& d : DiffChannels(u, same)) CHECK(d.distance == 0);

  DemuxResult sub = DemuxFull(
      std::string_view("#ASR# I was happy. #ES# Estoy feliz. #DE# Ich bin froh."), tags);
  auto d = DiffChannels(u, sub);
  REQUIRE(d.size() == 3);
  CHECK(d[0].distance == 1);
  CHECK(d[1].distance == 0);

  DemuxResult missing = DemuxFull(std::string_view("#ASR# I am happy. #X# q"), tags);
  auto m = DiffChannels(u, missing);
  REQUIRE(m.size() == 4);
  CHECK(m[1].missing);
  CHECK(m[1].distance == 2);
  CHECK(m[2].distance == 3);
  CHECK(m[3].extra);
  CHECK(m[3].tag == kUnknownChannel);
}

TEST_CASE("edit distance agrees with exhaustive enumeration") {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<int> len(0, 6), tok(0, 3);
  for (int k = 0; k < 400; ++k) {
    W a, b;
    for (int i = len(rng); i > 0; --i) a.push_back(std::to_string(tok(rng)));
    for (int i = len(rng); i > 0; --i) b.push_back(std::to_string(tok(rng)));
    CHECK(EditDistance(a, b) == testing::BruteEditDistance(a, b));
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace tsot
