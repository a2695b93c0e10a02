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


#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "test_util.h"
#include "tsot/metrics.h"
#include "tsot/serializer.h"

namespace tsot {
namespace {

using testing::ExampleTags;
using testing::ExampleUtterance;
using testing::OracleWord;

std::vector<std::string> MergedWords(const std::vector<MergedWord>& ws) {
  std::vector<std::string> out;
  for (const auto& w : ws) out.push_back(w.word);
  return out;
}

bool SameAsOracle(const std::vector<MergedWord>& got,
                  const std::vector<OracleWord>& want) {
  if (got.size() != want.size()) return false;
  for (std::size_t i = 0; i < got.size(); ++i)
    if (got[i].word != want[i].word || got[i].tag.surface != want[i].tag ||
        got[i].time != want[i].time || got[i].channel_rank != want[i].rank)
      return false;
  return true;
}

// Per-channel word lists read straight off the token vector.
std::map<std::string, std::vector<std::string>> SplitByTag(
    const SerializedSequence& s) {
  std::map<std::string, std::vector<std::string>> out;
  std::string cur;
  for (const auto& t : s.tokens) {
    if (IsTag(t))
      cur = std::get<TagToken>(t).tag.surface;
    else
      out[cur].push_back(std::get<WordToken>(t).word);
  }
  return out;
}

std::map<std::string, std::vector<std::string>> ChannelsOf(const Utterance& u) {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& ch : u.channels)
    if (!ch.words.empty()) out[ch.tag.surface] = ch.Words();
  return out;
}

Utterance PairUtterance(std::vector<std::string> asr, std::vector<std::string> st) {
  TagSet tags = testing::PairTags();
  return {"pair", 1000,
          {testing::MakeChannel(tags.tags()[0], asr),
           testing::MakeChannel(tags.tags()[1], st)}};
}

TEST_SUITE("serializer") {

TEST_CASE("merge and sort on the worked example utterance") {
  auto words = MergeAndSort(ExampleUtterance(), ExampleTags());
  CHECK(MergedWords(words) == std::vector<std::string>{"I", "Estoy", "am", "Ich",
                                                        "happy.", "bin", "feliz.",
                                                        "froh."});
  std::vector<Millis> times;
  for (const auto& w : words) times.push_back(w.time);
  CHECK(times == std::vector<Millis>{200, 300, 400, 500, 700, 800, 900, 1100});
}

TEST_CASE("merge of a single channel is the channel") {
  TagSet tags = ExampleTags();
  Utterance u{"u", 1000, {testing::MakeChannel(tags.tags()[1], {"x", "y", "z"})}};
  CHECK(MergedWords(MergeAndSort(u, tags)) ==
        std::vector<std::string>{"x", "y", "z"});
}

TEST_CASE("ties break by tag set order") {
  TagSet tags = testing::PairTags();
  // Listed st first to make sure channel order in the utterance does not matter.
  Utterance u{"u", 1000,
              {{tags.tags()[1], {{100, "s"}}}, {tags.tags()[0], {{100, "a"}}}}};
  auto words = MergeAndSort(u, tags);
  CHECK(MergedWords(words) == std::vector<std::string>{"a", "s"});
}

TEST_CASE("merge matches the stable-merge oracle on tie-heavy input") {
  std::mt19937_64 rng(3);
  TagSet tags = TagSet::OneToMany("en", {"es", "de", "it"});
  for (std::size_t i = 0; i < 500; ++i) {
    Utterance u = testing::RandomUtterance(rng, tags, i, 10, 400);
    CHECK(SameAsOracle(MergeAndSort(u, tags), testing::OracleMerge(u, tags)));
  }
}

TEST_CASE("emit with tags") {
  CHECK(EmitWithTags({}).tokens.empty());
  TagSet tags = ExampleTags();
  Utterance u{"u", 1000, {testing::MakeChannel(tags.tags()[0], {"a", "b", "c"})}};
  auto s = EmitWithTags(MergeAndSort(u, tags));
  CHECK(s.tokens.size() == 4);
  CHECK(s.TagCount() == 1);
  CHECK(RenderText(s) == "#ASR# a b c");
}

TEST_CASE("inter time on the worked example utterance") {
  auto s = InterTime(ExampleUtterance(), ExampleTags());
  CHECK(RenderText(s) == testing::kExampleInterTime);
  CHECK(s.method == Method::InterTime());
  auto g = InterTime(ExampleUtterance(), ExampleTags(), GroupingConfig::Step(500));
  CHECK(RenderText(g) == testing::kExampleGrouped500);
  CHECK(g.method == Method::Grouped(500));
  // origin times ride along unchanged
  std::vector<Millis> origins;
  for (const auto& t : g.tokens)
    if (!IsTag(t)) origins.push_back(*std::get<WordToken>(t).origin_time);
  CHECK(origins == std::vector<Millis>{200, 400, 300, 500, 800, 700, 900, 1100});
}

TEST_CASE("grouping never reorders a single channel") {
  TagSet tags = ExampleTags();
  Utterance u{"u", 5000,
              {{tags.tags()[2], {{0, "a"}, {10, "b"}, {900, "c"}, {4000, "d"}}}}};
  for (Millis t : {1, 7, 250, 500, 1000, 100000}) {
    CHECK(RenderText(InterTime(u, tags, GroupingConfig::Step(t))) ==
          RenderText(InterTime(u, tags)));
  }
}

TEST_CASE("assign group") {
  CHECK(AssignGroup(200, 500) == 500);
  CHECK(AssignGroup(500, 500) == 1000);
  CHECK(AssignGroup(499, 500) == 500);
  for (Millis t : {1, 2, 250, 500, 1000}) CHECK(AssignGroup(0, t) == t);
  CHECK_THROWS_AS(AssignGroup(10, 0), Error);
  CHECK_THROWS_AS(AssignGroup(-1, 10), Error);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<Millis> time(0, 100000), step(1, 3000);
  for (int i = 0; i < 10000; ++i) {
    Millis x = time(rng), t = step(rng);
    Millis ts = AssignGroup(x, t);
    CHECK((ts - t <= x && x < ts));
    CHECK(ts % t == 0);
  }
}

TEST_CASE("group and reorder on the worked example list") {
  auto g = GroupAndReorder(MergeAndSort(ExampleUtterance(), ExampleTags()), 500);
  CHECK(MergedWords(g) == std::vector<std::string>{"I", "am", "Estoy", "Ich", "bin",
                                                    "happy.", "feliz.", "froh."});
  std::vector<Millis> groups;
  for (const auto& w : g) groups.push_back(w.time);
  CHECK(groups == std::vector<Millis>{500, 500, 500, 1000, 1000, 1000, 1000, 1500});
  CHECK_THROWS_AS(GroupAndReorder({}, 0), Error);
}

TEST_CASE("one big group yields contiguous channel blocks") {
  std::mt19937_64 rng(8);
  TagSet tags = TagSet::OneToMany("en", {"es", "de", "it"});
  for (std::size_t i = 0; i < 300; ++i) {
    Utterance u = testing::RandomUtterance(rng, tags, i, 8, 3000);
    auto got = GroupAndReorder(MergeAndSort(u, tags), 100000);
    auto want = testing::OracleGroup(testing::OracleMerge(u, tags), 100000);
    REQUIRE(SameAsOracle(got, want));
    std::size_t nonempty = 0;
    for (const auto& ch : u.channels) nonempty += !ch.words.empty();
    CHECK(testing::OracleRuns(want) == nonempty);
  }
}

TEST_CASE("grouping matches the regroup oracle for many steps") {
  std::mt19937_64 rng(9);
  TagSet tags = TagSet::OneToMany("en", {"es", "de"});
  for (std::size_t i = 0; i < 300; ++i) {
    Utterance u = testing::RandomUtterance(rng, tags, i, 12, 3000);
    for (Millis t : {1, 50, 250, 333, 500, 1000}) {
      auto got = GroupAndReorder(MergeAndSort(u, tags), t);
      auto want = testing::OracleGroup(testing::OracleMerge(u, tags), t);
      REQUIRE(SameAsOracle(got, want));
      CHECK(RenderText(InterTime(u, tags, GroupingConfig::Step(t))) ==
            testing::OracleRender(want));
    }
  }
}

TEST_CASE("step 1 with distinct times keeps the merge order") {
  TagSet tags = ExampleTags();
  auto merged = MergeAndSort(ExampleUtterance(), tags);
  auto grouped = GroupAndReorder(merged, 1);
  CHECK(MergedWords(grouped) == MergedWords(merged));
}

TEST_CASE("inter gamma worked cases") {
  CHECK(RenderText(InterGamma(PairUtterance({"a1", "a2"}, {"s1"}), Gamma(0, 1))) ==
        "#ASR# a1 a2 #ES# s1");
  CHECK(RenderText(InterGamma(PairUtterance({"a1", "a2"}, {"s1"}), Gamma(1, 1))) ==
        "#ES# s1 #ASR# a1 a2");
  CHECK(RenderText(InterGamma(PairUtterance({"a1", "a2"}, {"s1", "s2"}),
                              Gamma(1, 2))) == "#ASR# a1 #ES# s1 #ASR# a2 #ES# s2");
  // 3(1+j) >= 1+i, traced by hand
  CHECK(RenderText(InterGamma(PairUtterance({"a1", "a2", "a3", "a4"}, {"s1", "s2"}),
                              Gamma(1, 4))) ==
        "#ASR# a1 a2 a3 #ES# s1 #ASR# a4 #ES# s2");
  CHECK(RenderText(InterGamma(PairUtterance({}, {"s1"}), Gamma(1, 2))) == "#ES# s1");
  CHECK(RenderText(InterGamma(PairUtterance({}, {}), Gamma(1, 2))).empty());
}

TEST_CASE("inter gamma rejects anything but one transcription and one translation") {
  CHECK_THROWS_AS(InterGamma(ExampleUtterance(), Gamma(1, 2)), Error);
  TagSet tags = ExampleTags();
  Utterance two_st{"u", 100,
                   {testing::MakeChannel(tags.tags()[1], {"a"}),
                    testing::MakeChannel(tags.tags()[2], {"b"})}};
  CHECK_THROWS_AS(InterGamma(two_st, Gamma(1, 2)), Error);
}

TEST_CASE("inter gamma endpoints and alternation on random pairs") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> len(0, 20);
  for (int k = 0; k < 200; ++k) {
    std::vector<std::string> a, s;
    int na = len(rng), ns = len(rng);
    for (int i = 0; i < na; ++i) a.push_back("a" + std::to_string(i));
    for (int i = 0; i < ns; ++i) s.push_back("s" + std::to_string(i));
    Utterance u = PairUtterance(a, s);
    auto first = [](const SerializedSequence& q) {
      std::vector<std::string> w;
      for (const auto& t : q.tokens)
        if (!IsTag(t)) w.push_back(std::get<WordToken>(t).word);
      return w;
    };
    std::vector<std::string> as = a, sa = s;
    as.insert(as.end(), s.begin(), s.end());
    sa.insert(sa.end(), a.begin(), a.end());
    CHECK(first(InterGamma(u, Gamma(0, 1))) == as);
    CHECK(first(InterGamma(u, Gamma(1, 1))) == sa);
    std::vector<std::string> b = s;
    b.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) b[i] = "s" + std::to_string(i);
    std::vector<std::string> alt;
    for (std::size_t i = 0; i < a.size(); ++i) {
      alt.push_back(a[i]);
      alt.push_back(b[i]);
    }
    CHECK(first(InterGamma(PairUtterance(a, b), Gamma(1, 2))) == alt);
  }
}

TEST_CASE("every serializer output is a per-channel permutation") {
  std::mt19937_64 rng(33);
  TagSet tags = TagSet::OneToMany("en", {"es", "de", "it"});
  TagSet pair = testing::PairTags();
  for (std::size_t i = 0; i < 400; ++i) {
    Utterance u = testing::RandomUtterance(rng, tags, i);
    CHECK(SplitByTag(InterTime(u, tags)) == ChannelsOf(u));
    for (Millis t : {250, 500, 1000})
      CHECK(SplitByTag(InterTime(u, tags, GroupingConfig::Step(t))) == ChannelsOf(u));
    Utterance p = testing::RandomUtterance(rng, pair, i);
    if (p.channels.size() == 2) {
      for (const char* g : {"0", "0.25", "0.5", "1/3", "1"})
        CHECK(SplitByTag(InterGamma(p, Gamma::Parse(g))) == ChannelsOf(p));
    }
  }
}

TEST_CASE("tag counts shrink as the step grows by multiples") {
  std::mt19937_64 rng(44);
  TagSet tags = TagSet::OneToMany("en", {"es", "de"});
  for (std::size_t i = 0; i < 500; ++i) {
    Utterance u = testing::RandomUtterance(rng, tags, i, 20, 4000);
    std::size_t base = InterTime(u, tags).TagCount();
    std::size_t prev = base;
    for (Millis t : {125, 250, 500, 1000, 2000}) {
      std::size_t c = InterTime(u, tags, GroupingConfig::Step(t)).TagCount();
      CHECK(c <= prev);
      prev = c;
    }
  }
}

TEST_CASE("switch count lower bound and equality") {
  std::mt19937_64 rng(55);
  TagSet tags = TagSet::OneToMany("en", {"es", "de"});
  for (std::size_t i = 0; i < 300; ++i) {
    Utterance u = testing::RandomUtterance(rng, tags, i);
    auto s = InterTime(u, tags);
    std::size_t nonempty = 0;
    for (const auto& ch : u.channels) nonempty += !ch.words.empty();
    CHECK(CountSwitches(s) >= nonempty);
    // Contiguous iff each tag appears once.
    std::set<std::string> seen;
    bool contiguous = true;
    for (const auto& t : s.tokens)
      if (IsTag(t) && !seen.insert(std::get<TagToken>(t).tag.surface).second)
        contiguous = false;
    CHECK((CountSwitches(s) == nonempty) == contiguous);
  }
}

TEST_CASE("serialize dispatches on method") {
  auto u = ExampleUtterance();
  auto tags = ExampleTags();
  CHECK(Serialize(u, tags, Method::InterTime()) == InterTime(u, tags));
  CHECK(Serialize(u, tags, Method::Grouped(500)) ==
        InterTime(u, tags, GroupingConfig::Step(500)));
  auto p = PairUtterance({"a"}, {"b"});
  CHECK(Serialize(p, testing::PairTags(), Method::InterGamma(Gamma(1, 2))) ==
        InterGamma(p, Gamma(1, 2)));
}

TEST_CASE("render text") {
  CHECK(RenderText(SerializedSequence{}).empty());
}

}  // TEST_SUITE

}  // namespace
}  // namespace tsot
