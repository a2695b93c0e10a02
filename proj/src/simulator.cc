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

#include "tsot/simulator.h"

#include <algorithm>
#include <cstdio>
#include <random>

#include "tsot/demux.h"
#include "tsot/parallel.h"
#include "tsot/serializer.h"

namespace tsot {

namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Bounded draws done by hand: std::uniform_int_distribution is not
// specified bit-for-bit, and corpora must be identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::int64_t Uniform(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return lo + static_cast<std::int64_t>(engine_());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }
  std::int64_t Uniform(const IntRange& r) { return Uniform(r.min, r.max); }

 private:
  std::mt19937_64 engine_;
};

void CheckRange(const IntRange& r, const char* name) {
  if (r.min < 0 || r.max < r.min)
    throw Error(std::string("synth config: range ") + name + " [" +
                std::to_string(r.min) + ", " + std::to_string(r.max) +
                "] must be non-empty and non-negative");
}

std::vector<Millis> Timeline(Rng& rng, std::size_t n, const IntRange& gap) {
  std::vector<Millis> times(n);
  Millis t = rng.Uniform(0, gap.max);
  for (std::size_t i = 0; i < n; ++i) {
    times[i] = t;
    t += rng.Uniform(gap);
  }
  return times;
}

std::string MakeWord(Rng& rng, const Tag& tag, std::size_t vocab) {
  std::string w = tag.language.empty() ? std::string("w") : tag.language;
  w += std::to_string(rng.Uniform(0, static_cast<std::int64_t>(vocab) - 1));
  return w;
}

}  // namespace

void SynthConfig::Validate() const {
  if (channels.empty()) throw Error("synth config: empty channel plan");
  TagSet check(channels);  // throws on duplicate or malformed surfaces
  CheckRange(words_per_channel, "words_per_channel");
  CheckRange(word_gap_ms, "word_gap_ms");
  CheckRange(lag_ms, "lag_ms");
  if (reorder_window_ms < 0)
    throw Error("synth config: reorder_window_ms must be >= 0");
  if (channels_per_utterance != IntRange{0, 0}) {
    CheckRange(channels_per_utterance, "channels_per_utterance");
    if (channels_per_utterance.min < 1 ||
        channels_per_utterance.max > static_cast<std::int64_t>(channels.size()))
      throw Error("synth config: channels_per_utterance must lie in [1, " +
                  std::to_string(channels.size()) + "]");
  }
  if (vocab_size == 0) throw Error("synth config: vocab_size must be >= 1");
  for (const auto& tag : channels) {
    if (ContainsWhitespace(tag.language))
      throw Error("synth config: language '" + tag.language +
                  "' contains whitespace");
  }
}

Utterance SynthUtterance(const SynthConfig& config, std::size_t index) {
  Rng rng(SplitMix64(SplitMix64(config.seed) ^ static_cast<std::uint64_t>(index)));

  std::vector<std::size_t> picked(config.channels.size());
  for (std::size_t i = 0; i < picked.size(); ++i) picked[i] = i;
  if (config.channels_per_utterance != IntRange{0, 0}) {
    auto k = static_cast<std::size_t>(rng.Uniform(config.channels_per_utterance));
    for (std::size_t i = 0; i < k; ++i) {
      auto j = static_cast<std::size_t>(
          rng.Uniform(static_cast<std::int64_t>(i),
                      static_cast<std::int64_t>(picked.size()) - 1));
      std::swap(picked[i], picked[j]);
    }
    picked.resize(k);
    std::sort(picked.begin(), picked.end());
  }

  auto n_source = static_cast<std::size_t>(rng.Uniform(config.words_per_channel));
  std::vector<Millis> source = Timeline(rng, n_source, config.word_gap_ms);
  Millis end = source.empty() ? 0 : source.back();

  Utterance u;
  char id[64];
  std::snprintf(id, sizeof(id), "-%llu-%06zu",
                static_cast<unsigned long long>(config.seed), index);
  u.utt_id = config.utt_prefix + id;

  bool source_used = false;
  for (std::size_t c : picked) {
    Channel ch;
    ch.tag = config.channels[c];
    std::vector<Millis> times;
    if (ch.tag.modality == Modality::kTranscription) {
      if (!source_used) {
        times = source;
        source_used = true;
      } else {
        auto n = static_cast<std::size_t>(rng.Uniform(config.words_per_channel));
        times = Timeline(rng, n, config.word_gap_ms);
      }
    } else {
      auto m = static_cast<std::size_t>(rng.Uniform(config.words_per_channel));
      std::vector<Millis> anchors =
          source.empty() ? Timeline(rng, m, config.word_gap_ms) : source;
      times.reserve(m);
      for (std::size_t k = 0; k < m; ++k) {
        std::size_t a = std::min(anchors.size() - 1, k * anchors.size() / m);
        Millis t = anchors[a] + rng.Uniform(config.lag_ms) +
                   rng.Uniform(0, config.reorder_window_ms);
        times.push_back(t);
      }
      std::sort(times.begin(), times.end());
    }
    for (Millis t : times) ch.words.push_back({t, MakeWord(rng, ch.tag, config.vocab_size)});
    if (!times.empty() && ch.tag.modality == Modality::kTranscription)
      end = std::max(end, times.back());
    u.channels.push_back(std::move(ch));
  }
  u.duration_ms = std::max<Millis>(1, end + rng.Uniform(config.word_gap_ms));
  return u;
}

std::vector<Utterance> SynthCorpus(const SynthConfig& config) {
  config.Validate();
  std::vector<Utterance> corpus;
  corpus.reserve(config.num_utterances);
  for (std::size_t i = 0; i < config.num_utterances; ++i)
    corpus.push_back(SynthUtterance(config, i));
  return corpus;
}

std::vector<EmissionTrace> Replay(const SerializedSequence& s,
                                  const TagSet& tags,
                                  const ReplayPolicy& policy,
                                  Millis source_duration_ms) {
  std::optional<Millis> step;
  if (policy.mode == ReplayPolicy::Mode::kGroupBoundary) {
    if (s.method.kind != Method::Kind::kGrouped || !s.method.group_ms)
      throw Error("utterance " + s.utt_id +
                  ": group-boundary replay needs a grouped sequence");
    step = s.method.group_ms;
  }
  if (policy.overhead_ms < 0) throw Error("replay overhead must be >= 0");

  std::vector<EmissionTrace> traces(tags.size());
  Demuxer demux(tags, s.utt_id);
  for (const auto& token : s.tokens) {
    auto event = demux.Feed(token);
    if (!event) continue;
    if (!event->emission_time)
      throw Error("utterance " + s.utt_id + ": word '" + event->word +
                  "' has no origin_time");
    auto slot = tags.IndexOf(event->tag);
    if (!slot)
      throw Error("utterance " + s.utt_id + ": word '" + event->word +
                  "' is not routed to a known channel");
    Millis base = *event->emission_time;
    if (step) base = AssignGroup(base, *step);
    Millis delay =
        base + policy.overhead_ms * static_cast<Millis>(event->token_index);
    traces[*slot].points.push_back({event->token_index, delay});
  }

  std::vector<EmissionTrace> out;
  for (std::size_t k = 0; k < traces.size(); ++k) {
    if (traces[k].points.empty()) continue;
    EmissionTrace t = std::move(traces[k]);
    t.utt_id = s.utt_id;
    t.tag = tags.tags()[k].surface;
    t.source_duration_ms = source_duration_ms;
    t.ref_len = t.points.size();
    out.push_back(std::move(t));
  }
  return out;
}

StudyReport LatencyStudy(const std::vector<Utterance>& corpus,
                         const TagSet& tags,
                         const std::vector<Method>& methods,
                         const ReplayPolicy& policy, std::size_t jobs) {
  struct Cell {
    bool skipped = false;
    std::size_t switches = 0;
    std::vector<EmissionTrace> traces;
  };

  StudyReport report;
  for (const auto& method : methods) {
    ReplayPolicy effective = policy;
    if (method.kind != Method::Kind::kGrouped)
      effective.mode = ReplayPolicy::Mode::kOriginTime;

    std::vector<Cell> cells(corpus.size());
    ParallelFor(corpus.size(), jobs, [&](std::size_t i) {
      const Utterance& u = corpus[i];
      if (method.kind == Method::Kind::kInterGamma) {
        std::size_t asr = 0, st = 0;
        for (const auto& ch : u.channels)
          (ch.tag.modality == Modality::kTranscription ? asr : st) += 1;
        if (asr != 1 || st != 1) {
          cells[i].skipped = true;
          return;
        }
      }
      SerializedSequence s = Serialize(u, tags, method);
      cells[i].switches = CountSwitches(s);
      cells[i].traces = Replay(s, tags, effective, u.duration_ms);
    });

    std::size_t serialized = 0, skipped = 0, switches = 0;
    for (const auto& c : cells) {
      if (c.skipped) {
        ++skipped;
      } else {
        ++serialized;
        switches += c.switches;
      }
    }
    const double mean_switches =
        serialized == 0 ? 0.0
                        : static_cast<double>(switches) /
                              static_cast<double>(serialized);

    for (const auto& tag : tags.tags()) {
      StudyRow row;
      row.method = method.Label();
      row.tag = tag.surface;
      row.utterances = serialized;
      row.skipped = skipped;
      row.mean_switches = mean_switches;
      double laal_sum = 0.0, delay_sum = 0.0;
      std::size_t words = 0;
      for (const auto& c : cells) {
        for (const auto& t : c.traces) {
          if (t.tag != tag.surface) continue;
          ++row.traces;
          laal_sum += Laal(t);
          for (const auto& p : t.points) delay_sum += static_cast<double>(p.delay_ms);
          words += t.points.size();
        }
      }
      if (row.traces > 0)
        row.mean_laal_ms = laal_sum / static_cast<double>(row.traces);
      if (words > 0) row.mean_delay_ms = delay_sum / static_cast<double>(words);
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace tsot
