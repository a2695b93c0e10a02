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

#include "tsot/metrics.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <unordered_map>

namespace tsot {

EditCounts& EditCounts::operator+=(const EditCounts& o) {
  substitutions += o.substitutions;
  insertions += o.insertions;
  deletions += o.deletions;
  ref_len += o.ref_len;
  return *this;
}

EditCounts AlignCounts(const Words& reference, const Words& hypothesis) {
  const std::size_t m = reference.size(), n = hypothesis.size();
  std::vector<std::size_t> cost((m + 1) * (n + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& {
    return cost[i * (n + 1) + j];
  };
  for (std::size_t i = 0; i <= m; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= n; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      std::size_t diag =
          at(i - 1, j - 1) + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  EditCounts counts;
  counts.ref_len = m;
  std::size_t i = m, j = n;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      bool same = reference[i - 1] == hypothesis[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
        if (!same) ++counts.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ++counts.deletions;
      --i;
    } else {
      ++counts.insertions;
      --j;
    }
  }
  return counts;
}

double Wer(const Words& reference, const Words& hypothesis) {
  if (reference.empty()) throw Error("WER is undefined for an empty reference");
  return static_cast<double>(AlignCounts(reference, hypothesis).errors()) /
         static_cast<double>(reference.size());
}

Words NormalizeWords(const Words& words) {
  Words out;
  for (const auto& w : words) {
    std::string norm;
    for (unsigned char c : w) {
      if (std::ispunct(c)) continue;
      norm.push_back(static_cast<char>(std::tolower(c)));
    }
    if (!norm.empty()) out.push_back(std::move(norm));
  }
  return out;
}

namespace {

using NgramCounts = std::unordered_map<std::string, std::size_t>;

// N-gram keys join words with U+001F.
NgramCounts CountNgrams(const Words& words, int n) {
  NgramCounts counts;
  if (words.size() < static_cast<std::size_t>(n)) return counts;
  for (std::size_t i = 0; i + n <= words.size(); ++i) {
    std::string key = words[i];
    for (int k = 1; k < n; ++k) {
      key.push_back('\x1f');
      key += words[i + k];
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

double BleuStats::precision(int n) const {
  std::size_t t = totals[n - 1];
  return t == 0 ? 0.0 : static_cast<double>(matches[n - 1]) / t;
}

BleuStats BleuCorpus(std::span<const Words> references,
                     std::span<const Words> hypotheses, bool smooth) {
  if (references.size() != hypotheses.size())
    throw Error("BLEU needs as many hypotheses (" +
                std::to_string(hypotheses.size()) + ") as references (" +
                std::to_string(references.size()) + ")");
  if (references.empty()) throw Error("BLEU needs at least one segment");

  BleuStats stats;
  for (std::size_t s = 0; s < references.size(); ++s) {
    stats.hyp_len += hypotheses[s].size();
    stats.ref_len += references[s].size();
    for (int n = 1; n <= kBleuMaxOrder; ++n) {
      NgramCounts hyp = CountNgrams(hypotheses[s], n);
      NgramCounts ref = CountNgrams(references[s], n);
      for (const auto& [gram, count] : hyp) {
        auto it = ref.find(gram);
        std::size_t clip = it == ref.end() ? 0 : it->second;
        stats.matches[n - 1] += std::min(count, clip);
        stats.totals[n - 1] += count;
      }
    }
  }
  if (smooth) {
    for (int n = 0; n < kBleuMaxOrder; ++n) {
      ++stats.matches[n];
      ++stats.totals[n];
    }
  }

  if (stats.hyp_len == 0) return stats;
  stats.brevity_penalty =
      stats.hyp_len > stats.ref_len
          ? 1.0
          : std::exp(1.0 - static_cast<double>(stats.ref_len) /
                               static_cast<double>(stats.hyp_len));

  double log_sum = 0.0;
  for (int n = 1; n <= kBleuMaxOrder; ++n) {
    if (stats.totals[n - 1] == 0) break;
    if (stats.matches[n - 1] == 0) {
      stats.order = n;
      return stats;  // zero precision, score stays 0
    }
    log_sum += std::log(stats.precision(n));
    stats.order = n;
  }
  stats.score =
      100.0 * stats.brevity_penalty * std::exp(log_sum / stats.order);
  return stats;
}

double Laal(const EmissionTrace& trace) {
  if (trace.points.empty())
    throw Error("LAAL of an empty trace (utt " + trace.utt_id + ", tag " +
                trace.tag + ")");
  if (trace.source_duration_ms < 1)
    throw Error("LAAL needs a positive source duration (utt " + trace.utt_id +
                ")");
  const double source = static_cast<double>(trace.source_duration_ms);
  const std::size_t hyp_len = trace.points.size();
  const double ideal_step =
      source / static_cast<double>(std::max(trace.ref_len, hyp_len));

  std::size_t cutoff = hyp_len;
  for (std::size_t i = 0; i < hyp_len; ++i) {
    if (trace.points[i].delay_ms >= trace.source_duration_ms) {
      cutoff = i + 1;
      break;
    }
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < cutoff; ++i)
    sum += static_cast<double>(trace.points[i].delay_ms) -
           static_cast<double>(i) * ideal_step;
  return sum / static_cast<double>(cutoff);
}

std::size_t CountSwitches(const SerializedSequence& s) { return s.TagCount(); }

double SwitchReduction(std::span<const SwitchCount> base,
                       std::span<const SwitchCount> variant) {
  std::map<std::string_view, std::size_t> variant_by_id;
  for (const auto& v : variant) {
    if (!variant_by_id.emplace(v.utt_id, v.tags).second)
      throw Error("duplicate utt_id " + v.utt_id + " in variant corpus");
  }
  if (base.size() != variant.size())
    throw Error("base and variant corpora differ in size (" +
                std::to_string(base.size()) + " vs " +
                std::to_string(variant.size()) + ")");
  std::size_t base_total = 0, variant_total = 0;
  for (const auto& b : base) {
    auto it = variant_by_id.find(b.utt_id);
    if (it == variant_by_id.end())
      throw Error("utt_id " + b.utt_id + " missing from variant corpus");
    base_total += b.tags;
    variant_total += it->second;
  }
  if (base_total == 0) throw Error("base corpus contains no tags");
  return 1.0 - static_cast<double>(variant_total) /
                   static_cast<double>(base_total);
}

double SwitchReduction(std::span<const SerializedSequence> base,
                       std::span<const SerializedSequence> variant) {
  auto counts = [](std::span<const SerializedSequence> corpus) {
    std::vector<SwitchCount> out;
    out.reserve(corpus.size());
    for (const auto& s : corpus) out.push_back({s.utt_id, CountSwitches(s)});
    return out;
  };
  auto b = counts(base), v = counts(variant);
  return SwitchReduction(std::span<const SwitchCount>(b),
                         std::span<const SwitchCount>(v));
}

std::vector<LatencyRow> SummarizeLatency(
    std::span<const EmissionTrace> traces) {
  std::vector<LatencyRow> rows;
  std::vector<double> sums;
  for (const auto& t : traces) {
    auto it = std::find_if(rows.begin(), rows.end(),
                           [&](const LatencyRow& r) { return r.tag == t.tag; });
    std::size_t k = static_cast<std::size_t>(it - rows.begin());
    if (it == rows.end()) {
      rows.push_back({t.tag, 0, 0.0});
      sums.push_back(0.0);
    }
    sums[k] += Laal(t);
    ++rows[k].traces;
  }
  for (std::size_t k = 0; k < rows.size(); ++k)
    rows[k].mean_laal_ms = sums[k] / static_cast<double>(rows[k].traces);
  return rows;
}

const ChannelReport* MetricReport::Find(std::string_view tag) const {
  for (const auto& c : channels)
    if (c.tag == tag) return &c;
  return nullptr;
}

MetricReport EvaluateCorpus(std::span<const Utterance> references,
                            std::span<const DemuxResult> hypotheses,
                            const std::vector<EmissionTrace>* traces,
                            const EvalOptions& options) {
  std::map<std::string_view, const DemuxResult*> hyp_by_id;
  for (const auto& h : hypotheses) {
    if (!hyp_by_id.emplace(h.utt_id, &h).second)
      throw Error("duplicate hypothesis for utt_id " + h.utt_id);
  }
  std::map<std::string_view, bool> ref_ids;
  for (const auto& r : references) {
    if (!ref_ids.emplace(r.utt_id, true).second)
      throw Error("duplicate reference utt_id " + r.utt_id);
    if (!hyp_by_id.count(r.utt_id))
      throw Error("no hypothesis for utt_id " + r.utt_id);
  }
  for (const auto& h : hypotheses) {
    if (!ref_ids.count(h.utt_id))
      throw Error("hypothesis utt_id " + h.utt_id + " has no reference");
  }

  MetricReport report;
  report.utterances = references.size();
  struct Pending {
    std::vector<Words> refs, hyps;
  };
  std::vector<Pending> bleu_segments;

  auto channel_slot = [&](const Tag& tag) -> std::size_t {
    for (std::size_t k = 0; k < report.channels.size(); ++k)
      if (report.channels[k].tag == tag.surface) return k;
    report.channels.push_back({tag.surface, tag.modality});
    bleu_segments.emplace_back();
    return report.channels.size() - 1;
  };

  for (const auto& ref : references) {
    const DemuxResult& hyp = *hyp_by_id.at(ref.utt_id);
    report.total_tags += hyp.tag_count;
    report.total_diagnostics += hyp.diagnostics.size();
    for (const auto& ch : ref.channels) {
      std::size_t k = channel_slot(ch.tag);
      ChannelReport& row = report.channels[k];
      ++row.utterances;
      Words ref_words = ch.Words();
      const DemuxedChannel* got = hyp.Find(ch.tag.surface);
      Words hyp_words = got ? got->words : Words{};
      if (ch.tag.modality == Modality::kTranscription) {
        if (options.normalize) {
          ref_words = NormalizeWords(ref_words);
          hyp_words = NormalizeWords(hyp_words);
        }
        row.edits += AlignCounts(ref_words, hyp_words);
      } else {
        bleu_segments[k].refs.push_back(std::move(ref_words));
        bleu_segments[k].hyps.push_back(std::move(hyp_words));
      }
    }
  }

  for (std::size_t k = 0; k < report.channels.size(); ++k) {
    ChannelReport& row = report.channels[k];
    if (row.modality == Modality::kTranscription) {
      if (row.edits.ref_len == 0)
        throw Error("channel " + row.tag +
                    ": WER undefined, no reference words in corpus");
      row.wer = static_cast<double>(row.edits.errors()) /
                static_cast<double>(row.edits.ref_len);
    } else {
      row.bleu = BleuCorpus(bleu_segments[k].refs, bleu_segments[k].hyps,
                            options.smooth_bleu);
    }
  }

  if (traces != nullptr) {
    for (const auto& t : *traces) {
      if (!ref_ids.count(t.utt_id))
        throw Error("trace for unknown utt_id " + t.utt_id);
    }
    for (auto& latency : SummarizeLatency(*traces)) {
      auto it = std::find_if(
          report.channels.begin(), report.channels.end(),
          [&](const ChannelReport& c) { return c.tag == latency.tag; });
      if (it == report.channels.end())
        throw Error("trace tag " + latency.tag + " not in references");
      it->latency = latency;
    }
  }
  return report;
}

}  // namespace tsot
