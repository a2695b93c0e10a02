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

#include "tsot/types.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>
#include <set>
#include <sstream>

namespace tsot {

std::string_view ModalityName(Modality m) {
  return m == Modality::kTranscription ? "asr" : "st";
}

Modality ParseModality(std::string_view name) {
  if (name == "asr") return Modality::kTranscription;
  if (name == "st") return Modality::kTranslation;
  throw Error("unknown modality '" + std::string(name) +
              "' (expected asr or st)");
}

Tag MakeTag(std::string_view language, Modality modality) {
  std::string code = modality == Modality::kTranscription
                         ? std::string("ASR")
                         : std::string(language);
  std::transform(code.begin(), code.end(), code.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  Tag tag;
  tag.surface = "#" + code + "#";
  tag.id = tag.surface;
  tag.modality = modality;
  tag.language = std::string(language);
  return tag;
}

bool ContainsWhitespace(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
           c == '\f';
  });
}

TagSet::TagSet(std::vector<Tag> tags) : tags_(std::move(tags)) {
  if (tags_.empty()) throw Error("tag set must contain at least one tag");
  std::set<std::string_view> ids, surfaces;
  for (const auto& t : tags_) {
    if (t.surface.empty() || ContainsWhitespace(t.surface))
      throw Error("tag surface '" + t.surface +
                  "' must be non-empty and whitespace-free");
    if (!surfaces.insert(t.surface).second)
      throw Error("duplicate tag surface '" + t.surface + "'");
    if (!ids.insert(t.id).second)
      throw Error("duplicate tag id '" + t.id + "'");
  }
}

std::optional<std::size_t> TagSet::IndexOf(std::string_view surface) const {
  for (std::size_t i = 0; i < tags_.size(); ++i)
    if (tags_[i].surface == surface) return i;
  return std::nullopt;
}

const Tag* TagSet::Find(std::string_view surface) const {
  auto i = IndexOf(surface);
  return i ? &tags_[*i] : nullptr;
}

TagSet TagSet::OneToMany(std::string_view source_language,
                         const std::vector<std::string>& target_languages) {
  std::vector<Tag> tags{MakeTag(source_language, Modality::kTranscription)};
  for (const auto& lang : target_languages)
    tags.push_back(MakeTag(lang, Modality::kTranslation));
  return TagSet(std::move(tags));
}

std::vector<std::string> Channel::Words() const {
  std::vector<std::string> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(w.word);
  return out;
}

const Channel* Utterance::FindChannel(std::string_view surface) const {
  for (const auto& c : channels)
    if (c.tag.surface == surface) return &c;
  return nullptr;
}

std::string Diagnostic::ToString() const {
  std::ostringstream os;
  if (line) os << "line " << *line << ": ";
  os << "utt=" << (utt_id.empty() ? "-" : utt_id);
  if (!tag.empty()) os << " tag=" << tag;
  if (index) os << " index=" << *index;
  os << ": " << message;
  return os.str();
}

std::vector<Diagnostic> ValidateUtterance(const Utterance& u,
                                          const TagSet& tags) {
  std::vector<Diagnostic> out;
  auto report = [&](std::string tag, std::optional<std::size_t> index,
                    std::string message) {
    out.push_back({u.utt_id, std::move(tag), index, std::nullopt,
                   std::move(message)});
  };

  if (u.utt_id.empty()) report("", std::nullopt, "empty utt_id");
  if (u.duration_ms <= 0)
    report("", std::nullopt,
           "duration_ms must be positive, got " +
               std::to_string(u.duration_ms));
  if (u.channels.empty()) report("", std::nullopt, "no channels");

  std::set<std::string_view> seen;
  for (std::size_t c = 0; c < u.channels.size(); ++c) {
    const Channel& ch = u.channels[c];
    const std::string& surface = ch.tag.surface;
    if (!seen.insert(surface).second)
      report(surface, c, "duplicate channel tag");
    const Tag* declared = tags.Find(surface);
    if (declared == nullptr) {
      report(surface, c, "tag not in tag set");
    } else if (declared->modality != ch.tag.modality ||
               declared->language != ch.tag.language) {
      report(surface, c, "modality/language disagree with tag set");
    }
    for (std::size_t i = 0; i < ch.words.size(); ++i) {
      const TimedWord& w = ch.words[i];
      if (w.time < 0)
        report(surface, i, "negative time " + std::to_string(w.time));
      if (w.word.empty()) {
        report(surface, i, "empty word");
      } else if (ContainsWhitespace(w.word)) {
        report(surface, i, "word contains whitespace");
      } else if (tags.IsTagSurface(w.word)) {
        report(surface, i, "word '" + w.word + "' collides with a tag");
      }
      if (i > 0 && w.time < ch.words[i - 1].time)
        report(surface, i,
               "non-monotone channel: " + std::to_string(w.time) + " after " +
                   std::to_string(ch.words[i - 1].time));
    }
  }
  return out;
}

namespace {

constexpr std::int64_t kMaxDen = 1'000'000'000'000'000'000;

std::int64_t ParseInt(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size() || v < 0)
    throw Error("invalid gamma '" + std::string(whole) + "'");
  return v;
}

}  // namespace

Gamma::Gamma(std::int64_t num, std::int64_t den) {
  if (den <= 0 || num < 0 || num > den)
    throw Error("gamma must be a rational in [0, 1], got " +
                std::to_string(num) + "/" + std::to_string(den));
  std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

Gamma Gamma::Parse(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return Gamma(ParseInt(text.substr(0, slash), text),
                 ParseInt(text.substr(slash + 1), text));
  }
  auto dot = text.find('.');
  for (std::size_t i = 0; i < text.size(); ++i)
    if (i != dot && (text[i] < '0' || text[i] > '9'))
      throw Error("invalid gamma '" + std::string(text) + "'");
  std::string_view int_part = text.substr(0, dot);
  std::string_view frac_part =
      dot == std::string_view::npos ? std::string_view() : text.substr(dot + 1);
  if (int_part.empty() && frac_part.empty())
    throw Error("invalid gamma '" + std::string(text) + "'");
  while (!frac_part.empty() && frac_part.back() == '0')
    frac_part.remove_suffix(1);
  if (frac_part.size() > 17)
    throw Error("gamma '" + std::string(text) + "' has too many digits");
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
  std::int64_t whole = int_part.empty() ? 0 : ParseInt(int_part, text);
  if (whole > 1) throw Error("gamma '" + std::string(text) + "' exceeds 1");
  std::int64_t frac = frac_part.empty() ? 0 : ParseInt(frac_part, text);
  return Gamma(whole * den + frac, den);
}

std::string Gamma::ToString() const {
  if (num_ == 0) return "0";
  if (num_ == den_) return "1";
  std::int64_t scale = 1;
  int digits = 0;
  while (scale % den_ != 0 && scale < kMaxDen / 10) {
    scale *= 10;
    ++digits;
  }
  if (scale % den_ != 0)
    return std::to_string(num_) + "/" + std::to_string(den_);
  std::string frac = std::to_string(num_ * (scale / den_));
  frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
  return "0." + frac;
}

std::string_view Method::Name() const {
  switch (kind) {
    case Kind::kInterTime:
      return "inter_time";
    case Kind::kGrouped:
      return "grouped";
    case Kind::kInterGamma:
      return "inter_gamma";
  }
  return "inter_time";
}

std::string Method::Label() const {
  switch (kind) {
    case Kind::kGrouped:
      return "inter_time+group" + std::to_string(group_ms.value_or(0));
    case Kind::kInterGamma:
      return "inter_gamma(" + (gamma ? gamma->ToString() : std::string("?")) +
             ")";
    case Kind::kInterTime:
      break;
  }
  return "inter_time";
}

std::size_t SerializedSequence::TagCount() const {
  return static_cast<std::size_t>(
      std::count_if(tokens.begin(), tokens.end(), IsTag));
}

std::vector<Diagnostic> ValidateSequence(const SerializedSequence& s) {
  std::vector<Diagnostic> out;
  auto report = [&](std::size_t i, std::string tag, std::string message) {
    out.push_back({s.utt_id, std::move(tag), i, std::nullopt,
                   std::move(message)});
  };
  const Tag* prev = nullptr;
  bool prev_was_tag = false;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    if (const auto* tag = std::get_if<TagToken>(&s.tokens[i])) {
      if (prev_was_tag) report(i, tag->tag.surface, "adjacent tags");
      if (prev != nullptr && prev->surface == tag->tag.surface)
        report(i, tag->tag.surface, "redundant tag");
      prev = &tag->tag;
      prev_was_tag = true;
      continue;
    }
    const auto& word = std::get<WordToken>(s.tokens[i]);
    if (prev == nullptr) report(i, "", "untagged word");
    if (word.word.empty() || ContainsWhitespace(word.word))
      report(i, prev ? prev->surface : "", "malformed word");
    prev_was_tag = false;
  }
  return out;
}

GroupingConfig GroupingConfig::Step(Millis ms) {
  if (ms < 1) throw Error("group step must be >= 1 ms");
  return {ms};
}

}  // namespace tsot
