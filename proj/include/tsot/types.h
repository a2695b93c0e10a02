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

#ifndef TSOT_TYPES_H_
#define TSOT_TYPES_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tsot {

// All times are integer milliseconds.
using Millis = std::int64_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Modality { kTranscription, kTranslation };

// "asr" / "st", the on-disk spelling.
std::string_view ModalityName(Modality m);
Modality ParseModality(std::string_view name);

// A channel tag. Two tags are the same channel iff their surfaces match;
// modality and language must then agree as well.
struct Tag {
  std::string id;
  std::string surface;
  Modality modality = Modality::kTranscription;
  std::string language;

  friend bool operator==(const Tag&, const Tag&) = default;
};

// "#" + uppercase(code) + "#", e.g. MakeTag("es", kTranslation) -> "#ES#".
Tag MakeTag(std::string_view language, Modality modality);

// Ordered, validated set of tags. Declaration order is the tie-break
// priority used when serializing equal timestamps.
class TagSet {
 public:
  TagSet() = default;
  // Throws Error on empty input, duplicate ids/surfaces, or bad surfaces.
  explicit TagSet(std::vector<Tag> tags);

  const std::vector<Tag>& tags() const { return tags_; }
  std::size_t size() const { return tags_.size(); }
  bool empty() const { return tags_.empty(); }

  std::optional<std::size_t> IndexOf(std::string_view surface) const;
  const Tag* Find(std::string_view surface) const;
  bool IsTagSurface(std::string_view token) const {
    return IndexOf(token).has_value();
  }

  // #ASR# (en) followed by one translation tag per code, in order.
  static TagSet OneToMany(std::string_view source_language,
                          const std::vector<std::string>& target_languages);

 private:
  std::vector<Tag> tags_;
};

struct TimedWord {
  Millis time = 0;
  std::string word;

  friend bool operator==(const TimedWord&, const TimedWord&) = default;
};

struct Channel {
  Tag tag;
  std::vector<TimedWord> words;

  std::vector<std::string> Words() const;
  friend bool operator==(const Channel&, const Channel&) = default;
};

struct Utterance {
  std::string utt_id;
  Millis duration_ms = 0;
  std::vector<Channel> channels;

  const Channel* FindChannel(std::string_view surface) const;
  friend bool operator==(const Utterance&, const Utterance&) = default;
};

struct Diagnostic {
  std::string utt_id;
  std::string tag;  // surface, empty when not channel specific
  std::optional<std::size_t> index;
  std::optional<std::size_t> line;  // 1-based, set by file readers
  std::string message;

  std::string ToString() const;
  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

bool ContainsWhitespace(std::string_view s);

// Checks every Utterance and Channel invariant against `tags`. Never throws;
// an empty result means the utterance is valid.
std::vector<Diagnostic> ValidateUtterance(const Utterance& u,
                                          const TagSet& tags);

// Exact rational in [0, 1] for the INTER gamma baseline. Accepts "0.25",
// "1/3", "1", ".5".
class Gamma {
 public:
  Gamma() = default;
  Gamma(std::int64_t num, std::int64_t den);

  static Gamma Parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / den_; }
  // Terminating decimal when possible, otherwise "p/q".
  std::string ToString() const;

  friend bool operator==(const Gamma&, const Gamma&) = default;

 private:
  std::int64_t num_ = 1;
  std::int64_t den_ = 2;
};

struct TagToken {
  Tag tag;
  friend bool operator==(const TagToken&, const TagToken&) = default;
};

struct WordToken {
  std::string word;
  // Pre-grouping timestamp; metadata only, never rendered.
  std::optional<Millis> origin_time;
  friend bool operator==(const WordToken&, const WordToken&) = default;
};

using SerializedToken = std::variant<TagToken, WordToken>;

inline bool IsTag(const SerializedToken& t) {
  return std::holds_alternative<TagToken>(t);
}

// How a sequence was produced.
struct Method {
  enum class Kind { kInterTime, kInterGamma, kGrouped };
  Kind kind = Kind::kInterTime;
  std::optional<Gamma> gamma;      // kInterGamma
  std::optional<Millis> group_ms;  // kGrouped

  static Method InterTime() { return {}; }
  static Method Grouped(Millis step_ms) {
    return {Kind::kGrouped, std::nullopt, step_ms};
  }
  static Method InterGamma(Gamma g) {
    return {Kind::kInterGamma, g, std::nullopt};
  }

  // inter_time | grouped | inter_gamma
  std::string_view Name() const;
  // Human label, e.g. "inter_time+group500", "inter_gamma(0.5)".
  std::string Label() const;

  friend bool operator==(const Method&, const Method&) = default;
};

struct SerializedSequence {
  std::string utt_id;
  std::vector<SerializedToken> tokens;
  Method method;

  std::size_t TagCount() const;
  std::size_t WordCount() const { return tokens.size() - TagCount(); }
  friend bool operator==(const SerializedSequence&,
                         const SerializedSequence&) = default;
};

// Linear scan over the SerializedSequence invariants.
std::vector<Diagnostic> ValidateSequence(const SerializedSequence& s);

struct GroupingConfig {
  std::optional<Millis> step_ms;

  static GroupingConfig None() { return {}; }
  static GroupingConfig Step(Millis ms);
};

}  // namespace tsot

#endif  // TSOT_TYPES_H_
