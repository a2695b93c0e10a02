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

#include "tsot/io.h"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tsot/serializer.h"

namespace tsot {

using Json = nlohmann::ordered_json;

namespace {

Json ParseJson(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::exception& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
}

template <typename T>
T Get(const Json& obj, const char* key) {
  if (!obj.is_object()) throw Error("expected a JSON object");
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(std::string("missing key \"") + key + "\"");
  try {
    if constexpr (std::is_unsigned_v<T>) {
      if (!it->is_number_unsigned())
        throw Error(std::string("key \"") + key +
                    "\" must be a non-negative integer");
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer())
        throw Error(std::string("key \"") + key + "\" must be an integer");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!it->is_string())
        throw Error(std::string("key \"") + key + "\" must be a string");
    }
    return it->get<T>();
  } catch (const Json::exception& e) {
    throw Error(std::string("key \"") + key + "\": " + e.what());
  }
}

const Json& GetArray(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_array())
    throw Error(std::string("key \"") + key + "\" must be an array");
  return *it;
}

void CheckVersion(const Json& obj) {
  if (!obj.is_object()) throw Error("expected a JSON object");
  auto v = Get<std::int64_t>(obj, "v");
  if (v != kFormatVersion)
    throw Error("unsupported format version " + std::to_string(v));
}

std::string Dump(const Json& j) {
  return j.dump(-1, ' ', false, Json::error_handler_t::strict);
}

bool IsBlank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

// Calls fn(line, line_number) for each non-blank line; exceptions become
// diagnostics. Non-UTF-8 input is fatal.
template <typename T, typename Fn>
ReadResult<T> ParseLines(std::string_view text, Fn&& fn) {
  ReadResult<T> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (IsBlank(line)) continue;
    if (!IsValidUtf8(line))
      throw Error("line " + std::to_string(line_no) + ": input is not UTF-8");
    try {
      fn(out, line, line_no);
    } catch (const Error& e) {
      out.diagnostics.push_back(
          {"", "", std::nullopt, line_no, e.what()});
    }
  }
  return out;
}

std::string WithPath(const std::string& path, const Error& e) {
  return path + ": " + e.what();
}

// Text helpers for aligned tables.
class Table {
 public:
  explicit Table(std::vector<std::string> header) {
    rows_.push_back(std::move(header));
  }
  void Add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  std::string Render() const {
    std::vector<std::size_t> width;
    for (const auto& row : rows_) {
      width.resize(std::max(width.size(), row.size()));
      for (std::size_t c = 0; c < row.size(); ++c)
        width[c] = std::max(width[c], row[c].size());
    }
    std::string out;
    for (const auto& row : rows_) {
      std::string line;
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c > 0) line += "  ";
        std::string cell = row[c];
        if (c > 0) cell.insert(0, width[c] - cell.size(), ' ');
        else cell.append(width[c] - cell.size(), ' ');
        line += cell;
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out += line + "\n";
    }
    return out;
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::string Fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

bool IsValidUtf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t len;
    std::uint32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong forms, surrogates and out-of-range code points.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
        (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
        (cp >= 0xD800 && cp <= 0xDFFF))
      return false;
    i += len;
  }
  return true;
}

std::string ReadFile(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin),
                       std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(path + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(path + ": read failed");
  return ss.str();
}

void WriteFile(const std::string& path, std::string_view contents) {
  if (path == "-") {
    std::cout.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    std::cout.flush();
    if (!std::cout) throw Error("stdout: write failed");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(path + ": cannot open for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) throw Error(path + ": write failed");
}

// ---- tag set ----

namespace {

Tag TagFromJson(const Json& j) {
  Tag tag;
  tag.surface = Get<std::string>(j, "surface");
  tag.id = j.contains("id") ? Get<std::string>(j, "id") : tag.surface;
  tag.modality = ParseModality(Get<std::string>(j, "modality"));
  tag.language = Get<std::string>(j, "lang");
  return tag;
}

Json TagToJson(const Tag& t) {
  Json j;
  j["id"] = t.id;
  j["surface"] = t.surface;
  j["modality"] = ModalityName(t.modality);
  j["lang"] = t.language;
  return j;
}

}  // namespace

TagSet ParseTagSet(std::string_view json_text) {
  Json j = ParseJson(json_text);
  CheckVersion(j);
  std::vector<Tag> tags;
  for (const auto& t : GetArray(j, "tags")) tags.push_back(TagFromJson(t));
  return TagSet(std::move(tags));
}

TagSet ReadTagSet(const std::string& path) {
  try {
    return ParseTagSet(ReadFile(path));
  } catch (const Error& e) {
    if (std::string_view(e.what()).starts_with(path)) throw;
    throw Error(WithPath(path, e));
  }
}

std::string TagSetToJson(const TagSet& tags) {
  Json j;
  j["v"] = kFormatVersion;
  j["tags"] = Json::array();
  for (const auto& t : tags.tags()) j["tags"].push_back(TagToJson(t));
  return Dump(j) + "\n";
}

// ---- corpus ----

std::string UtteranceToJson(const Utterance& u) {
  Json j;
  j["v"] = kFormatVersion;
  j["utt_id"] = u.utt_id;
  j["duration_ms"] = u.duration_ms;
  j["channels"] = Json::array();
  for (const auto& ch : u.channels) {
    Json c;
    c["tag"] = ch.tag.surface;
    c["modality"] = ModalityName(ch.tag.modality);
    c["lang"] = ch.tag.language;
    c["words"] = Json::array();
    for (const auto& w : ch.words) {
      Json word;
      word["t"] = w.time;
      word["w"] = w.word;
      c["words"].push_back(std::move(word));
    }
    j["channels"].push_back(std::move(c));
  }
  return Dump(j);
}

Utterance ParseUtterance(std::string_view line) {
  Json j = ParseJson(line);
  CheckVersion(j);
  Utterance u;
  u.utt_id = Get<std::string>(j, "utt_id");
  u.duration_ms = Get<Millis>(j, "duration_ms");
  for (const auto& c : GetArray(j, "channels")) {
    Channel ch;
    ch.tag.surface = Get<std::string>(c, "tag");
    ch.tag.id = ch.tag.surface;
    ch.tag.modality = ParseModality(Get<std::string>(c, "modality"));
    ch.tag.language = Get<std::string>(c, "lang");
    for (const auto& w : GetArray(c, "words"))
      ch.words.push_back({Get<Millis>(w, "t"), Get<std::string>(w, "w")});
    u.channels.push_back(std::move(ch));
  }
  return u;
}

ReadResult<Utterance> ParseCorpus(std::string_view text, const TagSet* tags) {
  std::set<std::string> seen;
  return ParseLines<Utterance>(
      text, [&](ReadResult<Utterance>& out, std::string_view line,
                std::size_t line_no) {
        Utterance u = ParseUtterance(line);
        std::vector<Diagnostic> issues;
        if (tags != nullptr) {
          for (auto& ch : u.channels)
            if (const Tag* declared = tags->Find(ch.tag.surface))
              ch.tag.id = declared->id;
          issues = ValidateUtterance(u, *tags);
        } else {
          std::vector<Tag> own;
          std::set<std::string_view> surfaces;
          for (const auto& ch : u.channels)
            if (surfaces.insert(ch.tag.surface).second) own.push_back(ch.tag);
          if (own.empty()) {
            issues.push_back({u.utt_id, "", std::nullopt, std::nullopt,
                              "no channels"});
          } else {
            try {
              issues = ValidateUtterance(u, TagSet(own));
            } catch (const Error& e) {
              issues.push_back(
                  {u.utt_id, "", std::nullopt, std::nullopt, e.what()});
            }
          }
        }
        if (issues.empty() && !seen.insert(u.utt_id).second)
          issues.push_back({u.utt_id, "", std::nullopt, std::nullopt,
                            "duplicate utt_id"});
        if (!issues.empty()) {
          for (auto& d : issues) {
            d.line = line_no;
            out.diagnostics.push_back(std::move(d));
          }
          return;
        }
        out.items.push_back(std::move(u));
      });
}

ReadResult<Utterance> ReadCorpus(const std::string& path, const TagSet* tags) {
  std::string text = ReadFile(path);
  try {
    return ParseCorpus(text, tags);
  } catch (const Error& e) {
    throw Error(WithPath(path, e));
  }
}

std::string CorpusToJsonl(const std::vector<Utterance>& corpus) {
  std::string out;
  for (const auto& u : corpus) out += UtteranceToJson(u) + "\n";
  return out;
}

void WriteCorpus(const std::vector<Utterance>& corpus,
                 const std::string& path) {
  WriteFile(path, CorpusToJsonl(corpus));
}

// ---- serialized records ----

SerializedRecord ToRecord(const SerializedSequence& s) {
  SerializedRecord r;
  r.utt_id = s.utt_id;
  r.method = s.method;
  r.tokens.reserve(s.tokens.size());
  std::vector<std::optional<Millis>> times;
  times.reserve(s.tokens.size());
  bool any_time = false;
  for (const auto& token : s.tokens) {
    if (const auto* tag = std::get_if<TagToken>(&token)) {
      r.tokens.push_back(tag->tag.surface);
      times.emplace_back();
    } else {
      const auto& word = std::get<WordToken>(token);
      r.tokens.push_back(word.word);
      times.push_back(word.origin_time);
      any_time = any_time || word.origin_time.has_value();
    }
  }
  if (any_time) r.origin_times = std::move(times);
  return r;
}

SerializedSequence ToSequence(const SerializedRecord& r, const TagSet& tags) {
  SerializedSequence s;
  s.utt_id = r.utt_id;
  s.method = r.method;
  for (std::size_t i = 0; i < r.tokens.size(); ++i) {
    const std::string& text = r.tokens[i];
    if (const Tag* tag = tags.Find(text)) {
      s.tokens.emplace_back(TagToken{*tag});
      continue;
    }
    if (LooksLikeTag(text))
      throw Error("utterance " + r.utt_id + ": unknown tag " + text +
                  " at token " + std::to_string(i));
    if (text.empty() || ContainsWhitespace(text))
      throw Error("utterance " + r.utt_id + ": malformed token " +
                  std::to_string(i));
    std::optional<Millis> t;
    if (r.origin_times) t = (*r.origin_times)[i];
    s.tokens.emplace_back(WordToken{text, t});
  }
  return s;
}

std::vector<RawToken> RecordTokens(const SerializedRecord& r) {
  std::vector<RawToken> out;
  out.reserve(r.tokens.size());
  for (std::size_t i = 0; i < r.tokens.size(); ++i)
    out.push_back({r.tokens[i],
                   r.origin_times ? (*r.origin_times)[i] : std::nullopt});
  return out;
}

std::string RenderText(const SerializedRecord& r) {
  std::string out;
  for (std::size_t i = 0; i < r.tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += r.tokens[i];
  }
  return out;
}

std::string MethodToJson(const Method& m) {
  Json j;
  j["name"] = m.Name();
  if (m.kind == Method::Kind::kInterGamma && m.gamma)
    j["gamma"] = m.gamma->ToString();
  if (m.kind == Method::Kind::kGrouped && m.group_ms)
    j["group_ms"] = *m.group_ms;
  return Dump(j);
}

namespace {

Method MethodFromJson(const Json& j) {
  std::string name = Get<std::string>(j, "name");
  if (name == "inter_time") {
    if (j.contains("group_ms"))
      return Method::Grouped(GroupingConfig::Step(Get<Millis>(j, "group_ms"))
                                 .step_ms.value());
    return Method::InterTime();
  }
  if (name == "grouped")
    return Method::Grouped(
        GroupingConfig::Step(Get<Millis>(j, "group_ms")).step_ms.value());
  if (name == "inter_gamma") {
    auto it = j.find("gamma");
    if (it == j.end()) throw Error("inter_gamma method without gamma");
    std::string text = it->is_string() ? it->get<std::string>() : it->dump();
    return Method::InterGamma(Gamma::Parse(text));
  }
  throw Error("unknown method name '" + name + "'");
}

}  // namespace

Method ParseMethodSpec(std::string_view json_text) {
  return MethodFromJson(ParseJson(json_text));
}

std::string RecordToJson(const SerializedRecord& r) {
  Json j;
  j["v"] = kFormatVersion;
  j["utt_id"] = r.utt_id;
  j["method"] = Json::parse(MethodToJson(r.method));
  j["tokens"] = r.tokens;
  if (r.origin_times) {
    Json times = Json::array();
    for (const auto& t : *r.origin_times) {
      if (t) {
        times.push_back(*t);
      } else {
        times.push_back(nullptr);
      }
    }
    j["origin_times"] = std::move(times);
  }
  return Dump(j);
}

SerializedRecord ParseRecord(std::string_view line) {
  Json j = ParseJson(line);
  CheckVersion(j);
  SerializedRecord r;
  r.utt_id = Get<std::string>(j, "utt_id");
  auto m = j.find("method");
  if (m == j.end() || !m->is_object()) throw Error("missing method object");
  r.method = MethodFromJson(*m);
  for (const auto& t : GetArray(j, "tokens")) {
    if (!t.is_string()) throw Error("tokens must be strings");
    r.tokens.push_back(t.get<std::string>());
  }
  if (j.contains("origin_times")) {
    const Json& times = GetArray(j, "origin_times");
    if (times.size() != r.tokens.size())
      throw Error("origin_times length differs from tokens");
    std::vector<std::optional<Millis>> out;
    for (const auto& t : times) {
      if (t.is_null()) {
        out.emplace_back();
      } else if (t.is_number_integer()) {
        out.emplace_back(t.get<Millis>());
      } else {
        throw Error("origin_times entries must be integers or null");
      }
    }
    r.origin_times = std::move(out);
  }
  return r;
}

ReadResult<SerializedRecord> ParseSerialized(std::string_view text) {
  return ParseLines<SerializedRecord>(
      text, [](ReadResult<SerializedRecord>& out, std::string_view line,
               std::size_t) { out.items.push_back(ParseRecord(line)); });
}

ReadResult<SerializedRecord> ReadSerialized(const std::string& path) {
  std::string text = ReadFile(path);
  try {
    return ParseSerialized(text);
  } catch (const Error& e) {
    throw Error(WithPath(path, e));
  }
}

std::string SerializedToJsonl(const std::vector<SerializedRecord>& records) {
  std::string out;
  for (const auto& r : records) out += RecordToJson(r) + "\n";
  return out;
}

void WriteSerialized(const std::vector<SerializedRecord>& records,
                     const std::string& path) {
  WriteFile(path, SerializedToJsonl(records));
}

std::string SerializedToText(const std::vector<SerializedRecord>& records) {
  std::string out;
  for (const auto& r : records) out += r.utt_id + "\t" + RenderText(r) + "\n";
  return out;
}

// ---- demux output ----

std::string DiagnosticToJson(const Diagnostic& d) {
  Json j;
  j["level"] = "diagnostic";
  j["utt_id"] = d.utt_id;
  if (!d.tag.empty()) j["tag"] = d.tag;
  if (d.index) j["index"] = *d.index;
  if (d.line) j["line"] = *d.line;
  j["message"] = d.message;
  return Dump(j);
}

std::string DemuxResultToJson(const DemuxResult& r) {
  Json j;
  j["v"] = kFormatVersion;
  j["utt_id"] = r.utt_id;
  j["tag_count"] = r.tag_count;
  j["channels"] = Json::array();
  for (const auto& c : r.channels) {
    Json ch;
    ch["tag"] = c.tag;
    ch["words"] = c.words;
    j["channels"].push_back(std::move(ch));
  }
  j["diagnostics"] = Json::array();
  for (const auto& d : r.diagnostics) j["diagnostics"].push_back(d.ToString());
  return Dump(j);
}

DemuxResult ParseDemuxResult(std::string_view line) {
  Json j = ParseJson(line);
  CheckVersion(j);
  DemuxResult r;
  r.utt_id = Get<std::string>(j, "utt_id");
  r.tag_count = Get<std::size_t>(j, "tag_count");
  for (const auto& c : GetArray(j, "channels")) {
    DemuxedChannel ch;
    ch.tag = Get<std::string>(c, "tag");
    for (const auto& w : GetArray(c, "words")) {
      if (!w.is_string()) throw Error("channel words must be strings");
      ch.words.push_back(w.get<std::string>());
      ch.times.emplace_back();
    }
    r.channels.push_back(std::move(ch));
  }
  if (j.contains("diagnostics")) {
    for (const auto& d : GetArray(j, "diagnostics"))
      r.diagnostics.push_back({r.utt_id, "", std::nullopt, std::nullopt,
                               d.is_string() ? d.get<std::string>() : d.dump()});
  }
  return r;
}

ReadResult<DemuxResult> ReadDemuxed(const std::string& path) {
  std::string text = ReadFile(path);
  try {
    return ParseLines<DemuxResult>(
        text, [](ReadResult<DemuxResult>& out, std::string_view line,
                 std::size_t) { out.items.push_back(ParseDemuxResult(line)); });
  } catch (const Error& e) {
    throw Error(WithPath(path, e));
  }
}

// ---- traces ----

std::string TraceToJson(const EmissionTrace& t) {
  Json j;
  j["v"] = kFormatVersion;
  j["utt_id"] = t.utt_id;
  j["tag"] = t.tag;
  j["source_ms"] = t.source_duration_ms;
  j["ref_len"] = t.ref_len;
  Json ordinals = Json::array(), delays = Json::array();
  for (const auto& p : t.points) {
    ordinals.push_back(p.token_ordinal);
    delays.push_back(p.delay_ms);
  }
  j["ordinals"] = std::move(ordinals);
  j["delays"] = std::move(delays);
  return Dump(j);
}

EmissionTrace ParseTrace(std::string_view line) {
  Json j = ParseJson(line);
  CheckVersion(j);
  EmissionTrace t;
  t.utt_id = Get<std::string>(j, "utt_id");
  t.tag = Get<std::string>(j, "tag");
  t.source_duration_ms = Get<Millis>(j, "source_ms");
  auto ref_len = Get<std::int64_t>(j, "ref_len");
  if (ref_len < 0) throw Error("ref_len must be >= 0");
  t.ref_len = static_cast<std::size_t>(ref_len);
  const Json& delays = GetArray(j, "delays");
  const Json* ordinals = j.contains("ordinals") ? &GetArray(j, "ordinals") : nullptr;
  if (ordinals && ordinals->size() != delays.size())
    throw Error("ordinals length differs from delays");
  for (std::size_t i = 0; i < delays.size(); ++i) {
    if (!delays[i].is_number_integer()) throw Error("delays must be integers");
    EmissionPoint p;
    p.delay_ms = delays[i].get<Millis>();
    p.token_ordinal = ordinals ? (*ordinals)[i].get<std::size_t>() : i;
    if (!t.points.empty() && p.delay_ms < t.points.back().delay_ms)
      throw Error("delays must be non-decreasing");
    t.points.push_back(p);
  }
  return t;
}

ReadResult<EmissionTrace> ReadTraces(const std::string& path) {
  std::string text = ReadFile(path);
  try {
    return ParseLines<EmissionTrace>(
        text, [](ReadResult<EmissionTrace>& out, std::string_view line,
                 std::size_t) { out.items.push_back(ParseTrace(line)); });
  } catch (const Error& e) {
    throw Error(WithPath(path, e));
  }
}

// ---- configs ----

namespace {

IntRange RangeFromJson(const Json& j, const char* key, IntRange fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number_integer() ||
      !(*it)[1].is_number_integer())
    throw Error(std::string("synth config: \"") + key +
                "\" must be [min, max] integers");
  return {(*it)[0].get<std::int64_t>(), (*it)[1].get<std::int64_t>()};
}

}  // namespace

SynthConfig ParseSynthConfig(std::string_view json_text) {
  Json j = ParseJson(json_text);
  if (!j.is_object()) throw Error("synth config must be a JSON object");
  SynthConfig c;
  if (j.contains("seed")) c.seed = Get<std::uint64_t>(j, "seed");
  if (j.contains("num_utterances"))
    c.num_utterances = Get<std::size_t>(j, "num_utterances");
  c.words_per_channel = RangeFromJson(j, "words_per_channel", c.words_per_channel);
  c.word_gap_ms = RangeFromJson(j, "word_gap_ms", c.word_gap_ms);
  c.lag_ms = RangeFromJson(j, "lag_ms", c.lag_ms);
  c.channels_per_utterance =
      RangeFromJson(j, "channels_per_utterance", c.channels_per_utterance);
  if (j.contains("reorder_window_ms"))
    c.reorder_window_ms = Get<Millis>(j, "reorder_window_ms");
  if (j.contains("vocab_size")) c.vocab_size = Get<std::size_t>(j, "vocab_size");
  if (j.contains("utt_prefix")) c.utt_prefix = Get<std::string>(j, "utt_prefix");
  for (const auto& t : GetArray(j, "channels")) {
    if (t.contains("surface")) {
      c.channels.push_back(TagFromJson(t));
    } else {
      c.channels.push_back(MakeTag(Get<std::string>(t, "lang"),
                                   ParseModality(Get<std::string>(t, "modality"))));
    }
  }
  c.Validate();
  return c;
}

// ---- reports ----

std::string MetricReportToJson(const MetricReport& r) {
  Json j;
  j["utterances"] = r.utterances;
  j["total_tags"] = r.total_tags;
  j["diagnostics"] = r.total_diagnostics;
  j["channels"] = Json::array();
  for (const auto& c : r.channels) {
    Json ch;
    ch["tag"] = c.tag;
    ch["modality"] = ModalityName(c.modality);
    ch["utterances"] = c.utterances;
    if (c.wer) {
      ch["wer"] = *c.wer;
      ch["ref_words"] = c.edits.ref_len;
      ch["substitutions"] = c.edits.substitutions;
      ch["deletions"] = c.edits.deletions;
      ch["insertions"] = c.edits.insertions;
    }
    if (c.bleu) {
      ch["bleu"] = c.bleu->score;
      ch["bleu_bp"] = c.bleu->brevity_penalty;
      ch["bleu_order"] = c.bleu->order;
      Json p = Json::array();
      for (int n = 1; n <= kBleuMaxOrder; ++n) p.push_back(c.bleu->precision(n));
      ch["bleu_precisions"] = std::move(p);
      ch["hyp_len"] = c.bleu->hyp_len;
      ch["ref_len"] = c.bleu->ref_len;
    }
    if (c.latency) {
      ch["laal_ms"] = c.latency->mean_laal_ms;
      ch["laal_traces"] = c.latency->traces;
    }
    j["channels"].push_back(std::move(ch));
  }
  return j.dump(2) + "\n";
}

std::string MetricReportToTable(const MetricReport& r) {
  Table table({"tag", "modality", "utts", "WER%", "BLEU", "LAAL(ms)"});
  for (const auto& c : r.channels) {
    table.Add({c.tag, std::string(ModalityName(c.modality)),
               std::to_string(c.utterances),
               c.wer ? Fixed(*c.wer * 100.0) : "-",
               c.bleu ? Fixed(c.bleu->score) : "-",
               c.latency ? Fixed(c.latency->mean_laal_ms, 1) : "-"});
  }
  return table.Render() + "utterances=" + std::to_string(r.utterances) +
         " tags=" + std::to_string(r.total_tags) +
         " diagnostics=" + std::to_string(r.total_diagnostics) + "\n";
}

std::string LatencyToJson(const std::vector<LatencyRow>& rows) {
  Json j = Json::array();
  for (const auto& row : rows) {
    Json r;
    r["tag"] = row.tag;
    r["traces"] = row.traces;
    r["laal_ms"] = row.mean_laal_ms;
    j.push_back(std::move(r));
  }
  Json out;
  out["latency"] = std::move(j);
  return out.dump(2) + "\n";
}

std::string LatencyToTable(const std::vector<LatencyRow>& rows) {
  Table table({"tag", "traces", "LAAL(ms)"});
  for (const auto& row : rows)
    table.Add({row.tag, std::to_string(row.traces), Fixed(row.mean_laal_ms, 1)});
  return table.Render();
}

std::string StudyToJson(const StudyReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json j;
    j["method"] = row.method;
    j["tag"] = row.tag;
    j["utterances"] = row.utterances;
    j["skipped"] = row.skipped;
    j["traces"] = row.traces;
    j["mean_laal_ms"] = row.mean_laal_ms;
    j["mean_delay_ms"] = row.mean_delay_ms;
    j["mean_switches"] = row.mean_switches;
    rows.push_back(std::move(j));
  }
  Json out;
  out["rows"] = std::move(rows);
  return out.dump(2) + "\n";
}

std::string StudyToTable(const StudyReport& r) {
  Table table({"method", "tag", "utts", "traces", "LAAL(ms)", "delay(ms)",
               "switches"});
  for (const auto& row : r.rows)
    table.Add({row.method, row.tag, std::to_string(row.utterances),
               std::to_string(row.traces), Fixed(row.mean_laal_ms, 1),
               Fixed(row.mean_delay_ms, 1), Fixed(row.mean_switches, 2)});
  return table.Render();
}

}  // namespace tsot
