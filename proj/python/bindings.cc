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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tsot/demux.h"
#include "tsot/io.h"
#include "tsot/metrics.h"
#include "tsot/serializer.h"
#include "tsot/simulator.h"
#include "tsot/types.h"

namespace py = pybind11;

namespace {

std::vector<std::string> DiagnosticStrings(const std::vector<tsot::Diagnostic>& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(d.ToString());
  return out;
}

py::list Tokens(const tsot::SerializedSequence& s) {
  py::list out;
  for (const auto& token : s.tokens) {
    if (const auto* tag = std::get_if<tsot::TagToken>(&token)) {
      out.append(py::make_tuple(tag->tag.surface, py::none()));
    } else {
      const auto& w = std::get<tsot::WordToken>(token);
      out.append(py::make_tuple(w.word, w.origin_time ? py::cast(*w.origin_time)
                                                      : py::none()));
    }
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_tsot, m) {
  m.doc() = "Joint serialized-output streams: build, demux, evaluate";

  py::register_exception<tsot::Error>(m, "TsotError", PyExc_ValueError);

  py::enum_<tsot::Modality>(m, "Modality")
      .value("TRANSCRIPTION", tsot::Modality::kTranscription)
      .value("TRANSLATION", tsot::Modality::kTranslation);

  py::class_<tsot::Tag>(m, "Tag")
      .def(py::init([](std::string surface, tsot::Modality modality,
                       std::string language, std::string id) {
             return tsot::Tag{id.empty() ? surface : id, surface, modality,
                              language};
           }),
           py::arg("surface"), py::arg("modality"), py::arg("language"),
           py::arg("id") = "")
      .def_readwrite("id", &tsot::Tag::id)
      .def_readwrite("surface", &tsot::Tag::surface)
      .def_readwrite("modality", &tsot::Tag::modality)
      .def_readwrite("language", &tsot::Tag::language)
      .def("__repr__", [](const tsot::Tag& t) { return "Tag(" + t.surface + ")"; });

  m.def("make_tag", &tsot::MakeTag, py::arg("language"), py::arg("modality"));

  py::class_<tsot::TagSet>(m, "TagSet")
      .def(py::init<std::vector<tsot::Tag>>())
      .def_static("one_to_many", &tsot::TagSet::OneToMany)
      .def_property_readonly("tags", &tsot::TagSet::tags)
      .def("__len__", &tsot::TagSet::size)
      .def("to_json", &tsot::TagSetToJson)
      .def_static("from_json", &tsot::ParseTagSet);

  py::class_<tsot::TimedWord>(m, "TimedWord")
      .def(py::init<tsot::Millis, std::string>(), py::arg("time"), py::arg("word"))
      .def_readwrite("time", &tsot::TimedWord::time)
      .def_readwrite("word", &tsot::TimedWord::word);

  py::class_<tsot::Channel>(m, "Channel")
      .def(py::init<tsot::Tag, std::vector<tsot::TimedWord>>(), py::arg("tag"),
           py::arg("words"))
      .def_readwrite("tag", &tsot::Channel::tag)
      .def_readwrite("words", &tsot::Channel::words)
      .def("word_list", &tsot::Channel::Words);

  py::class_<tsot::Utterance>(m, "Utterance")
      .def(py::init<std::string, tsot::Millis, std::vector<tsot::Channel>>(),
           py::arg("utt_id"), py::arg("duration_ms"), py::arg("channels"))
      .def_readwrite("utt_id", &tsot::Utterance::utt_id)
      .def_readwrite("duration_ms", &tsot::Utterance::duration_ms)
      .def_readwrite("channels", &tsot::Utterance::channels)
      .def("to_json", &tsot::UtteranceToJson)
      .def_static("from_json", &tsot::ParseUtterance);

  m.def("validate_utterance",
        [](const tsot::Utterance& u, const tsot::TagSet& tags) {
          return DiagnosticStrings(tsot::ValidateUtterance(u, tags));
        });

  py::class_<tsot::SerializedSequence>(m, "SerializedSequence")
      .def_readonly("utt_id", &tsot::SerializedSequence::utt_id)
      .def_property_readonly("tokens", &Tokens)
      .def_property_readonly("method",
                             [](const tsot::SerializedSequence& s) {
                               return s.method.Label();
                             })
      .def_property_readonly("tag_count", &tsot::SerializedSequence::TagCount)
      .def("text", py::overload_cast<const tsot::SerializedSequence&>(
                       &tsot::RenderText))
      .def("to_json", [](const tsot::SerializedSequence& s) {
        return tsot::RecordToJson(tsot::ToRecord(s));
      });

  m.def("inter_time",
        [](const tsot::Utterance& u, const tsot::TagSet& tags,
           std::optional<tsot::Millis> group_ms) {
          tsot::GroupingConfig g;
          if (group_ms) g = tsot::GroupingConfig::Step(*group_ms);
          return tsot::InterTime(u, tags, g);
        },
        py::arg("utterance"), py::arg("tags"), py::arg("group_ms") = py::none());
  m.def("inter_gamma",
        [](const tsot::Utterance& u, const std::string& gamma) {
          return tsot::InterGamma(u, tsot::Gamma::Parse(gamma));
        },
        py::arg("utterance"), py::arg("gamma"));
  m.def("render_text",
        py::overload_cast<const tsot::SerializedSequence&>(&tsot::RenderText));
  m.def("assign_group", &tsot::AssignGroup, py::arg("time"), py::arg("step_ms"));
  m.def("count_switches", &tsot::CountSwitches);
  m.def("switch_reduction",
        [](const std::vector<tsot::SerializedSequence>& base,
           const std::vector<tsot::SerializedSequence>& variant) {
          return tsot::SwitchReduction(
              std::span<const tsot::SerializedSequence>(base),
              std::span<const tsot::SerializedSequence>(variant));
        });

  py::class_<tsot::DemuxResult>(m, "DemuxResult")
      .def_readonly("utt_id", &tsot::DemuxResult::utt_id)
      .def_readonly("tag_count", &tsot::DemuxResult::tag_count)
      .def_property_readonly("channels",
                             [](const tsot::DemuxResult& r) {
                               py::dict out;
                               for (const auto& c : r.channels)
                                 out[py::str(c.tag)] = c.words;
                               return out;
                             })
      .def_property_readonly("diagnostics", [](const tsot::DemuxResult& r) {
        return DiagnosticStrings(r.diagnostics);
      });

  m.def("demux",
        [](const std::string& text, const tsot::TagSet& tags,
           const std::string& utt_id) {
          return tsot::DemuxFull(std::string_view(text), tags, utt_id);
        },
        py::arg("text"), py::arg("tags"), py::arg("utt_id") = "");
  m.attr("UNKNOWN_CHANNEL") = std::string(tsot::kUnknownChannel);

  m.def("wer", &tsot::Wer, py::arg("reference"), py::arg("hypothesis"));
  m.def("bleu_corpus",
        [](const std::vector<tsot::Words>& refs,
           const std::vector<tsot::Words>& hyps, bool smooth) {
          return tsot::BleuCorpus(refs, hyps, smooth).score;
        },
        py::arg("references"), py::arg("hypotheses"), py::arg("smooth") = false);
  m.def("laal",
        [](const std::vector<tsot::Millis>& delays, tsot::Millis source_ms,
           std::size_t ref_len) {
          tsot::EmissionTrace t;
          t.source_duration_ms = source_ms;
          t.ref_len = ref_len;
          for (std::size_t i = 0; i < delays.size(); ++i)
            t.points.push_back({i, delays[i]});
          return tsot::Laal(t);
        },
        py::arg("delays"), py::arg("source_ms"), py::arg("ref_len"));

  m.def("replay",
        [](const tsot::SerializedSequence& s, const tsot::TagSet& tags,
           tsot::Millis source_ms, bool group_boundary, tsot::Millis overhead) {
          tsot::ReplayPolicy p;
          p.mode = group_boundary ? tsot::ReplayPolicy::Mode::kGroupBoundary
                                  : tsot::ReplayPolicy::Mode::kOriginTime;
          p.overhead_ms = overhead;
          py::dict out;
          for (const auto& t : tsot::Replay(s, tags, p, source_ms)) {
            std::vector<tsot::Millis> delays;
            for (const auto& pt : t.points) delays.push_back(pt.delay_ms);
            out[py::str(t.tag)] = delays;
          }
          return out;
        },
        py::arg("sequence"), py::arg("tags"), py::arg("source_ms"),
        py::arg("group_boundary") = false, py::arg("overhead_ms") = 0);

  m.def("synth_corpus",
        [](const std::string& config_json, std::uint64_t seed) {
          tsot::SynthConfig c = tsot::ParseSynthConfig(config_json);
          c.seed = seed;
          return tsot::SynthCorpus(c);
        },
        py::arg("config_json"), py::arg("seed"));
  m.def("corpus_to_jsonl", &tsot::CorpusToJsonl);
}
