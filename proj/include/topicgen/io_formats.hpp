// Copyright 2026 The topicgen Authors.
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

// Wire formats crossing the artifact boundary:
//
//   corpus       JSON lines   {"doc_id", "text", "pretagged_tokens"?: [[surface, tag], ...]}
//   span dump    one JSON doc {"doc_id", "steps": [{"span_index", "candidates":
//                               [{"token_start", "token_end", "logit_start", "logit_end"}]}]}
//   topics       JSON lines   {"doc_id", "topics": [{"phrase", "total_value", "criteria":
//                               {distance, rank, n_spans, n_words, n_caps},
//                               "n_spans", "mean_rank", "mean_distance"}]}
//   score table  CSV          annotator_id,article_id,variant,score,source
//
// Offsets in span dumps count Unicode code points of the document text, so
// dumps written from Python string indices can be consumed unchanged.
#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "topicgen/error.hpp"
#include "topicgen/utf8.hpp"

namespace topicgen::io {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Corpus

struct TaggedSurface {
  std::string surface;
  std::string tag;
  bool operator==(const TaggedSurface&) const = default;
};

struct DocumentRecord {
  std::string doc_id;
  std::string text;
  std::optional<std::vector<TaggedSurface>> pretagged_tokens;
  bool operator==(const DocumentRecord&) const = default;
};

// Every supplied surface must occur in the text, in order, without overlap.
inline void validate_document(const DocumentRecord& doc) {
  if (doc.doc_id.empty()) throw FormatError("empty doc_id");
  if (!doc.pretagged_tokens) return;
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < doc.pretagged_tokens->size(); ++i) {
    const auto& surface = (*doc.pretagged_tokens)[i].surface;
    if (surface.empty()) {
      throw FormatError("document '" + doc.doc_id + "': pretagged token " +
                        std::to_string(i) + " has an empty surface");
    }
    const auto found = doc.text.find(surface, cursor);
    if (found == std::string::npos) {
      throw FormatError("document '" + doc.doc_id + "': pretagged token " +
                        std::to_string(i) + " '" + surface +
                        "' does not occur in text after offset " +
                        std::to_string(cursor));
    }
    cursor = found + surface.size();
  }
}

namespace detail {

inline const Json& require(const Json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(std::string("missing field '") + key + "'", line);
  return *it;
}

inline std::string require_string(const Json& obj, const char* key, std::size_t line) {
  const auto& v = require(obj, key, line);
  if (!v.is_string()) throw FormatError(std::string("field '") + key + "' must be a string", line);
  return v.get<std::string>();
}

inline std::int64_t require_int(const Json& obj, const char* key, std::size_t line) {
  const auto& v = require(obj, key, line);
  if (!v.is_number_integer()) {
    throw FormatError(std::string("field '") + key + "' must be an integer", line);
  }
  return v.get<std::int64_t>();
}

inline double require_real(const Json& obj, const char* key, std::size_t line) {
  const auto& v = require(obj, key, line);
  if (!v.is_number()) throw FormatError(std::string("field '") + key + "' must be a number", line);
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw FormatError(std::string("field '") + key + "' is not finite", line);
  return x;
}

inline Json parse_json(std::string_view text, std::size_t line) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what(), line);
  }
}

inline void strip_cr(std::string& s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
}

inline bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

}  // namespace detail

inline DocumentRecord document_from_json(const Json& j, std::size_t line = 0) {
  if (!j.is_object()) throw FormatError("document must be a JSON object", line);
  DocumentRecord doc;
  doc.doc_id = detail::require_string(j, "doc_id", line);
  doc.text = detail::require_string(j, "text", line);
  if (const auto it = j.find("pretagged_tokens"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw FormatError("'pretagged_tokens' must be an array", line);
    std::vector<TaggedSurface> tokens;
    tokens.reserve(it->size());
    for (const auto& pair : *it) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
        throw FormatError("each pretagged token must be [surface, tag]", line);
      }
      tokens.push_back({pair[0].get<std::string>(), pair[1].get<std::string>()});
    }
    doc.pretagged_tokens = std::move(tokens);
  }
  try {
    validate_document(doc);
  } catch (const FormatError& e) {
    throw FormatError(e.what(), line);
  }
  return doc;
}

inline Json document_to_json(const DocumentRecord& doc) {
  Json j;
  j["doc_id"] = doc.doc_id;
  j["text"] = doc.text;
  if (doc.pretagged_tokens) {
    Json arr = Json::array();
    for (const auto& t : *doc.pretagged_tokens) arr.push_back(Json::array({t.surface, t.tag}));
    j["pretagged_tokens"] = std::move(arr);
  }
  return j;
}

// One document object per line; blank lines are skipped. Throws FormatError
// naming the line for malformed records and naming the id for duplicates.
inline std::vector<DocumentRecord> parse_corpus(std::istream& in) {
  std::vector<DocumentRecord> docs;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    if (detail::is_blank(line)) continue;
    auto doc = document_from_json(detail::parse_json(line, line_no), line_no);
    if (!seen.insert(doc.doc_id).second) {
      throw FormatError("duplicate doc_id '" + doc.doc_id + "'", line_no);
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

inline std::vector<DocumentRecord> parse_corpus(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_corpus(in);
}

inline void emit_corpus(std::ostream& out, const std::vector<DocumentRecord>& docs) {
  for (const auto& doc : docs) out << document_to_json(doc).dump() << '\n';
}

inline std::string emit_corpus(const std::vector<DocumentRecord>& docs) {
  std::ostringstream out;
  emit_corpus(out, docs);
  return out.str();
}

// ---------------------------------------------------------------------------
// Span dump

struct RawCandidate {
  std::int64_t token_start = 0;  // code point offset, inclusive
  std::int64_t token_end = 0;    // code point offset, exclusive
  double logit_start = 0.0;
  double logit_end = 0.0;
  bool operator==(const RawCandidate&) const = default;
};

struct GenerationStep {
  std::int64_t span_index = 0;
  std::vector<RawCandidate> candidates;
  bool operator==(const GenerationStep&) const = default;
};

struct SpanDump {
  std::string doc_id;
  std::vector<GenerationStep> steps;
  bool operator==(const SpanDump&) const = default;
};

// Structural invariants. When text_length (in code points) is given, offsets
// are also checked against it.
inline void validate_span_dump(const SpanDump& dump,
                               std::optional<std::int64_t> text_length = std::nullopt) {
  if (dump.doc_id.empty()) throw FormatError("span dump has an empty doc_id");
  for (std::size_t i = 0; i < dump.steps.size(); ++i) {
    const auto& step = dump.steps[i];
    const std::string where =
        "span dump '" + dump.doc_id + "' step " + std::to_string(step.span_index);
    if (step.span_index != static_cast<std::int64_t>(i)) {
      throw FormatError("span dump '" + dump.doc_id + "': span_index " +
                        std::to_string(step.span_index) + " found where " +
                        std::to_string(i) + " was expected (gap or disorder)");
    }
    if (step.candidates.empty()) throw FormatError(where + ": no candidates");
    for (std::size_t c = 0; c < step.candidates.size(); ++c) {
      const auto& cand = step.candidates[c];
      const bool in_range =
          cand.token_start >= 0 && cand.token_start < cand.token_end &&
          (!text_length || cand.token_end <= *text_length);
      if (!in_range) {
        throw FormatError(where + ": candidate " + std::to_string(c) + " offsets [" +
                          std::to_string(cand.token_start) + ", " +
                          std::to_string(cand.token_end) + ") out of range");
      }
      if (!std::isfinite(cand.logit_start) || !std::isfinite(cand.logit_end)) {
        throw FormatError(where + ": candidate " + std::to_string(c) + " has a non-finite logit");
      }
    }
  }
}

inline SpanDump span_dump_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("span dump must be a JSON object");
  SpanDump dump;
  dump.doc_id = detail::require_string(j, "doc_id", 0);
  const auto& steps = detail::require(j, "steps", 0);
  if (!steps.is_array()) throw FormatError("'steps' must be an array");
  for (const auto& s : steps) {
    if (!s.is_object()) throw FormatError("each step must be an object");
    GenerationStep step;
    step.span_index = detail::require_int(s, "span_index", 0);
    const auto& cands = detail::require(s, "candidates", 0);
    if (!cands.is_array()) throw FormatError("'candidates' must be an array");
    step.candidates.reserve(cands.size());
    for (const auto& c : cands) {
      if (!c.is_object()) throw FormatError("each candidate must be an object");
      step.candidates.push_back({detail::require_int(c, "token_start", 0),
                                 detail::require_int(c, "token_end", 0),
                                 detail::require_real(c, "logit_start", 0),
                                 detail::require_real(c, "logit_end", 0)});
    }
    dump.steps.push_back(std::move(step));
  }
  return dump;
}

inline Json span_dump_to_json(const SpanDump& dump) {
  Json steps = Json::array();
  for (const auto& step : dump.steps) {
    Json cands = Json::array();
    for (const auto& c : step.candidates) {
      Json jc;
      jc["token_start"] = c.token_start;
      jc["token_end"] = c.token_end;
      jc["logit_start"] = c.logit_start;
      jc["logit_end"] = c.logit_end;
      cands.push_back(std::move(jc));
    }
    Json js;
    js["span_index"] = step.span_index;
    js["candidates"] = std::move(cands);
    steps.push_back(std::move(js));
  }
  Json j;
  j["doc_id"] = dump.doc_id;
  j["steps"] = std::move(steps);
  return j;
}

inline SpanDump parse_span_dump(std::string_view text,
                                std::optional<std::int64_t> text_length = std::nullopt) {
  auto dump = span_dump_from_json(detail::parse_json(text, 0));
  validate_span_dump(dump, text_length);
  return dump;
}

inline SpanDump parse_span_dump(std::istream& in,
                                std::optional<std::int64_t> text_length = std::nullopt) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_span_dump(buf.str(), text_length);
}

inline std::string emit_span_dump(const SpanDump& dump) {
  validate_span_dump(dump);
  return span_dump_to_json(dump).dump() + "\n";
}

// ---------------------------------------------------------------------------
// Topic output

struct Criteria {
  double distance = 0.0;
  double rank = 0.0;
  double n_spans = 0.0;
  double n_words = 0.0;
  double n_caps = 0.0;
  bool operator==(const Criteria&) const = default;
};

struct TopicEntry {
  std::string phrase;
  double total_value = 0.0;
  Criteria criteria;
  std::int64_t n_spans = 0;
  double mean_rank = 0.0;
  double mean_distance = 0.0;
  bool operator==(const TopicEntry&) const = default;
};

struct TopicOutput {
  std::string doc_id;
  std::vector<TopicEntry> topics;
  bool operator==(const TopicOutput&) const = default;
};

inline Json topic_output_to_json(const TopicOutput& out) {
  Json topics = Json::array();
  for (const auto& t : out.topics) {
    Json crit;
    crit["distance"] = t.criteria.distance;
    crit["rank"] = t.criteria.rank;
    crit["n_spans"] = t.criteria.n_spans;
    crit["n_words"] = t.criteria.n_words;
    crit["n_caps"] = t.criteria.n_caps;
    Json jt;
    jt["phrase"] = t.phrase;
    jt["total_value"] = t.total_value;
    jt["criteria"] = std::move(crit);
    jt["n_spans"] = t.n_spans;
    jt["mean_rank"] = t.mean_rank;
    jt["mean_distance"] = t.mean_distance;
    topics.push_back(std::move(jt));
  }
  Json j;
  j["doc_id"] = out.doc_id;
  j["topics"] = std::move(topics);
  return j;
}

inline std::string emit_topic_line(const TopicOutput& out) {
  return topic_output_to_json(out).dump() + "\n";
}

inline TopicOutput parse_topic_line(std::string_view line, std::size_t line_no = 0) {
  const Json j = detail::parse_json(line, line_no);
  if (!j.is_object()) throw FormatError("topic output must be a JSON object", line_no);
  TopicOutput out;
  out.doc_id = detail::require_string(j, "doc_id", line_no);
  const auto& topics = detail::require(j, "topics", line_no);
  if (!topics.is_array()) throw FormatError("'topics' must be an array", line_no);
  for (const auto& jt : topics) {
    if (!jt.is_object()) throw FormatError("each topic must be an object", line_no);
    TopicEntry t;
    t.phrase = detail::require_string(jt, "phrase", line_no);
    t.total_value = detail::require_real(jt, "total_value", line_no);
    const auto& crit = detail::require(jt, "criteria", line_no);
    if (!crit.is_object()) throw FormatError("'criteria' must be an object", line_no);
    t.criteria = {detail::require_real(crit, "distance", line_no),
                  detail::require_real(crit, "rank", line_no),
                  detail::require_real(crit, "n_spans", line_no),
                  detail::require_real(crit, "n_words", line_no),
                  detail::require_real(crit, "n_caps", line_no)};
    t.n_spans = detail::require_int(jt, "n_spans", line_no);
    t.mean_rank = detail::require_real(jt, "mean_rank", line_no);
    t.mean_distance = detail::require_real(jt, "mean_distance", line_no);
    out.topics.push_back(std::move(t));
  }
  for (std::size_t i = 1; i < out.topics.size(); ++i) {
    if (out.topics[i].total_value > out.topics[i - 1].total_value) {
      throw FormatError("topics of '" + out.doc_id + "' are not ordered by total_value", line_no);
    }
  }
  return out;
}

inline std::vector<TopicOutput> parse_topic_outputs(std::istream& in) {
  std::vector<TopicOutput> outs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    if (detail::is_blank(line)) continue;
    outs.push_back(parse_topic_line(line, line_no));
  }
  return outs;
}

// ---------------------------------------------------------------------------
// Score table

enum class Variant { kReal, kGenerated };
enum class Source { kGuardian, kHuffPost, kOther };

inline std::string_view to_string(Variant v) {
  return v == Variant::kReal ? "real" : "generated";
}

inline std::string_view to_string(Source s) {
  switch (s) {
    case Source::kGuardian: return "guardian";
    case Source::kHuffPost: return "huffpost";
    case Source::kOther: break;
  }
  return "other";
}

struct ScoreRecord {
  std::string annotator_id;
  std::string article_id;
  Variant variant = Variant::kReal;
  int score = 0;  // 0 = very bad ... 4 = very good
  Source source = Source::kOther;
  bool operator==(const ScoreRecord&) const = default;
};

struct ScoreTable {
  std::vector<ScoreRecord> records;
  bool operator==(const ScoreTable&) const = default;
};

inline constexpr std::string_view kScoreHeader = "annotator_id,article_id,variant,score,source";

inline void validate_score_table(const ScoreTable& table) {
  std::set<std::tuple<std::string, std::string, Variant>> seen;
  for (std::size_t i = 0; i < table.records.size(); ++i) {
    const auto& r = table.records[i];
    const std::size_t line = i + 2;
    if (r.annotator_id.empty() || r.article_id.empty()) throw FormatError("empty id", line);
    if (r.score < 0 || r.score > 4) {
      throw FormatError("score " + std::to_string(r.score) + " outside 0..4", line);
    }
    if (!seen.emplace(r.annotator_id, r.article_id, r.variant).second) {
      throw FormatError("duplicate record for (" + r.annotator_id + ", " + r.article_id +
                            ", " + std::string(to_string(r.variant)) + ")",
                        line);
    }
  }
}

inline ScoreTable parse_score_table(std::istream& in) {
  ScoreTable table;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    if (!header_seen) {
      if (line != kScoreHeader) {
        throw FormatError("expected header '" + std::string(kScoreHeader) + "'", line_no);
      }
      header_seen = true;
      continue;
    }
    if (detail::is_blank(line)) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 5) {
      throw FormatError("expected 5 fields, got " + std::to_string(fields.size()), line_no);
    }
    ScoreRecord r;
    r.annotator_id = fields[0];
    r.article_id = fields[1];
    if (fields[2] == "real") {
      r.variant = Variant::kReal;
    } else if (fields[2] == "generated") {
      r.variant = Variant::kGenerated;
    } else {
      throw FormatError("unknown variant '" + fields[2] + "'", line_no);
    }
    if (fields[3].size() != 1 || fields[3][0] < '0' || fields[3][0] > '4') {
      throw FormatError("score must be an integer in 0..4, got '" + fields[3] + "'", line_no);
    }
    r.score = fields[3][0] - '0';
    if (fields[4] == "guardian") {
      r.source = Source::kGuardian;
    } else if (fields[4] == "huffpost") {
      r.source = Source::kHuffPost;
    } else if (fields[4] == "other") {
      r.source = Source::kOther;
    } else {
      throw FormatError("unknown source '" + fields[4] + "'", line_no);
    }
    if (r.annotator_id.empty() || r.article_id.empty()) throw FormatError("empty id", line_no);
    table.records.push_back(std::move(r));
  }
  if (!header_seen) throw FormatError("empty score table: missing header");
  validate_score_table(table);
  return table;
}

inline ScoreTable parse_score_table(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_score_table(in);
}

inline void emit_score_table(std::ostream& out, const ScoreTable& table) {
  validate_score_table(table);
  out << kScoreHeader << '\n';
  for (const auto& r : table.records) {
    for (const auto* id : {&r.annotator_id, &r.article_id}) {
      if (id->find_first_of(",\n\r") != std::string::npos) {
        throw FormatError("id '" + *id + "' contains a delimiter");
      }
    }
    out << r.annotator_id << ',' << r.article_id << ',' << to_string(r.variant) << ','
        << r.score << ',' << to_string(r.source) << '\n';
  }
}

inline std::string emit_score_table(const ScoreTable& table) {
  std::ostringstream out;
  emit_score_table(out, table);
  return out.str();
}

}  // namespace topicgen::io
