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

// End-to-end topic extraction: noun phrases and filtered candidate spans are
// combined by overlap, then de-duplicated and ordered.
#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "topicgen/chunker.hpp"
#include "topicgen/combiner.hpp"
#include "topicgen/error.hpp"
#include "topicgen/io_formats.hpp"
#include "topicgen/postprocessor.hpp"
#include "topicgen/span_model.hpp"

namespace topicgen {

enum class TaggerKind { kPreTagged, kRules };

struct PipelineConfig {
  spans::FilterConfig filter;
  double min_overlap_ratio = 0.75;
  std::optional<std::size_t> max_topics;
  TaggerKind tagger = TaggerKind::kRules;
  std::optional<spans::SurrogateConfig> surrogate;
  const chunk::TagMap* tag_map = nullptr;  // builtin when null

  void validate() const {
    filter.validate();
    if (!(min_overlap_ratio > 0.0 && min_overlap_ratio <= 1.0)) {
      throw InvalidArgument("min_overlap_ratio must be in (0, 1]");
    }
    if (surrogate) surrogate->validate();
  }
};

struct DocumentTopics {
  io::TopicOutput output;
  std::size_t n_phrases = 0;
  std::size_t n_filtered_spans = 0;
  std::size_t n_selected = 0;
  std::size_t ratio_above_one = 0;
};

// Runs every stage for one document. Without a dump the surrogate generator
// must be configured.
inline DocumentTopics extract_document(const io::DocumentRecord& doc, const io::SpanDump* dump,
                                       const PipelineConfig& cfg) {
  const auto tokens =
      chunk::tagged_tokens(doc, cfg.tagger == TaggerKind::kPreTagged,
                           cfg.tag_map ? *cfg.tag_map : chunk::TagMap::builtin());
  const auto phrases = chunk::extract_noun_phrases(tokens);

  io::SpanDump generated;
  if (dump == nullptr) {
    if (!cfg.surrogate) throw InvalidArgument("no span dump for document '" + doc.doc_id + "'");
    generated = spans::surrogate_generate(doc, *cfg.surrogate);
    dump = &generated;
  }
  if (dump->doc_id != doc.doc_id) {
    throw FormatError("span dump for '" + dump->doc_id + "' given for document '" + doc.doc_id + "'");
  }
  const auto ranked = spans::rank_dump(*dump, doc.text);
  const auto filtered = spans::filter_candidates(ranked, cfg.filter);
  const auto records = combine::select_overlapping_phrases(phrases, filtered, cfg.min_overlap_ratio);

  DocumentTopics result;
  result.n_phrases = phrases.size();
  result.n_filtered_spans = filtered.size();
  result.n_selected = records.size();
  result.ratio_above_one = combine::count_ratio_above_one(records);
  result.output.doc_id = doc.doc_id;
  for (const auto& t : post::postprocess(records, cfg.max_topics)) {
    result.output.topics.push_back(post::to_entry(t));
  }
  return result;
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads; results land at index i.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, unsigned jobs, Fn fn) {
  std::vector<T> out(n);
  jobs = std::max(1u, jobs);
  if (jobs == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(jobs, n); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) out[i] = fn(i);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

// Result of one document in a batch: topics or the error message.
using BatchItem = std::variant<DocumentTopics, std::string>;

// Looks up the dump for a document; nullopt when none exists.
using DumpSource = std::function<std::optional<io::SpanDump>(const io::DocumentRecord&)>;

inline std::vector<BatchItem> extract_topics(const std::vector<io::DocumentRecord>& docs,
                                             const DumpSource& dumps, const PipelineConfig& cfg,
                                             unsigned jobs = 1) {
  cfg.validate();
  return parallel_map<BatchItem>(docs.size(), jobs, [&](std::size_t i) -> BatchItem {
    try {
      std::optional<io::SpanDump> dump;
      if (dumps) dump = dumps(docs[i]);
      return extract_document(docs[i], dump ? &*dump : nullptr, cfg);
    } catch (const std::exception& e) {
      return std::string(e.what());
    }
  });
}

// Dumps stored as <dir>/<doc_id>.json.
inline DumpSource dump_directory(std::filesystem::path dir) {
  return [dir = std::move(dir)](const io::DocumentRecord& doc) -> std::optional<io::SpanDump> {
    const auto path = dir / (doc.doc_id + ".json");
    std::ifstream in(path);
    if (!in) return std::nullopt;
    const auto length = static_cast<std::int64_t>(utf8::length(doc.text));
    try {
      return io::parse_span_dump(in, length);
    } catch (const FormatError& e) {
      throw FormatError(path.string() + ": " + e.what());
    }
  };
}

}  // namespace topicgen
