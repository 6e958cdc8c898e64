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

// Word-level overlap between noun phrases and filtered candidate spans.
#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "topicgen/chunker.hpp"
#include "topicgen/span_model.hpp"
#include "topicgen/utf8.hpp"

namespace topicgen::combine {

// One match event: a phrase word equal to a word of candidate span `span`
// (its index in the candidate list handed to compute_overlap).
struct SpanMatch {
  std::size_t span = 0;
  std::int64_t span_index = 0;
  std::int64_t char_start = 0;
  std::int64_t char_end = 0;
  double distance = 0.0;
  std::int64_t rank = 0;
  bool operator==(const SpanMatch&) const = default;
};

struct OverlapRecord {
  chunk::NounPhrase phrase;
  std::vector<SpanMatch> overlapping_spans;  // one entry per match, in match order
  std::int64_t length_overlap = 0;
  bool contains_noun = false;
  double ratio = 0.0;  // length_overlap / phrase.char_length, may exceed 1

  std::size_t distinct_spans() const {
    std::set<std::size_t> ids;
    for (const auto& m : overlapping_spans) ids.insert(m.span);
    return ids.size();
  }
};

// For every phrase word, every candidate span and every word of that span:
// an exact, case-sensitive match adds the word's length to length_overlap and
// records the span. A phrase word matching k times across the spans counts k
// times.
inline OverlapRecord compute_overlap(const chunk::NounPhrase& phrase,
                                     std::span<const spans::CandidateSpan> candidate_spans) {
  OverlapRecord rec;
  rec.phrase = phrase;
  for (const auto& word : phrase.tokens) {
    for (std::size_t s = 0; s < candidate_spans.size(); ++s) {
      const auto& span = candidate_spans[s];
      for (const auto& word_in_span : span.words) {
        if (word.surface != word_in_span) continue;
        rec.length_overlap += static_cast<std::int64_t>(utf8::length(word.surface));
        rec.overlapping_spans.push_back(
            {s, span.span_index, span.char_start, span.char_end, span.distance, span.rank});
        if (word.pos && chunk::is_noun(*word.pos)) rec.contains_noun = true;
      }
    }
  }
  rec.ratio = phrase.char_length > 0 ? static_cast<double>(rec.length_overlap) /
                                           static_cast<double>(phrase.char_length)
                                     : 0.0;
  return rec;
}

inline bool is_selected(const OverlapRecord& rec, double min_ratio = 0.75) {
  return rec.contains_noun && rec.ratio > min_ratio;
}

// Order-preserving filter over precomputed records.
inline std::vector<OverlapRecord> filter_records(std::vector<OverlapRecord> records,
                                                 double min_ratio = 0.75) {
  std::erase_if(records, [&](const OverlapRecord& r) { return !is_selected(r, min_ratio); });
  return records;
}

// Phrases whose overlap contains a noun and whose ratio strictly exceeds
// min_ratio, one record per phrase occurrence, in document order.
inline std::vector<OverlapRecord> select_overlapping_phrases(
    std::span<const chunk::NounPhrase> noun_phrases,
    std::span<const spans::CandidateSpan> candidate_spans, double min_ratio = 0.75) {
  std::vector<OverlapRecord> kept;
  for (const auto& phrase : noun_phrases) {
    auto rec = compute_overlap(phrase, candidate_spans);
    if (is_selected(rec, min_ratio)) kept.push_back(std::move(rec));
  }
  return kept;
}

// Diagnostic: how many records have ratio > 1, which happens when a phrase
// word matches in more than one span.
inline std::size_t count_ratio_above_one(std::span<const OverlapRecord> records) {
  std::size_t n = 0;
  for (const auto& r : records) n += r.ratio > 1.0 ? 1 : 0;
  return n;
}

}  // namespace topicgen::combine
