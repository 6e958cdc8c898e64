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

// De-duplication and value-based ordering of raw topics.
//
// A topic's value is the sum of five criteria, each a linear clamp into [0, 1]:
//
//   distance  (0.4 - mean_distance) / 0.4     smaller mean distance is better
//   rank      (4 - mean_rank) / 4              ranks are 0-based
//   n_spans   min(n_spans, 4) / 4
//   n_words   min(n_words, 3) / 3
//   n_caps    min(n_caps, 3) / 3
#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topicgen/chunker.hpp"
#include "topicgen/combiner.hpp"
#include "topicgen/error.hpp"
#include "topicgen/io_formats.hpp"
#include "topicgen/utf8.hpp"

namespace topicgen::post {

inline constexpr double kDistanceCap = 0.4;
inline constexpr double kRankCap = 4.0;
inline constexpr std::int64_t kSpanCap = 4;
inline constexpr std::int64_t kWordCap = 3;
inline constexpr std::int64_t kCapsCap = 3;

inline double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

inline double distance_value(double mean_distance) {
  return clamp01((kDistanceCap - mean_distance) / kDistanceCap);
}
inline double rank_value(double mean_rank) { return clamp01((kRankCap - mean_rank) / kRankCap); }
inline double span_count_value(std::int64_t n) {
  return static_cast<double>(std::clamp<std::int64_t>(n, 0, kSpanCap)) / kSpanCap;
}
inline double word_count_value(std::int64_t n) {
  return static_cast<double>(std::clamp<std::int64_t>(n, 0, kWordCap)) / kWordCap;
}
inline double caps_value(std::int64_t n) {
  return static_cast<double>(std::clamp<std::int64_t>(n, 0, kCapsCap)) / kCapsCap;
}

// ---------------------------------------------------------------------------
// De-duplication

namespace detail {

struct PhraseWords {
  std::string text;
  std::vector<std::string> words;
  std::size_t chars = 0;
};

inline PhraseWords split(const std::string& text) {
  PhraseWords p{text, chunk::words(text), 0};
  for (const auto& w : p.words) p.chars += utf8::length(w);
  return p;
}

// Fraction of p's words (with multiplicity) found in q's word multiset.
inline double contained_fraction(const PhraseWords& p, const PhraseWords& q) {
  if (p.words.empty()) return 0.0;
  std::map<std::string, int> pool;
  for (const auto& w : q.words) ++pool[w];
  std::size_t hits = 0;
  for (const auto& w : p.words) {
    auto it = pool.find(w);
    if (it != pool.end() && it->second > 0) {
      --it->second;
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(p.words.size());
}

// q outranks p (at positions qi, pi) for the purpose of absorbing it: more
// words, or as many words and more characters. Phrases of identical size only
// absorb later ones that they fully contain.
inline bool absorbs(const PhraseWords& q, std::size_t qi, const PhraseWords& p, std::size_t pi) {
  if (q.words.size() != p.words.size()) return q.words.size() > p.words.size();
  if (q.chars != p.chars) return q.chars > p.chars;
  return qi < pi && contained_fraction(p, q) == 1.0;
}

}  // namespace detail

// Exact duplicates collapse to their first occurrence; then a phrase is
// dropped when at least half of its words occur in a longer phrase of the
// list. Survivors keep their relative order.
inline std::vector<std::string> deduplicate(const std::vector<std::string>& phrases) {
  std::vector<detail::PhraseWords> unique;
  for (const auto& p : phrases) {
    const bool seen = std::any_of(unique.begin(), unique.end(),
                                  [&](const detail::PhraseWords& u) { return u.text == p; });
    if (!seen) unique.push_back(detail::split(p));
  }
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < unique.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < unique.size() && !redundant; ++j) {
      if (j == i || !detail::absorbs(unique[j], j, unique[i], i)) continue;
      redundant = detail::contained_fraction(unique[i], unique[j]) >= 0.5;
    }
    if (!redundant) kept.push_back(unique[i].text);
  }
  return kept;
}

// ---------------------------------------------------------------------------
// Scoring

struct ScoredTopic {
  std::string phrase_text;
  std::vector<combine::OverlapRecord> records;
  double mean_distance = 0.0;
  double mean_rank = 0.0;
  std::int64_t n_spans = 0;
  std::int64_t n_words = 0;
  std::int64_t n_caps = 0;
  std::array<double, 5> criterion_values{};  // distance, rank, n_spans, n_words, n_caps
  double total_value = 0.0;
  std::int64_t first_position = 0;  // char offset of the earliest occurrence
};

struct TopicStats {
  double mean_distance = 0.0;
  double mean_rank = 0.0;
  std::int64_t n_spans = 0;
  std::int64_t n_words = 0;
  std::int64_t n_caps = 0;
};

inline std::array<double, 5> criterion_values(const TopicStats& s) {
  return {distance_value(s.mean_distance), rank_value(s.mean_rank), span_count_value(s.n_spans),
          word_count_value(s.n_words), caps_value(s.n_caps)};
}

inline double total_value(const std::array<double, 5>& v) {
  return v[0] + v[1] + v[2] + v[3] + v[4];
}

// Means are taken over every overlapping-span entry of every merged record.
inline ScoredTopic score_topic(const std::string& phrase_text,
                               std::vector<combine::OverlapRecord> records) {
  if (records.empty()) throw InvalidArgument("score_topic: no records for '" + phrase_text + "'");
  ScoredTopic t;
  t.phrase_text = phrase_text;
  double sum_distance = 0.0;
  double sum_rank = 0.0;
  t.first_position = records.front().phrase.char_start;
  for (const auto& r : records) {
    t.first_position = std::min(t.first_position, r.phrase.char_start);
    for (const auto& m : r.overlapping_spans) {
      sum_distance += m.distance;
      sum_rank += static_cast<double>(m.rank);
      ++t.n_spans;
    }
  }
  if (t.n_spans == 0) {
    throw InvalidArgument("score_topic: '" + phrase_text + "' has no overlapping spans");
  }
  t.mean_distance = sum_distance / static_cast<double>(t.n_spans);
  t.mean_rank = sum_rank / static_cast<double>(t.n_spans);
  for (const auto& w : chunk::words(phrase_text)) {
    ++t.n_words;
    if (utf8::starts_upper(w)) ++t.n_caps;
  }
  t.criterion_values = criterion_values(
      {t.mean_distance, t.mean_rank, t.n_spans, t.n_words, t.n_caps});
  t.total_value = total_value(t.criterion_values);
  t.records = std::move(records);
  return t;
}

// Descending total value, ties by earliest occurrence in the document.
inline std::vector<ScoredTopic> order_topics(std::vector<ScoredTopic> topics) {
  std::stable_sort(topics.begin(), topics.end(), [](const ScoredTopic& a, const ScoredTopic& b) {
    if (a.total_value != b.total_value) return a.total_value > b.total_value;
    return a.first_position < b.first_position;
  });
  return topics;
}

// Dedup, merge records of identical phrase text, score, order, truncate.
inline std::vector<ScoredTopic> postprocess(const std::vector<combine::OverlapRecord>& records,
                                            std::optional<std::size_t> max_topics = std::nullopt) {
  std::vector<std::string> raw;
  std::map<std::string, std::vector<combine::OverlapRecord>> by_text;
  for (const auto& r : records) {
    auto text = r.phrase.text();
    raw.push_back(text);
    by_text[text].push_back(r);
  }
  std::vector<ScoredTopic> topics;
  for (const auto& text : deduplicate(raw)) {
    topics.push_back(score_topic(text, std::move(by_text[text])));
  }
  topics = order_topics(std::move(topics));
  if (max_topics && topics.size() > *max_topics) topics.resize(*max_topics);
  return topics;
}

inline io::TopicEntry to_entry(const ScoredTopic& t) {
  io::TopicEntry e;
  e.phrase = t.phrase_text;
  e.total_value = t.total_value;
  e.criteria = {t.criterion_values[0], t.criterion_values[1], t.criterion_values[2],
                t.criterion_values[3], t.criterion_values[4]};
  e.n_spans = t.n_spans;
  e.mean_rank = t.mean_rank;
  e.mean_distance = t.mean_distance;
  return e;
}

}  // namespace topicgen::post
