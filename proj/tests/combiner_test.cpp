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

#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "topicgen/combiner.hpp"

using namespace topicgen;
using chunk::Pos;

namespace {

chunk::NounPhrase phrase(const std::string& text, const std::vector<Pos>& tags) {
  auto tokens = chunk::tokenize(text);
  EXPECT_EQ(tokens.size(), tags.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) tokens[i].pos = tags[i];
  return chunk::make_phrase(tokens, 0);
}

spans::CandidateSpan span(const std::string& text, std::int64_t rank = 0, double distance = 0.0) {
  spans::CandidateSpan c;
  c.doc_id = "d";
  c.words = chunk::words(text);
  c.rank = rank;
  c.distance = distance;
  return c;
}

}  // namespace

TEST(CombinerTest, BothWordsMatchOnce) {
  const auto p = phrase("ceasefire deal", {Pos::kNoun, Pos::kNoun});
  const std::vector<spans::CandidateSpan> s = {span("a ceasefire deal in")};
  const auto rec = combine::compute_overlap(p, s);
  EXPECT_EQ(p.char_length, 13);
  EXPECT_EQ(rec.length_overlap, 13);
  EXPECT_DOUBLE_EQ(rec.ratio, 1.0);
  EXPECT_TRUE(rec.contains_noun);
  EXPECT_EQ(rec.overlapping_spans.size(), 2u);
  EXPECT_EQ(rec.distinct_spans(), 1u);
}

TEST(CombinerTest, PartialMatch) {
  const auto p = phrase("Kurdish forces", {Pos::kAdj, Pos::kNoun});
  const std::vector<spans::CandidateSpan> s = {span("US-backed Kurdish fighters")};
  const auto rec = combine::compute_overlap(p, s);
  EXPECT_EQ(rec.length_overlap, 7);
  EXPECT_DOUBLE_EQ(rec.ratio, 7.0 / 13.0);
  EXPECT_FALSE(rec.contains_noun);  // only the adjective matched
  EXPECT_FALSE(combine::is_selected(rec));
}

TEST(CombinerTest, MultiplicityPushesRatioAboveOne) {
  const auto p = phrase("Qatar", {Pos::kPropn});
  const std::vector<spans::CandidateSpan> s = {span("Qatar", 0, 0.0), span("in Qatar today", 3, 0.04)};
  const auto rec = combine::compute_overlap(p, s);
  EXPECT_EQ(rec.length_overlap, 10);
  EXPECT_DOUBLE_EQ(rec.ratio, 2.0);
  ASSERT_EQ(rec.overlapping_spans.size(), 2u);
  EXPECT_EQ(rec.overlapping_spans[1].span, 1u);
  EXPECT_EQ(rec.overlapping_spans[1].rank, 3);
  EXPECT_DOUBLE_EQ(rec.overlapping_spans[1].distance, 0.04);
  const std::vector<combine::OverlapRecord> recs = {rec};
  EXPECT_EQ(combine::count_ratio_above_one(recs), 1u);
}

TEST(CombinerTest, CaseSensitive) {
  const auto p = phrase("Qatar", {Pos::kPropn});
  const std::vector<spans::CandidateSpan> s = {span("qatar QATAR")};
  EXPECT_EQ(combine::compute_overlap(p, s).length_overlap, 0);
}

TEST(CombinerTest, SelectionThresholdIsStrict) {
  combine::OverlapRecord rec;
  rec.contains_noun = true;
  rec.ratio = 0.76;
  EXPECT_TRUE(combine::is_selected(rec));
  rec.ratio = 0.75;
  EXPECT_FALSE(combine::is_selected(rec));
  rec.ratio = 1.2;
  rec.contains_noun = false;
  EXPECT_FALSE(combine::is_selected(rec));
}

TEST(CombinerTest, NounMatchBelowThreshold) {
  const auto p = phrase("big cats", {Pos::kAdj, Pos::kNoun});  // 7 chars
  const std::vector<spans::CandidateSpan> s = {span("the cats sat")};
  const auto rec = combine::compute_overlap(p, s);
  EXPECT_DOUBLE_EQ(rec.ratio, 4.0 / 7.0);
  EXPECT_TRUE(rec.contains_noun);
  EXPECT_FALSE(combine::is_selected(rec));
}

// Random phrases and spans over a small vocabulary, checked against a direct
// count of word equalities.
TEST(CombinerTest, AgreesWithBruteForceCount) {
  const std::vector<std::string> vocab = {"Qatar", "deal", "West", "Bank", "talks", "the", "é"};
  std::mt19937_64 rng(3);
  for (int round = 0; round < 1000; ++round) {
    const std::size_t n_words = 1 + rng() % 4;
    std::string text;
    std::vector<Pos> tags;
    std::vector<std::string> pw;
    for (std::size_t i = 0; i < n_words; ++i) {
      pw.push_back(vocab[rng() % vocab.size()]);
      text += (i ? " " : "") + pw.back();
      tags.push_back(rng() % 2 ? Pos::kNoun : Pos::kAdj);
    }
    const auto p = phrase(text, tags);
    std::vector<spans::CandidateSpan> s;
    for (std::size_t k = 0, n = rng() % 5; k < n; ++k) {
      spans::CandidateSpan c;
      for (std::size_t w = 0, m = 1 + rng() % 4; w < m; ++w) c.words.push_back(vocab[rng() % vocab.size()]);
      s.push_back(c);
    }
    std::int64_t overlap = 0;
    std::int64_t total = 0;
    bool noun = false;
    for (std::size_t i = 0; i < pw.size(); ++i) {
      total += static_cast<std::int64_t>(utf8::length(pw[i]));
      for (const auto& c : s) {
        for (const auto& w : c.words) {
          if (w == pw[i]) {
            overlap += static_cast<std::int64_t>(utf8::length(w));
            noun = noun || tags[i] == Pos::kNoun;
          }
        }
      }
    }
    const auto rec = combine::compute_overlap(p, s);
    EXPECT_EQ(rec.length_overlap, overlap);
    EXPECT_EQ(rec.contains_noun, noun);
    EXPECT_DOUBLE_EQ(rec.ratio, static_cast<double>(overlap) / static_cast<double>(total));

    // Adding a span never lowers the overlap.
    auto more = s;
    more.push_back(span(vocab[rng() % vocab.size()]));
    EXPECT_GE(combine::compute_overlap(p, more).length_overlap, rec.length_overlap);
  }
}

TEST(CombinerTest, SelectKeepsDocumentOrderAndOccurrences) {
  const std::vector<chunk::NounPhrase> phrases = {
      phrase("Qatar", {Pos::kPropn}), phrase("talks", {Pos::kNoun}), phrase("Qatar", {Pos::kPropn})};
  const std::vector<spans::CandidateSpan> s = {span("Qatar hosted")};
  const auto kept = combine::select_overlapping_phrases(phrases, s);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].phrase.text(), "Qatar");
  EXPECT_EQ(kept[1].phrase.text(), "Qatar");
  const auto all = std::vector<combine::OverlapRecord>{
      combine::compute_overlap(phrases[0], s), combine::compute_overlap(phrases[1], s)};
  EXPECT_EQ(combine::filter_records(all).size(), 1u);
  EXPECT_TRUE(combine::select_overlapping_phrases(phrases, {}).empty());
}
