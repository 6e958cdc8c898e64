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

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "topicgen/pipeline.hpp"
#include "topicgen/postprocessor.hpp"

using namespace topicgen;
using post::deduplicate;

namespace {

using Strings = std::vector<std::string>;

io::Json load_json(const std::string& path) {
  std::ifstream in(path);
  return io::Json::parse(in);
}

// Pairwise check of the 50% rule written without the library helpers.
bool redundant_pair(const std::string& p, const std::string& q, std::size_t pi, std::size_t qi) {
  const auto pw = chunk::words(p);
  auto qw = chunk::words(q);
  std::size_t pc = 0, qc = 0;
  for (const auto& w : pw) pc += utf8::length(w);
  for (const auto& w : qw) qc += utf8::length(w);
  std::size_t hits = 0;
  for (const auto& w : pw) {
    auto it = std::find(qw.begin(), qw.end(), w);
    if (it != qw.end()) {
      qw.erase(it);
      ++hits;
    }
  }
  const bool longer = qw.size() + hits > pw.size() ||
                      (qw.size() + hits == pw.size() && qc > pc) ||
                      (qw.size() + hits == pw.size() && qc == pc && qi < pi && hits == pw.size());
  return longer && 2 * hits >= pw.size();
}

combine::OverlapRecord record(const std::string& text, std::int64_t start,
                              std::vector<std::pair<std::int64_t, double>> matches) {
  combine::OverlapRecord r;
  r.phrase.tokens = chunk::tokenize(text);
  for (auto& t : r.phrase.tokens) t.pos = chunk::Pos::kNoun;
  r.phrase.char_start = start;
  for (std::size_t i = 0; i < matches.size(); ++i) {
    r.overlapping_spans.push_back({i, 0, 0, 1, matches[i].second, matches[i].first});
  }
  r.contains_noun = true;
  r.ratio = 1.0;
  return r;
}

}  // namespace

TEST(DedupTest, TrumpExample) {
  const Strings in = {"Trump", "Kurdish forces", "Donald Trump", "Trump", "fighters",
                      "US-backed Kurdish fighters"};
  EXPECT_EQ(deduplicate(in), (Strings{"Donald Trump", "US-backed Kurdish fighters"}));
}

TEST(DedupTest, QatarExample) {
  const auto expected = load_json(TOPICGEN_FIXTURES "/qatar_expected.json");
  const auto raw = expected["raw_topics"].get<Strings>();
  ASSERT_EQ(raw.size(), 17u);
  const auto out = deduplicate(raw);
  EXPECT_EQ(std::set<std::string>(out.begin(), out.end()),
            (std::set<std::string>{"ceasefire deal", "Qatar", "Palestinians",
                                   "Israeli-occupied West Bank"}));
  EXPECT_EQ(out.size(), 4u);
}

TEST(DedupTest, SmallCases) {
  EXPECT_TRUE(deduplicate({}).empty());
  EXPECT_EQ(deduplicate({"Qatar"}), (Strings{"Qatar"}));
  EXPECT_EQ(deduplicate({"big cat", "cat big"}), (Strings{"big cat"}));
  EXPECT_EQ(deduplicate({"cat", "Cat"}), (Strings{"cat", "Cat"}));
  // Half of "West Bank talks" is not enough: only one of three words.
  EXPECT_EQ(deduplicate({"West Bank talks", "Bank robbery suspects arrested"}),
            (Strings{"West Bank talks", "Bank robbery suspects arrested"}));
  EXPECT_EQ(deduplicate({"West Bank", "Bank robbery suspects"}), (Strings{"Bank robbery suspects"}));
}

TEST(DedupTest, RandomListsAreIdempotentAndNonRedundant) {
  const Strings vocab = {"Qatar", "deal", "West", "Bank", "Gaza", "ceasefire", "talks"};
  std::mt19937_64 rng(11);
  for (int round = 0; round < 2000; ++round) {
    Strings list;
    for (std::size_t i = 0, n = rng() % 8; i < n; ++i) {
      std::string p;
      for (std::size_t w = 0, m = 1 + rng() % 3; w < m; ++w) p += (w ? " " : "") + vocab[rng() % vocab.size()];
      list.push_back(p);
    }
    const auto once = deduplicate(list);
    EXPECT_EQ(deduplicate(once), once);
    for (std::size_t i = 0; i < once.size(); ++i) {
      EXPECT_NE(std::find(list.begin(), list.end(), once[i]), list.end());
      for (std::size_t j = 0; j < once.size(); ++j) {
        if (i != j) EXPECT_FALSE(redundant_pair(once[i], once[j], i, j)) << once[i] << " / " << once[j];
      }
    }
  }
}

TEST(CriteriaTest, Boundaries) {
  EXPECT_EQ(post::distance_value(0.4), 0.0);
  EXPECT_EQ(post::distance_value(0.0), 1.0);
  EXPECT_EQ(post::rank_value(4.0), 0.0);
  EXPECT_EQ(post::rank_value(0.0), 1.0);
  EXPECT_EQ(post::span_count_value(4), 1.0);
  EXPECT_EQ(post::span_count_value(7), 1.0);
  EXPECT_EQ(post::word_count_value(3), 1.0);
  EXPECT_EQ(post::word_count_value(5), 1.0);
  EXPECT_EQ(post::caps_value(3), 1.0);
  EXPECT_EQ(post::caps_value(4), 1.0);
  EXPECT_EQ(post::span_count_value(0), 0.0);
  EXPECT_DOUBLE_EQ(post::word_count_value(2), 2.0 / 3.0);
}

TEST(CriteriaTest, ClampedForRandomInputs) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> wide(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const auto n = static_cast<std::int64_t>(rng() % 40) - 10;
    for (const double v : {post::distance_value(wide(rng)), post::rank_value(wide(rng)),
                           post::span_count_value(n), post::word_count_value(n), post::caps_value(n)}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(ScoreTopicTest, LongCapitalizedPhrase) {
  const auto t = post::score_topic("Israeli-occupied West Bank",
                                   {record("Israeli-occupied West Bank", 30, {{0, 0.0}, {0, 0.0}, {0, 0.0}, {0, 0.0}})});
  EXPECT_EQ(t.n_words, 3);
  EXPECT_EQ(t.n_caps, 3);
  EXPECT_EQ(t.criterion_values[3], 1.0);
  EXPECT_EQ(t.criterion_values[4], 1.0);
  EXPECT_EQ(t.total_value, 5.0);
  EXPECT_EQ(t.first_position, 30);
}

TEST(ScoreTopicTest, MeansCoverAllOccurrences) {
  const auto t = post::score_topic("Qatar", {record("Qatar", 50, {{2, 0.02}}),
                                             record("Qatar", 10, {{0, 0.0}, {4, 0.04}})});
  EXPECT_EQ(t.n_spans, 3);
  EXPECT_DOUBLE_EQ(t.mean_rank, 2.0);
  EXPECT_DOUBLE_EQ(t.mean_distance, 0.02);
  EXPECT_EQ(t.first_position, 10);
  EXPECT_THROW(post::score_topic("x", {}), InvalidArgument);
  EXPECT_THROW(post::score_topic("x", {record("x", 0, {})}), InvalidArgument);
}

TEST(OrderTest, TotalsThenPosition) {
  std::vector<post::ScoredTopic> topics(3);
  topics[0].phrase_text = "late";
  topics[0].total_value = 3.0;
  topics[0].first_position = 40;
  topics[1].phrase_text = "best";
  topics[1].total_value = 4.0;
  topics[1].first_position = 90;
  topics[2].phrase_text = "early";
  topics[2].total_value = 3.0;
  topics[2].first_position = 5;
  const auto ordered = post::order_topics(topics);
  EXPECT_EQ(ordered[0].phrase_text, "best");
  EXPECT_EQ(ordered[1].phrase_text, "early");
  EXPECT_EQ(ordered[2].phrase_text, "late");
}

TEST(PostprocessTest, QatarGoldenOrder) {
  const auto expected = load_json(TOPICGEN_FIXTURES "/qatar_expected.json");
  std::ifstream corpus(TOPICGEN_FIXTURES "/qatar_article.jsonl");
  const auto doc = io::parse_corpus(corpus).front();
  std::ifstream dump_in(TOPICGEN_FIXTURES "/qatar_dumps/qatar.json");
  const auto dump = io::parse_span_dump(dump_in);
  const auto result = extract_document(doc, &dump, PipelineConfig{});
  const auto& topics = result.output.topics;
  ASSERT_EQ(topics.size(), expected["ordered"].size());
  for (std::size_t i = 0; i < topics.size(); ++i) {
    const auto& e = expected["ordered"][i];
    EXPECT_EQ(topics[i].phrase, e["phrase"].get<std::string>());
    EXPECT_NEAR(topics[i].total_value, e["total_value"].get<double>(), 1e-12);
    EXPECT_EQ(topics[i].n_spans, e["n_spans"].get<std::int64_t>());
  }
  ASSERT_GE(topics.size(), 3u);
  EXPECT_EQ(topics[0].phrase, "Israeli-occupied West Bank");
  EXPECT_EQ(topics[1].phrase, "ceasefire deal");
  EXPECT_EQ(topics[2].phrase, "Qatar");
}

TEST(PostprocessTest, Truncation) {
  const std::vector<combine::OverlapRecord> recs = {
      record("Gaza", 0, {{3, 0.03}}), record("Qatar", 10, {{0, 0.0}}), record("Doha", 20, {{1, 0.01}})};
  const auto all = post::postprocess(recs);
  ASSERT_EQ(all.size(), 3u);
  EXPECT_EQ(all[0].phrase_text, "Qatar");
  const auto two = post::postprocess(recs, 2);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[1].phrase_text, "Doha");
  EXPECT_TRUE(post::postprocess({}).empty());
}
