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

// Evaluation statistics over annotator scores: per-article aggregation,
// paired real-vs-generated comparison, and a double bootstrap that resamples
// annotators and articles independently, with replacement.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "topicgen/error.hpp"
#include "topicgen/io_formats.hpp"
#include "topicgen/random.hpp"

namespace topicgen::eval {

using io::ScoreTable;
using io::Source;
using io::Variant;

enum class SourceFilter { kAll, kGuardian, kHuffPost };

inline bool matches(SourceFilter f, Source s) {
  switch (f) {
    case SourceFilter::kAll: return true;
    case SourceFilter::kGuardian: return s == Source::kGuardian;
    case SourceFilter::kHuffPost: return s == Source::kHuffPost;
  }
  return false;
}

inline std::string_view to_string(SourceFilter f) {
  switch (f) {
    case SourceFilter::kGuardian: return "guardian";
    case SourceFilter::kHuffPost: return "huffpost";
    case SourceFilter::kAll: break;
  }
  return "all";
}

inline SourceFilter parse_filter(std::string_view name) {
  if (name == "all") return SourceFilter::kAll;
  if (name == "guardian") return SourceFilter::kGuardian;
  if (name == "huffpost") return SourceFilter::kHuffPost;
  throw InvalidArgument("unknown group '" + std::string(name) + "'");
}

// Median; an even count averages the two middle values.
inline double median(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median of an empty set");
  const auto mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower =
      *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

inline double mean(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("mean of an empty set");
  double s = 0.0;
  for (const double v : values) s += v;
  return s / static_cast<double>(values.size());
}

// ---------------------------------------------------------------------------
// Per-article aggregation

struct ArticleStat {
  std::string article_id;
  double mean = 0.0;    // over annotators
  double median = 0.0;  // over annotators
  std::size_t n_scores = 0;
};

struct EvalSummary {
  SourceFilter group = SourceFilter::kAll;
  Variant variant = Variant::kReal;
  double average = 0.0;  // mean of per-article means
  double median = 0.0;   // median of per-article means
  std::size_t n_articles = 0;
  std::vector<ArticleStat> articles;  // sorted by article_id
};

struct VariantSummaries {
  EvalSummary real;
  EvalSummary generated;
};

namespace detail {

struct ArticleScores {
  Source source = Source::kOther;
  std::array<std::vector<double>, 2> scores;  // indexed by Variant
};

inline std::map<std::string, ArticleScores> group_articles(const ScoreTable& table,
                                                           SourceFilter filter) {
  std::map<std::string, ArticleScores> articles;
  std::map<std::string, Source> sources;
  for (const auto& r : table.records) {
    const auto [it, inserted] = sources.emplace(r.article_id, r.source);
    if (!inserted && it->second != r.source) {
      throw FormatError("article '" + r.article_id + "' has records from different sources");
    }
    if (!matches(filter, r.source)) continue;
    auto& a = articles[r.article_id];
    a.source = r.source;
    a.scores[static_cast<std::size_t>(r.variant)].push_back(r.score);
  }
  return articles;
}

}  // namespace detail

// Articles in the group must have at least one score for each variant.
inline VariantSummaries aggregate_scores(const ScoreTable& table,
                                         SourceFilter filter = SourceFilter::kAll) {
  const auto articles = detail::group_articles(table, filter);
  if (articles.empty()) {
    throw InvalidArgument("no articles in group '" + std::string(to_string(filter)) + "'");
  }
  VariantSummaries out;
  for (const Variant v : {Variant::kReal, Variant::kGenerated}) {
    EvalSummary& s = v == Variant::kReal ? out.real : out.generated;
    s.group = filter;
    s.variant = v;
    std::vector<double> means;
    for (const auto& [id, a] : articles) {
      const auto& scores = a.scores[static_cast<std::size_t>(v)];
      if (scores.empty()) {
        throw InvalidArgument("article '" + id + "' has no " + std::string(io::to_string(v)) +
                              " scores");
      }
      ArticleStat stat{id, mean(scores), median(scores), scores.size()};
      means.push_back(stat.mean);
      s.articles.push_back(std::move(stat));
    }
    s.n_articles = means.size();
    s.average = mean(means);
    s.median = median(means);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Paired comparison

struct PairedComparison {
  std::int64_t generated_lower = 0;
  std::int64_t equal = 0;
  std::int64_t generated_higher = 0;

  std::int64_t pairs() const { return generated_lower + equal + generated_higher; }
  std::array<double, 3> shares() const {
    const double n = static_cast<double>(pairs());
    return {generated_lower / n, equal / n, generated_higher / n};
  }
};

// Over every (annotator, article) scored on both variants.
inline PairedComparison compare_pairs(const ScoreTable& table,
                                      SourceFilter filter = SourceFilter::kAll) {
  std::map<std::pair<std::string, std::string>, std::array<int, 2>> pairs;
  for (const auto& r : table.records) {
    if (!matches(filter, r.source)) continue;
    auto [it, inserted] = pairs.try_emplace({r.annotator_id, r.article_id}, std::array<int, 2>{-1, -1});
    it->second[static_cast<std::size_t>(r.variant)] = r.score;
  }
  PairedComparison pc;
  for (const auto& [key, s] : pairs) {
    const int real = s[0];
    const int gen = s[1];
    if (real < 0 || gen < 0) continue;
    if (gen < real) {
      ++pc.generated_lower;
    } else if (gen == real) {
      ++pc.equal;
    } else {
      ++pc.generated_higher;
    }
  }
  if (pc.pairs() == 0) throw InvalidArgument("compare_pairs: no annotator scored both variants");
  return pc;
}

// ---------------------------------------------------------------------------
// Double bootstrap

// Dense annotator x article x variant scores of a complete design.
class ScoreMatrix {
 public:
  static ScoreMatrix from_table(const ScoreTable& table, SourceFilter filter = SourceFilter::kAll) {
    ScoreMatrix m;
    std::set<std::string> annotators;
    std::set<std::string> articles;
    for (const auto& r : table.records) {
      if (!matches(filter, r.source)) continue;
      annotators.insert(r.annotator_id);
      articles.insert(r.article_id);
    }
    if (annotators.empty()) {
      throw InvalidArgument("no records in group '" + std::string(to_string(filter)) + "'");
    }
    m.annotators_.assign(annotators.begin(), annotators.end());
    m.articles_.assign(articles.begin(), articles.end());
    m.scores_.assign(m.annotators_.size() * m.articles_.size() * 2, -1);
    std::map<std::string, std::size_t> a_index;
    std::map<std::string, std::size_t> m_index;
    for (std::size_t i = 0; i < m.annotators_.size(); ++i) a_index[m.annotators_[i]] = i;
    for (std::size_t i = 0; i < m.articles_.size(); ++i) m_index[m.articles_[i]] = i;
    for (const auto& r : table.records) {
      if (!matches(filter, r.source)) continue;
      m.scores_[m.slot(a_index[r.annotator_id], m_index[r.article_id], r.variant)] =
          static_cast<std::int8_t>(r.score);
    }
    for (std::size_t a = 0; a < m.annotators_.size(); ++a) {
      for (std::size_t j = 0; j < m.articles_.size(); ++j) {
        for (const Variant v : {Variant::kReal, Variant::kGenerated}) {
          if (m.scores_[m.slot(a, j, v)] < 0) {
            throw InvalidArgument("incomplete design: annotator '" + m.annotators_[a] +
                                  "' has no " + std::string(io::to_string(v)) +
                                  " score for article '" + m.articles_[j] + "'");
          }
        }
      }
    }
    return m;
  }

  std::size_t n_annotators() const { return annotators_.size(); }
  std::size_t n_articles() const { return articles_.size(); }
  const std::vector<std::string>& annotators() const { return annotators_; }
  const std::vector<std::string>& articles() const { return articles_; }

  int score(std::size_t annotator, std::size_t article, Variant v) const {
    return scores_[slot(annotator, article, v)];
  }

 private:
  std::size_t slot(std::size_t a, std::size_t m, Variant v) const {
    return (a * articles_.size() + m) * 2 + static_cast<std::size_t>(v);
  }

  std::vector<std::string> annotators_;
  std::vector<std::string> articles_;
  std::vector<std::int8_t> scores_;
};

// A statistic of a resampled table: the resample is the cross product of the
// drawn annotator and article indices (repeats count repeatedly).
using Statistic = std::function<double(const ScoreMatrix&, std::span<const std::uint32_t>,
                                       std::span<const std::uint32_t>)>;

namespace detail {

template <typename PerCell>
double cross_mean(const ScoreMatrix& m, std::span<const std::uint32_t> ann,
                  std::span<const std::uint32_t> art, PerCell per_cell) {
  double total = 0.0;
  for (const auto a : ann) {
    double row = 0.0;
    for (const auto j : art) {
      row += per_cell(m.score(a, j, Variant::kReal), m.score(a, j, Variant::kGenerated));
    }
    total += row;
  }
  return total / (static_cast<double>(ann.size()) * static_cast<double>(art.size()));
}

}  // namespace detail

// mean-diff, mean-real, mean-generated, share-lower, share-equal, share-higher
// ("lower"/"higher" describe the generated score relative to the real one).
inline Statistic named_statistic(std::string_view name) {
  using Idx = std::span<const std::uint32_t>;
  if (name == "mean-diff") {
    return [](const ScoreMatrix& m, Idx a, Idx j) {
      return detail::cross_mean(m, a, j, [](int r, int g) { return double(g - r); });
    };
  }
  if (name == "mean-real") {
    return [](const ScoreMatrix& m, Idx a, Idx j) {
      return detail::cross_mean(m, a, j, [](int r, int) { return double(r); });
    };
  }
  if (name == "mean-generated") {
    return [](const ScoreMatrix& m, Idx a, Idx j) {
      return detail::cross_mean(m, a, j, [](int, int g) { return double(g); });
    };
  }
  if (name == "share-lower") {
    return [](const ScoreMatrix& m, Idx a, Idx j) {
      return detail::cross_mean(m, a, j, [](int r, int g) { return g < r ? 1.0 : 0.0; });
    };
  }
  if (name == "share-equal") {
    return [](const ScoreMatrix& m, Idx a, Idx j) {
      return detail::cross_mean(m, a, j, [](int r, int g) { return g == r ? 1.0 : 0.0; });
    };
  }
  if (name == "share-higher") {
    return [](const ScoreMatrix& m, Idx a, Idx j) {
      return detail::cross_mean(m, a, j, [](int r, int g) { return g > r ? 1.0 : 0.0; });
    };
  }
  throw InvalidArgument("unknown statistic '" + std::string(name) + "'");
}

struct BootstrapResult {
  std::string statistic;
  double point_estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
  bool operator==(const BootstrapResult&) const = default;
};

inline constexpr std::int64_t kMinSamples = 100;

// Linear interpolation between closest ranks of sorted data, p in [0, 1].
inline double percentile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InvalidArgument("percentile of an empty sample");
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// Sample i draws its annotators then its articles from CounterRng(seed, i), so
// the stream is the same for any number of worker threads.
inline std::vector<double> bootstrap_samples(const ScoreMatrix& m, const Statistic& stat,
                                             std::int64_t n_samples, std::uint64_t seed,
                                             unsigned jobs = 1) {
  if (n_samples < kMinSamples) {
    throw InvalidArgument("bootstrap needs at least " + std::to_string(kMinSamples) + " samples");
  }
  std::vector<double> out(static_cast<std::size_t>(n_samples));
  const auto work = [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint32_t> ann(m.n_annotators());
    std::vector<std::uint32_t> art(m.n_articles());
    for (std::size_t i = begin; i < end; ++i) {
      CounterRng rng(seed, i);
      for (auto& a : ann) a = static_cast<std::uint32_t>(rng.below(m.n_annotators()));
      for (auto& j : art) j = static_cast<std::uint32_t>(rng.below(m.n_articles()));
      out[i] = stat(m, ann, art);
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n_samples)));
  if (jobs == 1) {
    work(0, out.size());
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (out.size() + jobs - 1) / jobs;
  for (unsigned t = 0; t < jobs; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(out.size(), begin + chunk);
    if (begin < end) pool.emplace_back(work, begin, end);
  }
  for (auto& th : pool) th.join();
  return out;
}

inline double point_estimate(const ScoreMatrix& m, const Statistic& stat) {
  std::vector<std::uint32_t> ann(m.n_annotators());
  std::vector<std::uint32_t> art(m.n_articles());
  for (std::uint32_t i = 0; i < ann.size(); ++i) ann[i] = i;
  for (std::uint32_t i = 0; i < art.size(); ++i) art[i] = i;
  return stat(m, ann, art);
}

// 95% percentile interval.
inline BootstrapResult bootstrap_ci(const ScoreMatrix& m, std::string_view statistic,
                                    std::int64_t n_samples, std::uint64_t seed, unsigned jobs = 1) {
  const auto stat = named_statistic(statistic);
  auto samples = bootstrap_samples(m, stat, n_samples, seed, jobs);
  std::sort(samples.begin(), samples.end());
  BootstrapResult r;
  r.statistic = std::string(statistic);
  r.point_estimate = point_estimate(m, stat);
  r.ci_low = percentile(samples, 0.025);
  r.ci_high = percentile(samples, 0.975);
  r.n_samples = n_samples;
  r.seed = seed;
  return r;
}

inline BootstrapResult bootstrap_ci(const ScoreTable& table, std::string_view statistic,
                                    std::int64_t n_samples, std::uint64_t seed,
                                    SourceFilter filter = SourceFilter::kAll, unsigned jobs = 1) {
  return bootstrap_ci(ScoreMatrix::from_table(table, filter), statistic, n_samples, seed, jobs);
}

}  // namespace topicgen::eval
