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

// Candidate spans from title generation: score = start logit + end logit,
// rank by descending score within a generation step, and relative distance to
// the step's best candidate.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topicgen/chunker.hpp"
#include "topicgen/error.hpp"
#include "topicgen/io_formats.hpp"
#include "topicgen/random.hpp"
#include "topicgen/utf8.hpp"

namespace topicgen::spans {

struct CandidateSpan {
  std::string doc_id;
  std::int64_t span_index = 0;
  std::int64_t char_start = 0;
  std::int64_t char_end = 0;
  std::vector<std::string> words;
  double score = 0.0;
  std::int64_t rank = 0;
  double distance = 0.0;
  bool operator==(const CandidateSpan&) const = default;
};

struct FilterConfig {
  double max_distance = 0.05;  // inclusive
  std::int64_t max_rank = 15;  // exclusive

  void validate() const {
    if (!(max_distance > 0.0)) throw InvalidArgument("max_distance must be > 0");
    if (max_rank < 1) throw InvalidArgument("max_rank must be >= 1");
  }
};

// Maps code point offsets to byte offsets; entry n is the text's byte size.
inline std::vector<std::size_t> code_point_offsets(std::string_view text) {
  std::vector<std::size_t> bytes;
  bytes.reserve(text.size() + 1);
  for (std::size_t pos = 0; pos < text.size(); pos += utf8::decode(text, pos).length) {
    bytes.push_back(pos);
  }
  bytes.push_back(text.size());
  return bytes;
}

// One CandidateSpan per raw candidate, steps in order, candidates in dump
// order. The dump is validated against the text first.
inline std::vector<CandidateSpan> score_candidates(const io::SpanDump& dump, std::string_view text) {
  const auto offsets = code_point_offsets(text);
  io::validate_span_dump(dump, static_cast<std::int64_t>(offsets.size() - 1));
  std::vector<CandidateSpan> out;
  for (const auto& step : dump.steps) {
    for (const auto& raw : step.candidates) {
      CandidateSpan c;
      c.doc_id = dump.doc_id;
      c.span_index = step.span_index;
      c.char_start = raw.token_start;
      c.char_end = raw.token_end;
      const auto b0 = offsets[static_cast<std::size_t>(raw.token_start)];
      const auto b1 = offsets[static_cast<std::size_t>(raw.token_end)];
      c.words = chunk::words(text.substr(b0, b1 - b0));
      c.score = raw.logit_start + raw.logit_end;
      out.push_back(std::move(c));
    }
  }
  return out;
}

// Relative gap to the best score. Divides by |top| so the value stays
// non-negative when the best score is negative; a zero top uses the raw gap.
inline double relative_distance(double top, double score) {
  if (top == 0.0) return top - score;
  return (top - score) / std::abs(top);
}

// Sets rank and distance in place for the spans of one generation step.
// Ranks follow descending score, ties by (char_start, char_end).
inline void rank_and_distance(std::span<CandidateSpan> step) {
  if (step.empty()) throw InvalidArgument("rank_and_distance: empty step");
  for (const auto& c : step) {
    if (c.doc_id != step.front().doc_id || c.span_index != step.front().span_index) {
      throw InvalidArgument("rank_and_distance: spans from more than one step");
    }
  }
  std::vector<std::size_t> order(step.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = step[a];
    const auto& y = step[b];
    if (x.score != y.score) return x.score > y.score;
    if (x.char_start != y.char_start) return x.char_start < y.char_start;
    if (x.char_end != y.char_end) return x.char_end < y.char_end;
    return a < b;
  });
  const double top = step[order.front()].score;
  for (std::size_t r = 0; r < order.size(); ++r) {
    auto& c = step[order[r]];
    c.rank = static_cast<std::int64_t>(r);
    c.distance = r == 0 ? 0.0 : relative_distance(top, c.score);
  }
}

// score_candidates followed by rank_and_distance on every step.
inline std::vector<CandidateSpan> rank_dump(const io::SpanDump& dump, std::string_view text) {
  auto spans = score_candidates(dump, text);
  std::size_t begin = 0;
  for (const auto& step : dump.steps) {
    rank_and_distance(std::span(spans).subspan(begin, step.candidates.size()));
    begin += step.candidates.size();
  }
  return spans;
}

inline bool passes(const CandidateSpan& c, const FilterConfig& cfg) {
  return c.distance <= cfg.max_distance && c.rank < cfg.max_rank;
}

inline std::vector<CandidateSpan> filter_candidates(std::span<const CandidateSpan> spans,
                                                    const FilterConfig& cfg = {}) {
  cfg.validate();
  std::vector<CandidateSpan> kept;
  for (const auto& c : spans) {
    if (passes(c, cfg)) kept.push_back(c);
  }
  return kept;
}

// ---------------------------------------------------------------------------
// Surrogate generator
//
// Stands in for a title-generation model. Candidates are token n-grams that do
// not contain punctuation. A token's base weight rises with earlier position,
// higher in-document frequency and capitalization, and falls for closed-class
// words. Start and end logits add seeded per-step noise; tokens of each step's
// winning span are penalised in later steps so the path moves on. None of the
// constants below come from a trained model.

struct SurrogateWeights {
  double base = 4.0;
  double position = 3.0;        // scaled by 1 - token_index / n_tokens
  double frequency = 1.5;       // scaled by log(term frequency)
  double capitalized = 1.5;
  double closed_class = 2.5;    // subtracted for lexicon function words
  double noise = 0.35;          // half-width of uniform noise per logit
  double used = 2.0;            // subtracted for tokens already on the path
  double length = 0.1;          // subtracted per extra token in the span
};

struct SurrogateConfig {
  std::int64_t steps = 5;
  std::int64_t per_step = 50;
  std::uint64_t seed = 0;
  std::int64_t max_ngram = 4;
  SurrogateWeights weights;

  void validate() const {
    if (steps < 1) throw InvalidArgument("surrogate steps must be >= 1");
    if (per_step < 1) throw InvalidArgument("surrogate per_step must be >= 1");
    if (max_ngram < 1) throw InvalidArgument("surrogate max_ngram must be >= 1");
  }
};

inline io::SpanDump surrogate_generate(const io::DocumentRecord& doc, const SurrogateConfig& cfg = {}) {
  cfg.validate();
  const auto tokens = chunk::tokenize(doc.text);
  const auto& lexicon = chunk::RuleTagger::bundled();

  std::vector<bool> is_word(tokens.size());
  std::map<std::string, int> tf;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto cp = utf8::decode(tokens[i].surface, 0).cp;
    is_word[i] = !utf8::is_punct(cp);
    if (is_word[i]) ++tf[tokens[i].surface];
  }
  if (std::none_of(is_word.begin(), is_word.end(), [](bool b) { return b; })) {
    throw InvalidArgument("document '" + doc.doc_id + "' has no word tokens");
  }

  const auto& w = cfg.weights;
  const double n = static_cast<double>(tokens.size());
  std::vector<double> weight(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    double x = w.base + w.position * (1.0 - static_cast<double>(i) / n);
    if (is_word[i]) x += w.frequency * std::log(static_cast<double>(tf[t.surface]));
    if (t.is_capitalized) x += w.capitalized;
    std::string lower = t.surface;
    for (char& c : lower) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    const auto lex = lexicon.lookup(lower);
    if (lex && *lex != chunk::Pos::kAdj && *lex != chunk::Pos::kNum) x -= w.closed_class;
    weight[i] = x;
  }

  struct Window {
    std::size_t first, last;  // token indices, inclusive
  };
  std::vector<Window> windows;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (std::size_t j = i; j < tokens.size() && j - i < static_cast<std::size_t>(cfg.max_ngram);
         ++j) {
      if (!is_word[j]) break;
      if (is_word[i]) windows.push_back({i, j});
    }
  }

  io::SpanDump dump;
  dump.doc_id = doc.doc_id;
  std::vector<bool> used(tokens.size(), false);
  for (std::int64_t step = 0; step < cfg.steps; ++step) {
    const CounterRng rng(cfg.seed, static_cast<std::uint64_t>(step));
    const auto noise = [&](std::size_t token, std::uint64_t side) {
      const double u = static_cast<double>(rng.at(2 * token + side) >> 11) * 0x1.0p-53;
      return w.noise * (2.0 * u - 1.0);
    };
    struct Scored {
      Window win;
      io::RawCandidate raw;
    };
    std::vector<Scored> scored;
    scored.reserve(windows.size());
    for (const auto& win : windows) {
      io::RawCandidate raw;
      raw.token_start = tokens[win.first].char_start;
      raw.token_end = tokens[win.last].char_end;
      raw.logit_start = weight[win.first] + noise(win.first, 0) - (used[win.first] ? w.used : 0.0);
      raw.logit_end = weight[win.last] + noise(win.last, 1) - (used[win.last] ? w.used : 0.0) -
                      w.length * static_cast<double>(win.last - win.first);
      scored.push_back({win, raw});
    }
    const auto keep = std::min<std::size_t>(scored.size(), static_cast<std::size_t>(cfg.per_step));
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                      scored.end(), [](const Scored& a, const Scored& b) {
                        const double sa = a.raw.logit_start + a.raw.logit_end;
                        const double sb = b.raw.logit_start + b.raw.logit_end;
                        if (sa != sb) return sa > sb;
                        if (a.raw.token_start != b.raw.token_start) {
                          return a.raw.token_start < b.raw.token_start;
                        }
                        return a.raw.token_end < b.raw.token_end;
                      });
    scored.resize(keep);
    for (std::size_t t = scored.front().win.first; t <= scored.front().win.last; ++t) used[t] = true;
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
      if (a.raw.token_start != b.raw.token_start) return a.raw.token_start < b.raw.token_start;
      return a.raw.token_end < b.raw.token_end;
    });
    io::GenerationStep gs;
    gs.span_index = step;
    for (const auto& s : scored) gs.candidates.push_back(s.raw);
    dump.steps.push_back(std::move(gs));
  }
  return dump;
}

}  // namespace topicgen::spans
