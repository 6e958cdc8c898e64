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

// Distance surface over (span index, candidate rank): the mean distance to the
// best candidate, aggregated across a corpus of span dumps.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "topicgen/error.hpp"
#include "topicgen/io_formats.hpp"
#include "topicgen/span_model.hpp"

namespace topicgen::analytics {

// Exact floating point sum (Shewchuk's non-overlapping partials). value() is
// the correctly rounded total, so it does not depend on the order values were
// added or on how partial sums were merged.
class ExactSum {
 public:
  void add(double x) {
    std::size_t kept = 0;
    for (std::size_t j = 0; j < partials_.size(); ++j) {
      double y = partials_[j];
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials_[kept++] = lo;
      x = hi;
    }
    partials_.resize(kept);
    partials_.push_back(x);
  }

  void merge(const ExactSum& other) {
    for (const double p : other.partials_) add(p);
  }

  double value() const {
    std::size_t n = partials_.size();
    if (n == 0) return 0.0;
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
      const double x = hi;
      const double y = partials_[--n];
      hi = x + y;
      lo = y - (hi - x);
      if (lo != 0.0) break;
    }
    // Round half-even correction when the remaining partials push the tie.
    if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0))) {
      const double y = lo * 2.0;
      const double x = hi + y;
      if (y == x - hi) hi = x;
    }
    return hi;
  }

 private:
  std::vector<double> partials_;
};

struct SurfaceLimits {
  std::int64_t max_span_index = 15;  // rows 0 .. max_span_index - 1
  std::int64_t max_rank = 50;        // columns 0 .. max_rank - 1
};

// Mergeable accumulator. Cells outside the limits are ignored.
class DistanceSurface {
 public:
  explicit DistanceSurface(SurfaceLimits limits = {}) : limits_(limits) {
    if (limits.max_span_index < 1 || limits.max_rank < 1) {
      throw InvalidArgument("surface limits must be positive");
    }
    sums_.resize(static_cast<std::size_t>(limits.max_span_index * limits.max_rank));
    counts_.assign(sums_.size(), 0);
  }

  const SurfaceLimits& limits() const { return limits_; }

  void add(std::int64_t span_index, std::int64_t rank, double distance) {
    if (span_index < 0 || rank < 0 || span_index >= limits_.max_span_index ||
        rank >= limits_.max_rank) {
      return;
    }
    const auto i = index(span_index, rank);
    sums_[i].add(distance);
    ++counts_[i];
  }

  void add(std::span<const spans::CandidateSpan> ranked) {
    for (const auto& c : ranked) add(c.span_index, c.rank, c.distance);
  }

  // Scores and ranks every step of the dump, then accumulates it.
  void add(const io::SpanDump& dump) { add(ranked_spans(dump)); }

  void merge(const DistanceSurface& other) {
    if (other.limits_.max_span_index != limits_.max_span_index ||
        other.limits_.max_rank != limits_.max_rank) {
      throw InvalidArgument("cannot merge surfaces with different limits");
    }
    for (std::size_t i = 0; i < sums_.size(); ++i) {
      sums_[i].merge(other.sums_[i]);
      counts_[i] += other.counts_[i];
    }
  }

  std::int64_t count(std::int64_t span_index, std::int64_t rank) const {
    return counts_[index(span_index, rank)];
  }

  double mean_distance(std::int64_t span_index, std::int64_t rank) const {
    const auto i = index(span_index, rank);
    return counts_[i] == 0 ? 0.0 : sums_[i].value() / static_cast<double>(counts_[i]);
  }

  bool row_populated(std::int64_t span_index) const {
    for (std::int64_t r = 0; r < limits_.max_rank; ++r) {
      if (count(span_index, r) > 0) return true;
    }
    return false;
  }

  bool operator==(const DistanceSurface& other) const {
    if (limits_.max_span_index != other.limits_.max_span_index ||
        limits_.max_rank != other.limits_.max_rank) {
      return false;
    }
    for (std::int64_t s = 0; s < limits_.max_span_index; ++s) {
      for (std::int64_t r = 0; r < limits_.max_rank; ++r) {
        if (count(s, r) != other.count(s, r) || mean_distance(s, r) != other.mean_distance(s, r)) {
          return false;
        }
      }
    }
    return true;
  }

  // Populated cells only, "%.6f" distances.
  void write_csv(std::ostream& out) const {
    out << "span_index,rank,mean_distance,count\n";
    char buf[64];
    for (std::int64_t s = 0; s < limits_.max_span_index; ++s) {
      for (std::int64_t r = 0; r < limits_.max_rank; ++r) {
        if (count(s, r) == 0) continue;
        std::snprintf(buf, sizeof buf, "%.6f", mean_distance(s, r));
        out << s << ',' << r << ',' << buf << ',' << count(s, r) << '\n';
      }
    }
  }

  std::string csv() const {
    std::ostringstream out;
    write_csv(out);
    return out.str();
  }

  // Ranking needs only scores, so no document text is required here.
  static std::vector<spans::CandidateSpan> ranked_spans(const io::SpanDump& dump) {
    io::validate_span_dump(dump);
    std::vector<spans::CandidateSpan> out;
    for (const auto& step : dump.steps) {
      const auto begin = out.size();
      for (const auto& raw : step.candidates) {
        spans::CandidateSpan c;
        c.doc_id = dump.doc_id;
        c.span_index = step.span_index;
        c.char_start = raw.token_start;
        c.char_end = raw.token_end;
        c.score = raw.logit_start + raw.logit_end;
        out.push_back(std::move(c));
      }
      spans::rank_and_distance(std::span(out).subspan(begin));
    }
    return out;
  }

 private:
  std::size_t index(std::int64_t span_index, std::int64_t rank) const {
    return static_cast<std::size_t>(span_index * limits_.max_rank + rank);
  }

  SurfaceLimits limits_;
  std::vector<ExactSum> sums_;
  std::vector<std::int64_t> counts_;
};

template <typename Range>
DistanceSurface aggregate_surface(const Range& dumps, SurfaceLimits limits = {}) {
  DistanceSurface surface(limits);
  for (const io::SpanDump& d : dumps) surface.add(d);
  return surface;
}

// ---------------------------------------------------------------------------
// Stabilization

struct StabilizationOptions {
  double epsilon = 0.01;         // max-norm tolerance between successive rows
  double knee_fraction = 0.2;    // knee: first slope below this fraction of the first slope
  std::optional<std::int64_t> rows;  // rows analyzed; default: up to the last populated row
};

struct StabilizationReport {
  std::vector<std::vector<double>> profiles;  // per span index, over ranks 0..k-1
  std::vector<double> successive_diffs;       // max-norm |profile[s+1] - profile[s]|
  std::int64_t stable_from = 0;               // smallest s with all later diffs < epsilon
  std::vector<std::optional<std::int64_t>> knees;
};

inline StabilizationReport stabilization_report(const DistanceSurface& surface,
                                                const StabilizationOptions& opt = {}) {
  const auto& lim = surface.limits();
  std::int64_t rows = 0;
  if (opt.rows) {
    rows = std::min(*opt.rows, lim.max_span_index);
  } else {
    for (std::int64_t s = 0; s < lim.max_span_index; ++s) {
      if (surface.row_populated(s)) rows = s + 1;
    }
  }
  if (rows <= 0) throw InvalidArgument("stabilization_report: surface has no data");

  std::vector<std::int64_t> missing;
  for (std::int64_t s = 0; s < rows; ++s) {
    if (!surface.row_populated(s)) missing.push_back(s);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto s : missing) list += (list.empty() ? "" : ", ") + std::to_string(s);
    throw InvalidArgument("stabilization_report: no data for span index rows " + list);
  }

  StabilizationReport rep;
  for (std::int64_t s = 0; s < rows; ++s) {
    std::vector<double> profile;
    for (std::int64_t r = 0; r < lim.max_rank && surface.count(s, r) > 0; ++r) {
      profile.push_back(surface.mean_distance(s, r));
    }
    rep.profiles.push_back(std::move(profile));
  }

  for (std::size_t s = 0; s + 1 < rep.profiles.size(); ++s) {
    const auto& a = rep.profiles[s];
    const auto& b = rep.profiles[s + 1];
    double diff = 0.0;
    for (std::size_t r = 0; r < std::min(a.size(), b.size()); ++r) {
      diff = std::max(diff, std::abs(b[r] - a[r]));
    }
    rep.successive_diffs.push_back(diff);
  }
  rep.stable_from = static_cast<std::int64_t>(rep.successive_diffs.size());
  while (rep.stable_from > 0 &&
         rep.successive_diffs[static_cast<std::size_t>(rep.stable_from - 1)] < opt.epsilon) {
    --rep.stable_from;
  }

  for (const auto& p : rep.profiles) {
    std::optional<std::int64_t> knee;
    if (p.size() >= 2) {
      const double initial = p[1] - p[0];
      if (initial <= 0.0) {
        knee = 0;
      } else {
        for (std::size_t k = 1; k + 1 < p.size(); ++k) {
          if (p[k + 1] - p[k] < opt.knee_fraction * initial) {
            knee = static_cast<std::int64_t>(k);
            break;
          }
        }
      }
    }
    rep.knees.push_back(knee);
  }
  return rep;
}

inline io::Json report_to_json(const StabilizationReport& rep) {
  io::Json j;
  j["stable_from"] = rep.stable_from;
  j["successive_diffs"] = rep.successive_diffs;
  io::Json knees = io::Json::array();
  for (const auto& k : rep.knees) knees.push_back(k ? io::Json(*k) : io::Json(nullptr));
  j["knees"] = std::move(knees);
  j["profiles"] = rep.profiles;
  return j;
}

}  // namespace topicgen::analytics
