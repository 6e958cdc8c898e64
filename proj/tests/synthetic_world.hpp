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

// Synthetic annotation worlds for coverage checks. Every effect is drawn
// from a small discrete distribution, so the population mean difference
// between generated and real scores can be enumerated exactly.
#pragma once

#include <algorithm>
#include <cstdint>
#include <string>

#include "topicgen/io_formats.hpp"
#include "topicgen/random.hpp"

namespace synthetic {

inline constexpr int kLeniency[] = {-1, 0, 1};   // per annotator
inline constexpr int kQuality[] = {0, 1, 2, 3};  // per article
inline constexpr int kPenalty[] = {-1, 0};       // per article, generated only
inline constexpr int kNoise[] = {-1, 0, 1};      // per score

inline int clamp_score(int x) { return std::clamp(x, 0, 4); }

inline double true_mean_difference() {
  double total = 0.0;
  int n = 0;
  for (const int u : kLeniency)
    for (const int q : kQuality)
      for (const int b : kPenalty)
        for (const int er : kNoise)
          for (const int eg : kNoise) {
            total += clamp_score(1 + u + q + b + eg) - clamp_score(1 + u + q + er);
            ++n;
          }
  return total / n;
}

template <std::size_t N>
int pick(topicgen::CounterRng& rng, const int (&values)[N]) {
  return values[rng.below(N)];
}

inline topicgen::io::ScoreTable make_world(std::uint64_t world, int annotators, int articles) {
  topicgen::CounterRng rng(world, 0x5eed);
  std::vector<int> leniency(static_cast<std::size_t>(annotators));
  for (auto& u : leniency) u = pick(rng, kLeniency);
  topicgen::io::ScoreTable table;
  for (int j = 0; j < articles; ++j) {
    const int q = pick(rng, kQuality);
    const int b = pick(rng, kPenalty);
    for (int a = 0; a < annotators; ++a) {
      const std::string ann = "a" + std::to_string(a);
      const std::string art = "m" + std::to_string(j);
      const int u = leniency[static_cast<std::size_t>(a)];
      table.records.push_back({ann, art, topicgen::io::Variant::kReal,
                               clamp_score(1 + u + q + pick(rng, kNoise)),
                               topicgen::io::Source::kGuardian});
      table.records.push_back({ann, art, topicgen::io::Variant::kGenerated,
                               clamp_score(1 + u + q + b + pick(rng, kNoise)),
                               topicgen::io::Source::kGuardian});
    }
  }
  return table;
}

}  // namespace synthetic
