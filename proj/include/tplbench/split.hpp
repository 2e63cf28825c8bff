// Copyright 2026 The tpl-bench Authors
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
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "tplbench/corpus.hpp"
#include "tplbench/errors.hpp"

namespace tplbench {

struct DatasetSplit {
  std::vector<ProjectRecord> train;
  std::vector<ProjectRecord> test;
  std::uint64_t seed = 0;
  double ratio = 0.8;
};

inline std::size_t round_half_up(double value) {
  return static_cast<std::size_t>(std::floor(value + 0.5));
}

namespace detail {

// Fisher-Yates with explicit bounded draws on mt19937_64. std::shuffle is
// avoided because its distribution is implementation-defined; this keeps
// splits identical across standard libraries.
template <typename T>
inline void deterministic_shuffle(std::vector<T>& items, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(items[i - 1], items[j]);
  }
}

// Stable per-entity sub-seed (FNV-1a over the id, mixed with the run seed).
inline std::uint64_t mix_seed(std::uint64_t seed, std::string_view id) {
  std::uint64_t h = 14695981039346656037ULL ^ seed;
  for (char c : id) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace detail

// Seed-deterministic partition: shuffle, then the first
// round_half_up(ratio * n) projects form the train half.
inline DatasetSplit split_dataset(const Corpus& corpus, double ratio,
                                  std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw DomainError("split ratio must lie in (0, 1)");
  }
  if (corpus.projects.size() < 2) {
    throw DomainError("cannot split a corpus with fewer than 2 projects");
  }
  std::vector<ProjectRecord> shuffled = corpus.projects;
  detail::deterministic_shuffle(shuffled, seed);
  const std::size_t train_size =
      round_half_up(ratio * static_cast<double>(shuffled.size()));

  DatasetSplit split;
  split.seed = seed;
  split.ratio = ratio;
  split.train.assign(shuffled.begin(),
                     shuffled.begin() + static_cast<std::ptrdiff_t>(train_size));
  split.test.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(train_size),
                    shuffled.end());
  return split;
}

}  // namespace tplbench
