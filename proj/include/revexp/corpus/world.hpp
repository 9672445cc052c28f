// Copyright 2026 The revexp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "revexp/corpus/lexicon.hpp"
#include "revexp/corpus/review.hpp"

namespace revexp::corpus {

// Ground-truth generator state: per-user aspect preferences and per-item
// aspect qualities, all in [0, 1].
struct SyntheticWorld {
  int num_users = 0;
  int num_items = 0;
  int num_aspects = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> preferences;  // [user][aspect]
  std::vector<std::vector<double>> qualities;    // [item][aspect]
  std::vector<int> dominant_aspect;              // argmax of qualities, lowest index on ties
  Lexicon lexicon;

  const std::string& aspect_term(int aspect) const;
  void check_ids(int user, int item) const;

  // Deep equality on everything but the lexicon text layout.
  bool operator==(const SyntheticWorld& other) const;
};

SyntheticWorld generate_world(int num_users, int num_items, int num_aspects, std::uint64_t seed,
                              const Lexicon& lexicon = Lexicon::default_lexicon());

// Mean preference-quality product, re-centred and stretched so ratings cover
// the full 1-5 range: clamp(0.5 + 2*sqrt(A)*(mean - 1/4), 0, 1). The stretch
// makes the spread of the affinity independent of the aspect count.
double affinity(const std::vector<double>& preference, const std::vector<double>& quality);
int rating_from_affinity(double affinity);
int ground_truth_rating(const SyntheticWorld& world, int user, int item);

// Renders the templated review for (user, item). Template and opinion word
// choices are drawn from noise_seed.
Review render_review(const SyntheticWorld& world, int user, int item, std::uint64_t noise_seed);

// Text form using hex floats so values round-trip exactly.
void save_world(const std::filesystem::path& path, const SyntheticWorld& world);
SyntheticWorld load_world(const std::filesystem::path& path, const Lexicon& lexicon);

}  // namespace revexp::corpus
