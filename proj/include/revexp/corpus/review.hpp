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

#include <string>
#include <vector>

#include "revexp/corpus/lexicon.hpp"

namespace revexp::corpus {

struct Review {
  int user = 0;
  int item = 0;
  int rating = 3;
  std::vector<std::string> tokens;
  std::string aspect;
  Polarity polarity = Polarity::kNeutral;

  friend bool operator==(const Review&, const Review&) = default;
};

// >= 4 positive, <= 2 negative, 3 neutral.
Polarity polarity_for_rating(int rating);

}  // namespace revexp::corpus
