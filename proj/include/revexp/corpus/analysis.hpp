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

#include <optional>
#include <span>
#include <string>

#include "revexp/corpus/lexicon.hpp"

namespace revexp::corpus {

// First token listed as an aspect in the lexicon, if any.
std::optional<std::string> extract_aspect(std::span<const std::string> tokens,
                                          const Lexicon& lexicon);

// Majority vote of opinion terms; a negator directly before an opinion term
// flips that term. Ties and absence give neutral.
Polarity classify_polarity(std::span<const std::string> tokens, const Lexicon& lexicon);

}  // namespace revexp::corpus
