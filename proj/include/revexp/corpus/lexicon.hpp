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

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace revexp::corpus {

enum class Polarity { kPositive, kNegative, kNeutral };

std::string_view polarity_name(Polarity p);
Polarity parse_polarity(std::string_view name);

// Grammatical slot an opinion pair fills in rendered text.
enum class OpinionClass { kAdjective, kVerb };

struct OpinionPair {
  std::string positive;
  std::string negative;
  OpinionClass word_class = OpinionClass::kAdjective;
};

// Aspect terms and antonym-paired opinion terms. Line format:
//   aspect <term>
//   opinion <positive> <negative> [adjective|verb]
//   negator <token>
//   neutral <token>
// Blank lines and '#' comments are ignored.
class Lexicon {
 public:
  static Lexicon parse(std::istream& in);
  static Lexicon load(const std::filesystem::path& path);
  static Lexicon from_string(std::string_view text);
  static const Lexicon& default_lexicon();

  void add_aspect(std::string term);
  void add_opinion(OpinionPair pair);

  const std::vector<std::string>& aspects() const { return aspects_; }
  const std::vector<OpinionPair>& opinions() const { return opinions_; }
  const std::string& negator() const { return negator_; }
  const std::string& neutral() const { return neutral_; }

  bool is_aspect(std::string_view word) const;
  // Polarity of an opinion term, or nullopt for any other word.
  std::optional<Polarity> opinion_polarity(std::string_view word) const;
  // Antonym of an opinion term; nullopt for non-opinion words.
  std::optional<std::string> antonym(std::string_view word) const;
  std::optional<std::size_t> aspect_index(std::string_view word) const;

  // Opinion pairs of one grammatical class, in file order.
  std::vector<const OpinionPair*> pairs_of(OpinionClass c) const;

  std::string serialize() const;

 private:
  struct OpinionEntry {
    std::size_t pair;
    Polarity polarity;
  };
  void check_unused(const std::string& word) const;

  std::vector<std::string> aspects_;
  std::vector<OpinionPair> opinions_;
  std::unordered_map<std::string, std::size_t> aspect_index_;
  std::unordered_map<std::string, OpinionEntry> opinion_index_;
  std::string negator_ = "not";
  std::string neutral_ = "okay";
};

}  // namespace revexp::corpus
