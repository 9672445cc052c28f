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

#include "revexp/corpus/lexicon.hpp"

#include <fstream>
#include <sstream>

#include "default_lexicon.inc"
#include "revexp/corpus/text.hpp"
#include "revexp/error.hpp"

namespace revexp::corpus {

std::string_view polarity_name(Polarity p) {
  switch (p) {
    case Polarity::kPositive: return "positive";
    case Polarity::kNegative: return "negative";
    case Polarity::kNeutral: return "neutral";
  }
  return "neutral";
}

Polarity parse_polarity(std::string_view name) {
  if (name == "positive") return Polarity::kPositive;
  if (name == "negative") return Polarity::kNegative;
  if (name == "neutral") return Polarity::kNeutral;
  throw Error("unknown polarity '" + std::string(name) + "'");
}

Lexicon Lexicon::parse(std::istream& in) {
  Lexicon lex;
  std::string line;
  std::size_t line_no = 0;
  bool saw_negator = false, saw_neutral = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const Tokens f = tokenize(line);
    if (f.empty()) continue;
    const auto fail = [&](const std::string& why) {
      throw Error("lexicon line " + std::to_string(line_no) + ": " + why);
    };
    try {
      if (f[0] == "aspect" && f.size() == 2) {
        lex.add_aspect(f[1]);
      } else if (f[0] == "opinion" && (f.size() == 3 || f.size() == 4)) {
        OpinionPair pair{f[1], f[2], OpinionClass::kAdjective};
        if (f.size() == 4) {
          if (f[3] == "verb") {
            pair.word_class = OpinionClass::kVerb;
          } else if (f[3] != "adjective") {
            fail("unknown opinion class '" + f[3] + "'");
          }
        }
        lex.add_opinion(std::move(pair));
      } else if (f[0] == "negator" && f.size() == 2 && !saw_negator) {
        lex.negator_ = f[1];
        saw_negator = true;
      } else if (f[0] == "neutral" && f.size() == 2 && !saw_neutral) {
        lex.neutral_ = f[1];
        saw_neutral = true;
      } else {
        fail("cannot parse '" + line + "'");
      }
    } catch (const Error& e) {
      const std::string what = e.what();
      if (what.rfind("lexicon line", 0) == 0) throw;
      fail(what);
    }
  }
  for (const std::string* special : {&lex.negator_, &lex.neutral_}) {
    if (lex.is_aspect(*special) || lex.opinion_polarity(*special)) {
      throw Error("lexicon reuses '" + *special + "' as an aspect or opinion term");
    }
  }
  return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read lexicon " + path.string());
  return parse(in);
}

Lexicon Lexicon::from_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse(in);
}

const Lexicon& Lexicon::default_lexicon() {
  static const Lexicon lex = from_string(kDefaultLexiconText);
  return lex;
}

void Lexicon::check_unused(const std::string& word) const {
  if (aspect_index_.contains(word) || opinion_index_.contains(word)) {
    throw Error("term '" + word + "' listed twice");
  }
}

void Lexicon::add_aspect(std::string term) {
  check_unused(term);
  aspect_index_.emplace(term, aspects_.size());
  aspects_.push_back(std::move(term));
}

void Lexicon::add_opinion(OpinionPair pair) {
  if (pair.positive == pair.negative) throw Error("opinion '" + pair.positive + "' is its own antonym");
  check_unused(pair.positive);
  check_unused(pair.negative);
  const std::size_t idx = opinions_.size();
  opinion_index_.emplace(pair.positive, OpinionEntry{idx, Polarity::kPositive});
  opinion_index_.emplace(pair.negative, OpinionEntry{idx, Polarity::kNegative});
  opinions_.push_back(std::move(pair));
}

bool Lexicon::is_aspect(std::string_view word) const {
  return aspect_index_.contains(std::string(word));
}

std::optional<std::size_t> Lexicon::aspect_index(std::string_view word) const {
  const auto it = aspect_index_.find(std::string(word));
  if (it == aspect_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<Polarity> Lexicon::opinion_polarity(std::string_view word) const {
  const auto it = opinion_index_.find(std::string(word));
  if (it == opinion_index_.end()) return std::nullopt;
  return it->second.polarity;
}

std::optional<std::string> Lexicon::antonym(std::string_view word) const {
  const auto it = opinion_index_.find(std::string(word));
  if (it == opinion_index_.end()) return std::nullopt;
  const OpinionPair& p = opinions_[it->second.pair];
  return it->second.polarity == Polarity::kPositive ? p.negative : p.positive;
}

std::vector<const OpinionPair*> Lexicon::pairs_of(OpinionClass c) const {
  std::vector<const OpinionPair*> out;
  for (const auto& p : opinions_) {
    if (p.word_class == c) out.push_back(&p);
  }
  return out;
}

std::string Lexicon::serialize() const {
  std::string out;
  for (const auto& a : aspects_) out += "aspect " + a + "\n";
  for (const auto& p : opinions_) {
    out += "opinion " + p.positive + " " + p.negative;
    if (p.word_class == OpinionClass::kVerb) out += " verb";
    out += "\n";
  }
  out += "negator " + negator_ + "\n";
  out += "neutral " + neutral_ + "\n";
  return out;
}

}  // namespace revexp::corpus
