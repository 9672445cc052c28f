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

#include "revexp/corpus/world.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

#include "revexp/corpus/text.hpp"
#include "revexp/error.hpp"
#include "revexp/rng.hpp"

namespace revexp::corpus {
namespace {

struct Template {
  std::string_view text;
  bool needs_verb;
};

// Slots: {a} aspect, {j} adjective opinion, {v} verb opinion, {x} intensifier.
constexpr std::array<Template, 7> kTemplates{{
    {"the {a} was {x} {j}", false},
    {"the {a} here is {x} {j}", false},
    {"{x} {j} {a}", false},
    {"{j} {a} overall", false},
    {"i would say the {a} is {x} {j}", false},
    {"i {v} the {a}", true},
    {"i {v} this place because it has {j} {a}", true},
}};

constexpr std::array<std::string_view, 6> kIntensifiers{"really", "very", "quite",
                                                        "truly", "pretty", "so"};

const std::string& pick(const std::vector<const OpinionPair*>& pairs, Polarity polarity,
                        Rng& rng) {
  const OpinionPair* p = pairs[rng.below(pairs.size())];
  return polarity == Polarity::kPositive ? p->positive : p->negative;
}

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

}  // namespace

Polarity polarity_for_rating(int rating) {
  if (rating >= 4) return Polarity::kPositive;
  if (rating <= 2) return Polarity::kNegative;
  return Polarity::kNeutral;
}

const std::string& SyntheticWorld::aspect_term(int aspect) const {
  return lexicon.aspects().at(static_cast<std::size_t>(aspect));
}

void SyntheticWorld::check_ids(int user, int item) const {
  if (user < 0 || user >= num_users || item < 0 || item >= num_items) {
    throw Error("cold-start id: user " + std::to_string(user) + ", item " +
                std::to_string(item) + " not in the world");
  }
}

bool SyntheticWorld::operator==(const SyntheticWorld& o) const {
  return num_users == o.num_users && num_items == o.num_items && num_aspects == o.num_aspects &&
         seed == o.seed && preferences == o.preferences && qualities == o.qualities &&
         dominant_aspect == o.dominant_aspect && lexicon.serialize() == o.lexicon.serialize();
}

SyntheticWorld generate_world(int num_users, int num_items, int num_aspects, std::uint64_t seed,
                              const Lexicon& lexicon) {
  if (num_users < 1 || num_items < 1 || num_aspects < 1) {
    throw Error("world sizes must all be at least 1");
  }
  if (static_cast<std::size_t>(num_aspects) > lexicon.aspects().size()) {
    throw Error("requested " + std::to_string(num_aspects) + " aspects but the lexicon lists " +
                std::to_string(lexicon.aspects().size()));
  }
  if (lexicon.pairs_of(OpinionClass::kAdjective).empty() ||
      lexicon.pairs_of(OpinionClass::kVerb).empty()) {
    throw Error("lexicon needs at least one adjective and one verb opinion pair");
  }
  SyntheticWorld w;
  w.num_users = num_users;
  w.num_items = num_items;
  w.num_aspects = num_aspects;
  w.seed = seed;
  w.lexicon = lexicon;
  Rng rng(seed);
  const auto A = static_cast<std::size_t>(num_aspects);
  w.preferences.assign(static_cast<std::size_t>(num_users), std::vector<double>(A));
  w.qualities.assign(static_cast<std::size_t>(num_items), std::vector<double>(A));
  for (auto& row : w.preferences) {
    for (double& v : row) v = rng.uniform();
  }
  for (auto& row : w.qualities) {
    for (double& v : row) v = rng.uniform();
    // max_element returns the first maximum, i.e. the lowest aspect index.
    w.dominant_aspect.push_back(
        static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin()));
  }
  return w;
}

double affinity(const std::vector<double>& preference, const std::vector<double>& quality) {
  if (preference.size() != quality.size() || preference.empty()) {
    throw Error("preference and quality vectors must have equal non-zero length");
  }
  double dot = 0.0;
  for (std::size_t k = 0; k < preference.size(); ++k) dot += preference[k] * quality[k];
  const double n = static_cast<double>(preference.size());
  const double mean = dot / n;
  return std::clamp(0.5 + 2.0 * std::sqrt(n) * (mean - 0.25), 0.0, 1.0);
}

int rating_from_affinity(double a) { return 1 + static_cast<int>(std::lround(4.0 * a)); }

int ground_truth_rating(const SyntheticWorld& world, int user, int item) {
  world.check_ids(user, item);
  return rating_from_affinity(affinity(world.preferences[static_cast<std::size_t>(user)],
                                       world.qualities[static_cast<std::size_t>(item)]));
}

Review render_review(const SyntheticWorld& world, int user, int item, std::uint64_t noise_seed) {
  Review r;
  r.user = user;
  r.item = item;
  r.rating = ground_truth_rating(world, user, item);
  r.polarity = polarity_for_rating(r.rating);
  r.aspect = world.aspect_term(world.dominant_aspect[static_cast<std::size_t>(item)]);

  Rng rng(noise_seed);
  const Lexicon& lex = world.lexicon;
  const bool neutral = r.polarity == Polarity::kNeutral;
  std::vector<const Template*> allowed;
  for (const auto& t : kTemplates) {
    if (!(neutral && t.needs_verb)) allowed.push_back(&t);
  }
  const Template& tpl = *allowed[rng.below(allowed.size())];
  const auto adjectives = lex.pairs_of(OpinionClass::kAdjective);
  const auto verbs = lex.pairs_of(OpinionClass::kVerb);
  for (const std::string& slot : tokenize(tpl.text)) {
    if (slot == "{a}") {
      r.tokens.push_back(r.aspect);
    } else if (slot == "{j}") {
      r.tokens.push_back(neutral ? lex.neutral() : pick(adjectives, r.polarity, rng));
    } else if (slot == "{x}") {
      r.tokens.emplace_back(kIntensifiers[rng.below(kIntensifiers.size())]);
    } else if (slot == "{v}") {
      r.tokens.push_back(pick(verbs, r.polarity, rng));
    } else {
      r.tokens.push_back(slot);
    }
  }
  return r;
}

void save_world(const std::filesystem::path& path, const SyntheticWorld& w) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write world file " + path.string());
  out << "world " << w.num_users << " " << w.num_items << " " << w.num_aspects << " " << w.seed
      << "\n";
  for (const auto& row : w.preferences) {
    out << "user";
    for (const double v : row) out << " " << hex(v);
    out << "\n";
  }
  for (const auto& row : w.qualities) {
    out << "item";
    for (const double v : row) out << " " << hex(v);
    out << "\n";
  }
}

SyntheticWorld load_world(const std::filesystem::path& path, const Lexicon& lexicon) {
  std::ifstream in(path);
  if (!in) throw Error("missing world file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error("empty world file " + path.string());
  std::istringstream head(line);
  std::string tag;
  SyntheticWorld w;
  if (!(head >> tag >> w.num_users >> w.num_items >> w.num_aspects >> w.seed) || tag != "world") {
    throw Error("bad world header in " + path.string());
  }
  w.lexicon = lexicon;
  const auto read_rows = [&](const char* expect, int count, auto& rows) {
    for (int i = 0; i < count; ++i) {
      if (!std::getline(in, line)) throw Error("truncated world file " + path.string());
      const Tokens f = tokenize(line);
      if (f.size() != static_cast<std::size_t>(w.num_aspects) + 1 || f[0] != expect) {
        throw Error("bad " + std::string(expect) + " row in " + path.string());
      }
      std::vector<double> row;
      for (std::size_t k = 1; k < f.size(); ++k) row.push_back(std::strtod(f[k].c_str(), nullptr));
      rows.push_back(std::move(row));
    }
  };
  read_rows("user", w.num_users, w.preferences);
  read_rows("item", w.num_items, w.qualities);
  for (const auto& row : w.qualities) {
    w.dominant_aspect.push_back(
        static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin()));
  }
  return w;
}

}  // namespace revexp::corpus
