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

#include "revexp/corpus/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "revexp/corpus/text.hpp"
#include "revexp/error.hpp"
#include "revexp/rng.hpp"

namespace revexp::corpus {
namespace {

int parse_int(std::string_view field, const std::string& where) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(where + ": expected an integer, got '" + std::string(field) + "'");
  }
  return v;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

void check_coverage(const Corpus& c) {
  std::set<int> users, items;
  for (const auto& r : c.train) {
    users.insert(r.user);
    items.insert(r.item);
  }
  for (const auto* split : {&c.validation, &c.test}) {
    for (const auto& r : *split) {
      if (!users.contains(r.user)) {
        throw Error("user " + std::to_string(r.user) + " appears outside train only");
      }
      if (!items.contains(r.item)) {
        throw Error("item " + std::to_string(r.item) + " appears outside train only");
      }
    }
  }
}

Vocab vocab_from(const std::vector<Review>& train) {
  std::vector<std::vector<std::string>> texts;
  texts.reserve(train.size());
  for (const auto& r : train) texts.push_back(r.tokens);
  return Vocab::from_texts(texts);
}

}  // namespace

std::string_view split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kValidation: return "validation";
    case Split::kTest: return "test";
  }
  return "train";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "validation") return Split::kValidation;
  if (name == "test") return Split::kTest;
  throw Error("unknown split '" + std::string(name) + "'");
}

const std::vector<Review>& Corpus::split(Split s) const {
  switch (s) {
    case Split::kTrain: return train;
    case Split::kValidation: return validation;
    case Split::kTest: return test;
  }
  return train;
}

bool Corpus::same_content(const Corpus& o) const {
  return train == o.train && validation == o.validation && test == o.test && vocab == o.vocab;
}

std::uint64_t render_seed(std::uint64_t corpus_seed, int user, int item) {
  return derive_seed(derive_seed(corpus_seed, 0x7265766965770000ULL),
                     static_cast<std::uint64_t>(user), static_cast<std::uint64_t>(item));
}

Corpus build_corpus(const SyntheticWorld& world, int reviews_per_user, const SplitRatios& ratios,
                    std::uint64_t seed) {
  if (ratios.train <= 0 || ratios.validation <= 0 || ratios.test <= 0 ||
      std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9) {
    throw Error("split ratios must be positive and sum to 1");
  }
  if (reviews_per_user < 1) throw Error("reviews_per_user must be at least 1");
  if (reviews_per_user > world.num_items) {
    throw Error("cannot draw " + std::to_string(reviews_per_user) + " distinct items per user from " +
                std::to_string(world.num_items) + " items");
  }
  const int n = reviews_per_user;
  const int n_val = std::max(1, static_cast<int>(std::lround(n * ratios.validation)));
  const int n_test = std::max(1, static_cast<int>(std::lround(n * ratios.test)));
  if (n - n_val - n_test < 1) {
    throw Error("user 0 has " + std::to_string(n) +
                " reviews, too few to appear in train, validation and test");
  }

  struct Slot {
    Review review;
    Split split;
  };
  std::vector<Slot> slots;
  slots.reserve(static_cast<std::size_t>(world.num_users) * static_cast<std::size_t>(n));
  Rng rng(derive_seed(seed, 1));
  std::vector<int> items(static_cast<std::size_t>(world.num_items));
  for (int u = 0; u < world.num_users; ++u) {
    for (int i = 0; i < world.num_items; ++i) items[static_cast<std::size_t>(i)] = i;
    // Partial Fisher-Yates: the first n entries become a uniform sample.
    for (int k = 0; k < n; ++k) {
      const auto j = static_cast<std::size_t>(k) +
                     rng.below(static_cast<std::uint64_t>(world.num_items - k));
      std::swap(items[static_cast<std::size_t>(k)], items[j]);
      const int item = items[static_cast<std::size_t>(k)];
      const Split s = k < n - n_val - n_test ? Split::kTrain
                      : k < n - n_test       ? Split::kValidation
                                             : Split::kTest;
      slots.push_back({render_review(world, u, item, render_seed(seed, u, item)), s});
    }
  }

  // Move the first held-out review of any item missing from train into train.
  std::vector<bool> in_train(static_cast<std::size_t>(world.num_items), false);
  for (const auto& s : slots) {
    if (s.split == Split::kTrain) in_train[static_cast<std::size_t>(s.review.item)] = true;
  }
  for (auto& s : slots) {
    const auto item = static_cast<std::size_t>(s.review.item);
    if (s.split != Split::kTrain && !in_train[item]) {
      s.split = Split::kTrain;
      in_train[item] = true;
    }
  }

  Corpus c;
  for (auto& s : slots) {
    switch (s.split) {
      case Split::kTrain: c.train.push_back(std::move(s.review)); break;
      case Split::kValidation: c.validation.push_back(std::move(s.review)); break;
      case Split::kTest: c.test.push_back(std::move(s.review)); break;
    }
  }
  c.vocab = vocab_from(c.train);
  auto truth = std::make_shared<GroundTruth>();
  truth->world = world;
  truth->corpus_seed = seed;
  c.truth = std::move(truth);
  return c;
}

std::string serialize_corpus(const Corpus& c) {
  std::string out;
  for (const Split s : {Split::kTrain, Split::kValidation, Split::kTest}) {
    for (const auto& r : c.split(s)) {
      out += std::to_string(r.user) + '\t' + std::to_string(r.item) + '\t' +
             std::to_string(r.rating) + '\t' + r.aspect + '\t' +
             std::string(polarity_name(r.polarity)) + '\t' + std::string(split_name(s)) + '\t' +
             join(r.tokens) + '\n';
    }
  }
  return out;
}

void save_corpus(const Corpus& c, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write corpus file " + path.string());
  out << serialize_corpus(c);
}

Corpus parse_corpus(std::string_view text, const std::string& source) {
  Corpus c;
  std::size_t line_no = 0, start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const std::string where = source + " line " + std::to_string(line_no);
    const auto f = split_tabs(line);
    if (f.size() != 7) {
      throw Error(where + ": expected 7 tab-separated fields, got " + std::to_string(f.size()));
    }
    Review r;
    r.user = parse_int(f[0], where);
    r.item = parse_int(f[1], where);
    r.rating = parse_int(f[2], where);
    if (r.user < 0 || r.item < 0) throw Error(where + ": negative id");
    if (r.rating < 1 || r.rating > 5) {
      throw Error(where + ": rating " + std::to_string(r.rating) + " outside 1-5");
    }
    r.aspect = std::string(f[3]);
    try {
      r.polarity = parse_polarity(f[4]);
    } catch (const Error& e) {
      throw Error(where + ": " + e.what());
    }
    if (r.polarity != polarity_for_rating(r.rating)) {
      throw Error(where + ": polarity " + std::string(f[4]) + " inconsistent with rating " +
                  std::to_string(r.rating));
    }
    Split split;
    try {
      split = parse_split(f[5]);
    } catch (const Error& e) {
      throw Error(where + ": " + e.what());
    }
    r.tokens = tokenize(f[6]);
    if (r.tokens.empty()) throw Error(where + ": empty review text");
    if (std::find(r.tokens.begin(), r.tokens.end(), r.aspect) == r.tokens.end()) {
      throw Error(where + ": aspect '" + r.aspect + "' does not occur in the text");
    }
    switch (split) {
      case Split::kTrain: c.train.push_back(std::move(r)); break;
      case Split::kValidation: c.validation.push_back(std::move(r)); break;
      case Split::kTest: c.test.push_back(std::move(r)); break;
    }
  }
  if (c.train.empty()) throw Error(source + ": corpus has no train records");
  check_coverage(c);
  c.vocab = vocab_from(c.train);
  return c;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("missing corpus file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_corpus(buf.str(), path.string());
}

std::string corpus_fingerprint(const Corpus& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(serialize_corpus(c))));
  return buf;
}

}  // namespace revexp::corpus
