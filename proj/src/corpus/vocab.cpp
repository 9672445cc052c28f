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

#include "revexp/corpus/vocab.hpp"

#include <algorithm>
#include <set>

#include "revexp/error.hpp"

namespace revexp::corpus {

Vocab::Vocab() : tokens_{"<pad>", "<bos>", std::string(kEosToken), "<unk>"} {
  for (std::size_t i = 0; i < tokens_.size(); ++i) ids_.emplace(tokens_[i], static_cast<int>(i));
}

Vocab Vocab::from_texts(std::span<const std::vector<std::string>> texts) {
  std::set<std::string> words;
  for (const auto& t : texts) words.insert(t.begin(), t.end());
  Vocab v;
  for (const auto& w : words) {
    if (v.ids_.contains(w)) continue;
    v.ids_.emplace(w, static_cast<int>(v.tokens_.size()));
    v.tokens_.push_back(w);
  }
  return v;
}

bool Vocab::contains(std::string_view token) const { return ids_.contains(std::string(token)); }

int Vocab::id(std::string_view token) const {
  const auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnk : it->second;
}

const std::string& Vocab::token(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw Error("token id " + std::to_string(id) + " out of range");
  }
  return tokens_[static_cast<std::size_t>(id)];
}

std::vector<int> Vocab::encode(std::span<const std::string> words, bool append_eos) const {
  std::vector<int> ids;
  ids.reserve(words.size() + 1);
  for (const auto& w : words) ids.push_back(id(w));
  if (append_eos) ids.push_back(kEos);
  return ids;
}

}  // namespace revexp::corpus
