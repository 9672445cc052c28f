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

#include "revexp/models/generation.hpp"

#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>

#include "revexp/error.hpp"

namespace revexp::models {

std::vector<Generation> generate_explanations(const ExplainableRecommender& model,
                                              std::span<const corpus::Review> reviews,
                                              const DecodeOptions& options, bool parallel) {
  std::vector<Generation> out(reviews.size());
  std::exception_ptr failure;
  std::mutex mu;
  const auto n = static_cast<std::ptrdiff_t>(reviews.size());
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    try {
      const corpus::Review& r = reviews[static_cast<std::size_t>(k)];
      Generation& g = out[static_cast<std::size_t>(k)];
      g.user = r.user;
      g.item = r.item;
      g.predicted_rating = model.predict_rating(r.user, r.item);
      const corpus::Tokens t = model.generate(Context{r.user, r.item, r.aspect}, options);
      const auto words = strip_eos(t);
      g.words.assign(words.begin(), words.end());
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::string serialize_generations(std::span<const Generation> generations) {
  std::ostringstream os;
  char buf[64];
  for (const Generation& g : generations) {
    std::snprintf(buf, sizeof buf, "%.17g", g.predicted_rating);
    os << g.user << '\t' << g.item << '\t' << buf << '\t' << corpus::join(g.words) << '\n';
  }
  return os.str();
}

std::vector<Generation> parse_generations(std::string_view text, const std::string& source) {
  std::vector<Generation> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 4) {
      throw Error(source + " line " + std::to_string(line_no) + ": expected 4 fields");
    }
    Generation g;
    try {
      g.user = std::stoi(fields[0]);
      g.item = std::stoi(fields[1]);
      g.predicted_rating = std::stod(fields[2]);
    } catch (const std::exception&) {
      throw Error(source + " line " + std::to_string(line_no) + ": bad number");
    }
    g.words = corpus::tokenize(fields[3]);
    out.push_back(std::move(g));
  }
  return out;
}

void save_generations(const std::filesystem::path& path, std::span<const Generation> generations) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << serialize_generations(generations);
  if (!out) throw Error("failed writing " + path.string());
}

std::vector<Generation> load_generations(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("missing generation file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_generations(ss.str(), path.string());
}

}  // namespace revexp::models
