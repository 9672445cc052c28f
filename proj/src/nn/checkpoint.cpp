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

#include "revexp/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <string_view>
#include <vector>

#include "revexp/error.hpp"

namespace revexp::nn {
namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

constexpr std::string_view kMagic = "RVXCKPT1";

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

void put_string(std::ofstream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

template <typename T>
T get(std::ifstream& in, const std::filesystem::path& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw Error("truncated checkpoint " + path.string());
  }
  return v;
}

std::string get_string(std::ifstream& in, const std::filesystem::path& path) {
  const auto n = get<std::uint32_t>(in, path);
  if (n > (1u << 26)) throw Error("corrupt checkpoint " + path.string());
  std::string s(n, '\0');
  if (!in.read(s.data(), n)) throw Error("truncated checkpoint " + path.string());
  return s;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const CheckpointHeader& header,
                     const ParamStore& params) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write checkpoint " + path.string());
  out.write(kMagic.data(), kMagic.size());
  put<std::uint64_t>(out, header.seed);
  put<std::int64_t>(out, header.step);
  put<std::uint64_t>(out, header.config_hash);
  put_string(out, header.metadata);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
  for (const Parameter& p : params) {
    put_string(out, p.name);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(p.value.rank()));
    for (const std::size_t e : p.value.shape()) put<std::uint64_t>(out, e);
    const auto v = p.value.values();
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
  }
  if (!out) throw Error("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("missing checkpoint " + path.string());
  std::string magic(kMagic.size(), '\0');
  if (!in.read(magic.data(), static_cast<std::streamsize>(magic.size())) || magic != kMagic) {
    throw Error("not a checkpoint file: " + path.string());
  }
  Checkpoint ck;
  ck.header.seed = get<std::uint64_t>(in, path);
  ck.header.step = get<std::int64_t>(in, path);
  ck.header.config_hash = get<std::uint64_t>(in, path);
  ck.header.metadata = get_string(in, path);
  const auto count = get<std::uint32_t>(in, path);
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = get_string(in, path);
    const auto rank = get<std::uint32_t>(in, path);
    if (rank == 0 || rank > 8) throw Error("corrupt checkpoint " + path.string());
    std::vector<std::size_t> shape(rank);
    std::size_t total = 1;
    for (auto& e : shape) {
      e = static_cast<std::size_t>(get<std::uint64_t>(in, path));
      total *= e;
    }
    if (total == 0 || total > (std::size_t{1} << 32)) {
      throw Error("corrupt checkpoint " + path.string());
    }
    std::vector<double> values(total);
    if (!in.read(reinterpret_cast<char*>(values.data()),
                 static_cast<std::streamsize>(total * sizeof(double)))) {
      throw Error("truncated checkpoint " + path.string());
    }
    ck.params.add(std::move(name), Tensor(std::move(shape), std::move(values)));
  }
  ck.params.set_step(ck.header.step);
  return ck;
}

}  // namespace revexp::nn
