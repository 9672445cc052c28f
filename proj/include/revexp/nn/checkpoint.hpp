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
#include <string>

#include "revexp/nn/param_store.hpp"

namespace revexp::nn {

struct CheckpointHeader {
  std::uint64_t seed = 0;
  std::int64_t step = 0;
  std::uint64_t config_hash = 0;
  // Free-form key=value lines describing the architecture.
  std::string metadata;

  friend bool operator==(const CheckpointHeader&, const CheckpointHeader&) = default;
};

struct Checkpoint {
  CheckpointHeader header;
  ParamStore params;
};

// Binary container: magic, header, then name -> shape -> raw little-endian
// doubles for each parameter in store order. Round-trips bit-exactly.
void save_checkpoint(const std::filesystem::path& path, const CheckpointHeader& header,
                     const ParamStore& params);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace revexp::nn
