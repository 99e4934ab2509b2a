// Copyright 2026 The clansim Authors
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

#ifndef CLANSIM_MODEL_IO_H_
#define CLANSIM_MODEL_IO_H_

#include <string>
#include <string_view>

#include "clansim/model.h"

namespace clansim {

// Model files are JSON. Finite networks:
//   {"type": "finite",
//    "neurons": [{"id": 1, "rates": [1, 0.5], "post": {"1": [2]}}, ...]}
// Countable decaying feed-forward family:
//   {"type": "decaying_feedforward", "a0": 1, "r": 0.1, "s": [1, 1],
//    "window": [1]}
// Unknown fields are rejected with kSchemaError.
ModelSpec ParseModel(const std::string& path);
ModelSpec ParseModelJson(std::string_view text, std::string_view source = "<string>");

// Canonical JSON (sorted keys, 17 significant digits). Parsing the output
// reproduces an equal model.
std::string SerializeModel(const ModelSpec& model);

// Hex FNV-1a digest of the canonical serialisation.
std::string ModelDigest(const ModelSpec& model);

}  // namespace clansim

#endif  // CLANSIM_MODEL_IO_H_
