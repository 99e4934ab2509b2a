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

#ifndef CLANSIM_SRC_CANONICAL_JSON_H_
#define CLANSIM_SRC_CANONICAL_JSON_H_

#include <string>

#include "json.hpp"

namespace clansim::internal {

// Compact JSON with keys in sorted order and doubles at 17 significant
// digits. Non-finite doubles become null.
std::string CanonicalDump(const nlohmann::json& value);

}  // namespace clansim::internal

#endif  // CLANSIM_SRC_CANONICAL_JSON_H_
