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

#include "clansim/model_io.h"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "canonical_json.h"
#include "clansim/error.h"
#include "json.hpp"

namespace clansim {
namespace {

using nlohmann::json;

[[noreturn]] void SchemaError(std::string_view source, const std::string& where,
                              const std::string& what) {
  throw Error(ErrorCode::kSchemaError,
              std::string(source) + ": " + where + ": " + what);
}

void RejectUnknown(std::string_view source, const std::string& where, const json& object,
                   std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      SchemaError(source, where, "unknown field \"" + key + "\"");
    }
  }
}

const json& Require(std::string_view source, const std::string& where, const json& object,
                    const char* field) {
  auto it = object.find(field);
  if (it == object.end()) {
    SchemaError(source, where, std::string("missing field \"") + field + "\"");
  }
  return *it;
}

double RequireNumber(std::string_view source, const std::string& where, const json& value) {
  if (!value.is_number()) SchemaError(source, where, "expected a number");
  return value.get<double>();
}

std::uint64_t RequireIndex(std::string_view source, const std::string& where,
                           const json& value) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer() && value.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(value.get<std::int64_t>());
  }
  SchemaError(source, where, "expected a non-negative integer");
}

std::vector<double> RequireNumbers(std::string_view source, const std::string& where,
                                   const json& value) {
  if (!value.is_array() || value.empty()) {
    SchemaError(source, where, "expected a non-empty array of numbers");
  }
  std::vector<double> out;
  for (std::size_t n = 0; n < value.size(); ++n) {
    out.push_back(RequireNumber(source, where + "[" + std::to_string(n) + "]", value[n]));
  }
  return out;
}

Threshold ParseThresholdKey(std::string_view source, const std::string& where,
                            const std::string& key) {
  std::uint64_t k = 0;
  if (key.empty() || key.size() > 9 ||
      key.find_first_not_of("0123456789") != std::string::npos) {
    SchemaError(source, where, "synapse key \"" + key + "\" is not an integer");
  }
  k = std::stoull(key);
  if (k < 1) SchemaError(source, where, "synapse thresholds must be >= 1");
  return static_cast<Threshold>(k);
}

ModelSpec ParseFinite(std::string_view source, const json& root) {
  RejectUnknown(source, "model", root, {"type", "neurons"});
  const json& neurons = Require(source, "model", root, "neurons");
  if (!neurons.is_array() || neurons.empty()) {
    SchemaError(source, "neurons", "expected a non-empty array");
  }
  std::vector<NeuronSpec> specs;
  std::set<NeuronId> ids;
  for (std::size_t n = 0; n < neurons.size(); ++n) {
    const std::string where = "neurons[" + std::to_string(n) + "]";
    const json& entry = neurons[n];
    if (!entry.is_object()) SchemaError(source, where, "expected an object");
    RejectUnknown(source, where, entry, {"id", "rates", "post"});
    NeuronSpec spec;
    spec.id = RequireIndex(source, where + ".id", Require(source, where, entry, "id"));
    if (!ids.insert(spec.id).second) {
      SchemaError(source, where + ".id", "duplicate id " + std::to_string(spec.id));
    }
    spec.rates = RateVector(
        RequireNumbers(source, where + ".rates", Require(source, where, entry, "rates")));
    if (auto post = entry.find("post"); post != entry.end()) {
      if (!post->is_object()) SchemaError(source, where + ".post", "expected an object");
      for (const auto& [key, targets] : post->items()) {
        const std::string at = where + ".post." + key;
        const Threshold k = ParseThresholdKey(source, at, key);
        if (!targets.is_array()) SchemaError(source, at, "expected an array of ids");
        auto& list = spec.post[k];
        for (std::size_t m = 0; m < targets.size(); ++m) {
          list.push_back(
              RequireIndex(source, at + "[" + std::to_string(m) + "]", targets[m]));
        }
      }
    }
    specs.push_back(std::move(spec));
  }
  for (const auto& spec : specs) {
    for (const auto& [k, targets] : spec.post) {
      for (NeuronId t : targets) {
        if (!ids.count(t)) {
          SchemaError(source, "neuron " + std::to_string(spec.id) + " post." +
                                  std::to_string(k),
                      "references unknown neuron " + std::to_string(t));
        }
      }
    }
  }
  return ModelSpec::Finite(std::move(specs));
}

ModelSpec ParseFeedforward(std::string_view source, const json& root) {
  RejectUnknown(source, "model", root, {"type", "a0", "r", "s", "window"});
  DecayingFeedforward family;
  family.a0 = RequireNumber(source, "a0", Require(source, "model", root, "a0"));
  family.r = RequireNumber(source, "r", Require(source, "model", root, "r"));
  family.s = RequireNumbers(source, "s", Require(source, "model", root, "s"));
  const json& window = Require(source, "model", root, "window");
  if (!window.is_array()) SchemaError(source, "window", "expected an array");
  for (std::size_t n = 0; n < window.size(); ++n) {
    const std::uint64_t w =
        RequireIndex(source, "window[" + std::to_string(n) + "]", window[n]);
    if (w > kMaxNeighborhood) {
      SchemaError(source, "window[" + std::to_string(n) + "]", "window too large");
    }
    family.window.push_back(static_cast<std::uint32_t>(w));
  }
  try {
    AnalyzeFeedforward(family);
  } catch (const Error& e) {
    SchemaError(source, "model", e.what());
  }
  return ModelSpec::Countable(std::move(family));
}

std::string LocateByte(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t n = 0; n < byte && n < text.size(); ++n) {
    if (text[n] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

ModelSpec ParseModelJson(std::string_view text, std::string_view source) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    SchemaError(source, LocateByte(text, e.byte > 0 ? e.byte - 1 : 0), e.what());
  }
  if (!root.is_object()) SchemaError(source, "model", "expected a JSON object");
  const json& type = Require(source, "model", root, "type");
  if (!type.is_string()) SchemaError(source, "type", "expected a string");
  const std::string kind = type.get<std::string>();
  if (kind == "finite") return ParseFinite(source, root);
  if (kind == "decaying_feedforward") return ParseFeedforward(source, root);
  SchemaError(source, "type", "unknown model type \"" + kind + "\"");
}

ModelSpec ParseModel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseModelJson(buffer.str(), path);
}

std::string SerializeModel(const ModelSpec& model) {
  json root;
  if (const auto* fam = model.family()) {
    root["type"] = "decaying_feedforward";
    root["a0"] = fam->a0;
    root["r"] = fam->r;
    root["s"] = fam->s;
    root["window"] = fam->window;
    return internal::CanonicalDump(root);
  }
  root["type"] = "finite";
  json neurons = json::array();
  for (const auto& spec : model.neuron_specs()) {
    json entry;
    entry["id"] = spec.id;
    entry["rates"] = std::vector<double>(spec.rates.values().begin(),
                                         spec.rates.values().end());
    json post = json::object();
    for (const auto& [k, targets] : spec.post) post[std::to_string(k)] = targets;
    entry["post"] = post;
    neurons.push_back(entry);
  }
  root["neurons"] = neurons;
  return internal::CanonicalDump(root);
}

std::string ModelDigest(const ModelSpec& model) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : SerializeModel(model)) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016" PRIx64, hash);
  return hex;
}

}  // namespace clansim
