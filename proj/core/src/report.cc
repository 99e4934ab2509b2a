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

#include "clansim/report.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "canonical_json.h"
#include "clansim/error.h"
#include "json.hpp"

namespace clansim {
namespace internal {
namespace {

void FormatDouble(double x, std::string& out) {
  if (!std::isfinite(x)) {
    out += "null";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

void Emit(const nlohmann::json& v, std::string& out) {
  using T = nlohmann::json::value_t;
  switch (v.type()) {
    case T::object: {
      // nlohmann's default object is a std::map, so iteration is key-sorted.
      out += '{';
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out += ',';
        first = false;
        out += nlohmann::json(key).dump();
        out += ':';
        Emit(item, out);
      }
      out += '}';
      break;
    }
    case T::array: {
      out += '[';
      for (std::size_t n = 0; n < v.size(); ++n) {
        if (n) out += ',';
        Emit(v[n], out);
      }
      out += ']';
      break;
    }
    case T::number_float:
      FormatDouble(v.get<double>(), out);
      break;
    default:
      out += v.dump();
  }
}

}  // namespace

std::string CanonicalDump(const nlohmann::json& value) {
  std::string out;
  Emit(value, out);
  return out;
}

}  // namespace internal

BoundRecord BoundRecord::Inequality(std::string name, double analytic, double empirical,
                                    double std_error) {
  return {std::move(name), Kind::kInequality, analytic, empirical, std_error,
          empirical <= analytic + 3.0 * std_error};
}

BoundRecord BoundRecord::Exact(std::string name, double analytic, double empirical,
                               double std_error) {
  return {std::move(name), Kind::kExact, analytic, empirical, std_error,
          std::abs(empirical - analytic) <= 3.0 * std_error};
}

BoundRecord BoundRecord::Below(std::string name, double threshold, double empirical) {
  return {std::move(name), Kind::kBelow, threshold, empirical, 0.0, empirical < threshold};
}

bool VerificationReport::passes() const {
  if (bounds.empty()) return false;
  for (const auto& b : bounds) {
    if (!b.pass) return false;
  }
  return true;
}

namespace {

const char* KindName(BoundRecord::Kind kind) {
  switch (kind) {
    case BoundRecord::Kind::kInequality:
      return "inequality";
    case BoundRecord::Kind::kExact:
      return "exact";
    case BoundRecord::Kind::kBelow:
      return "below";
  }
  return "?";
}

}  // namespace

std::string ReportToJson(const VerificationReport& report) {
  if (report.bounds.empty()) {
    throw Error(ErrorCode::kSchemaError, "report has no bound records");
  }
  nlohmann::json root;
  root["model_digest"] = report.model_digest;
  nlohmann::json quantities = nlohmann::json::object();
  for (const auto& [k, v] : report.quantities) quantities[k] = v;
  root["quantities"] = quantities;
  nlohmann::json bounds = nlohmann::json::array();
  for (const auto& b : report.bounds) {
    bounds.push_back({{"name", b.name},
                      {"kind", KindName(b.kind)},
                      {"analytic", b.analytic},
                      {"empirical", b.empirical},
                      {"stderr", b.std_error},
                      {"pass", b.pass}});
  }
  root["bounds"] = bounds;
  root["seeds"] = report.seeds;
  root["counts"] = report.counts;
  root["pass"] = report.passes();
  if (report.wall_clock_s) {
    root["wall_clock_s"] = *report.wall_clock_s;
  } else {
    root["wall_clock_s"] = nullptr;
  }
  return internal::CanonicalDump(root) + "\n";
}

void WriteReport(const VerificationReport& report, const std::string& path) {
  const std::string text = ReportToJson(report);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path);
}

}  // namespace clansim
