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

#ifndef CLANSIM_REPORT_H_
#define CLANSIM_REPORT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace clansim {

// One empirical check of an analytic bound or law.
struct BoundRecord {
  enum class Kind {
    kInequality,  // pass iff empirical <= analytic + 3 stderr
    kExact,       // pass iff |empirical - analytic| <= 3 stderr
    kBelow,       // pass iff empirical < analytic (fixed tolerance)
  };

  std::string name;
  Kind kind = Kind::kInequality;
  double analytic = 0.0;
  double empirical = 0.0;
  double std_error = 0.0;
  bool pass = false;

  static BoundRecord Inequality(std::string name, double analytic, double empirical,
                                double std_error);
  static BoundRecord Exact(std::string name, double analytic, double empirical,
                           double std_error);
  static BoundRecord Below(std::string name, double threshold, double empirical);
};

struct VerificationReport {
  std::string model_digest;
  std::map<std::string, double> quantities;
  std::vector<BoundRecord> bounds;
  std::map<std::string, std::uint64_t> seeds;
  std::map<std::string, std::uint64_t> counts;
  // Left empty unless timing was requested, so equal seeds give equal bytes.
  std::optional<double> wall_clock_s;

  bool passes() const;
};

// Canonical JSON: keys sorted, doubles printed with 17 significant digits,
// non-finite doubles as null. Throws kSchemaError for a report without
// bound records.
std::string ReportToJson(const VerificationReport& report);
// Throws kIoError when the file cannot be written.
void WriteReport(const VerificationReport& report, const std::string& path);

}  // namespace clansim

#endif  // CLANSIM_REPORT_H_
