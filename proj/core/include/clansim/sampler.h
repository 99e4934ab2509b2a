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

#ifndef CLANSIM_SAMPLER_H_
#define CLANSIM_SAMPLER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "clansim/backward.h"
#include "clansim/model.h"
#include "clansim/oracle.h"
#include "clansim/rng.h"

namespace clansim {

struct SampleResult {
  Potential potential = 0;
  std::uint64_t n_stop = 0;
  std::size_t max_clan = 0;
  std::uint64_t steps_null = 0;
  std::uint64_t seed = 0;
  std::uint64_t sample_index = 0;

  friend bool operator==(const SampleResult&, const SampleResult&) = default;
};

struct CoupledSampleResult {
  SampleResult full;
  SampleResult restricted;
  bool agree = false;
  bool hit_outside_f = false;
  bool logs_identical = false;
  std::uint64_t containment_checks = 0;

  friend bool operator==(const CoupledSampleResult&,
                         const CoupledSampleResult&) = default;
};

struct SamplerOptions {
  std::uint64_t max_steps = 1'000'000;
  // Skip the condition check performed at construction.
  bool force = false;
  // Scope for the condition check; empty means DefaultScope(model).
  std::vector<NeuronId> scope;
  // Backward times at which to record the clan size (enables holding times).
  std::vector<double> clan_times;
};

// Perfect sampler bound to one model. Not thread-safe; batch workers each
// own an instance.
class Sampler {
 public:
  // Throws kConditionViolated unless the model passes CheckConditions over
  // the configured scope or `force` is set.
  Sampler(const ModelSpec& model, SamplerOptions options = {});

  SampleResult Sample(NeuronId i, RngStream& stream);
  // Same draws as Sample, keeping the backward log.
  SampleResult Sample(NeuronId i, RngStream& stream, EventLog* log,
                      std::vector<std::size_t>* clan_sizes);

  CoupledSampleResult CoupledSample(std::span<const NeuronId> f, NeuronId i,
                                    RngStream& stream,
                                    std::vector<std::size_t>* clan_sizes = nullptr);

  const SamplerOptions& options() const { return options_; }

 private:
  BackwardOptions backward_options() const;

  const ModelSpec* model_;
  SamplerOptions options_;
  BackwardSketch sketch_;
};

SampleResult PerfectSample(const ModelSpec& model, NeuronId i, RngStream& stream,
                           const SamplerOptions& options = {});
CoupledSampleResult CoupledSample(const ModelSpec& model, std::span<const NeuronId> f,
                                  NeuronId i, RngStream& stream,
                                  const SamplerOptions& options = {});

enum class BatchMode { kPerfect, kCoupled };

struct BatchOptions {
  BatchMode mode = BatchMode::kPerfect;
  std::vector<NeuronId> finite_set;  // required in coupled mode
  SamplerOptions sampler;
  // 0 picks std::thread::hardware_concurrency().
  unsigned workers = 0;
};

// Aggregates over samples (seed, 0..n_samples-1). Every field is an integer
// count, so the result does not depend on worker count or scheduling.
struct BatchStatistics {
  NeuronId neuron = 0;
  std::uint64_t seed = 0;
  std::uint64_t n_samples = 0;
  std::map<Potential, std::uint64_t> potential_counts;
  std::map<Potential, std::uint64_t> restricted_potential_counts;
  std::map<std::uint64_t, std::uint64_t> n_stop_counts;
  std::map<std::size_t, std::uint64_t> max_clan_counts;
  std::uint64_t null_steps = 0;
  std::uint64_t disagreements = 0;
  std::uint64_t hits_outside = 0;
  std::uint64_t implication_violations = 0;  // disagree without an outside hit
  std::uint64_t identical_logs = 0;
  std::uint64_t containment_checks = 0;
  std::vector<double> clan_times;
  std::vector<std::uint64_t> clan_size_sum;
  std::vector<std::uint64_t> clan_size_sq_sum;

  void Merge(const BatchStatistics& other);

  Histogram potential_histogram() const;
  double mean_n_stop() const;
  double n_stop_stddev() const;
  // Fraction of samples with n_stop > n.
  double tail(std::uint64_t n) const;
  double mean_clan_size(std::size_t t) const;
  double clan_size_stderr(std::size_t t) const;
  double disagreement_rate() const;

  friend bool operator==(const BatchStatistics&, const BatchStatistics&) = default;
};

BatchStatistics RunBatch(const ModelSpec& model, NeuronId i, std::uint64_t n_samples,
                         std::uint64_t seed, const BatchOptions& options = {});

// Binomial standard error sqrt(p(1-p)/n).
double BinomialStderr(double p, std::uint64_t n);

}  // namespace clansim

#endif  // CLANSIM_SAMPLER_H_
