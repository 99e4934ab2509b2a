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

#include "clansim/sampler.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "clansim/error.h"
#include "clansim/replay.h"

namespace clansim {

Sampler::Sampler(const ModelSpec& model, SamplerOptions options)
    : model_(&model), options_(std::move(options)), sketch_(model) {
  std::sort(options_.clan_times.begin(), options_.clan_times.end());
  if (options_.force) return;
  const std::vector<NeuronId> scope =
      options_.scope.empty() ? DefaultScope(model) : options_.scope;
  const Diagnostics diagnostics = Validate(model, scope);
  if (!diagnostics.passes()) {
    throw Error(ErrorCode::kConditionViolated,
                "model is invalid: " + diagnostics.issues.front().describe());
  }
  const ConditionReport report = CheckConditions(model, scope);
  if (!report.passes) {
    throw Error(ErrorCode::kConditionViolated,
                "existence conditions fail (alpha = " + std::to_string(report.alpha) +
                    "); pass force to sample anyway");
  }
}

BackwardOptions Sampler::backward_options() const {
  BackwardOptions backward;
  backward.max_steps = options_.max_steps;
  backward.holding_times = !options_.clan_times.empty();
  backward.record_trajectory = backward.holding_times;
  return backward;
}

namespace {

void RecordClanSizes(const BackwardRun& run, std::span<const double> times,
                     std::vector<std::size_t>* sizes) {
  if (sizes == nullptr) return;
  sizes->clear();
  for (double s : times) sizes->push_back(ClanSizeAt(run, s));
}

SampleResult Summarize(const BackwardRun& run, Potential potential,
                       const RngStream& stream) {
  return SampleResult{potential,   run.n_stop,    run.max_clan,
                      run.null_steps, stream.seed(), stream.sample_index()};
}

}  // namespace

SampleResult Sampler::Sample(NeuronId i, RngStream& stream) {
  return Sample(i, stream, nullptr, nullptr);
}

SampleResult Sampler::Sample(NeuronId i, RngStream& stream, EventLog* log,
                             std::vector<std::size_t>* clan_sizes) {
  BackwardRun run = sketch_.Run(i, stream, backward_options());
  const Potential potential = Replay(sketch_.cache(), run.log, i);
  RecordClanSizes(run, options_.clan_times, clan_sizes);
  SampleResult result = Summarize(run, potential, stream);
  if (log != nullptr) *log = std::move(run.log);
  return result;
}

CoupledSampleResult Sampler::CoupledSample(std::span<const NeuronId> f, NeuronId i,
                                           RngStream& stream,
                                           std::vector<std::size_t>* clan_sizes) {
  const CoupledBackwardRun run = sketch_.RunCoupled(f, i, stream, backward_options());
  CoupledSampleResult result;
  result.hit_outside_f = run.hit_outside_f;
  result.containment_checks = run.containment_checks;
  result.logs_identical = run.full.log == run.restricted.log;
  const Potential full = Replay(sketch_.cache(), run.full.log, i);
  const Potential restricted =
      result.logs_identical ? full : Replay(sketch_.cache(), run.restricted.log, i);
  result.full = Summarize(run.full, full, stream);
  result.restricted = Summarize(run.restricted, restricted, stream);
  result.agree = full == restricted;
  RecordClanSizes(run.full, options_.clan_times, clan_sizes);
  return result;
}

SampleResult PerfectSample(const ModelSpec& model, NeuronId i, RngStream& stream,
                           const SamplerOptions& options) {
  return Sampler(model, options).Sample(i, stream);
}

CoupledSampleResult CoupledSample(const ModelSpec& model, std::span<const NeuronId> f,
                                  NeuronId i, RngStream& stream,
                                  const SamplerOptions& options) {
  return Sampler(model, options).CoupledSample(f, i, stream);
}

void BatchStatistics::Merge(const BatchStatistics& other) {
  n_samples += other.n_samples;
  for (const auto& [k, v] : other.potential_counts) potential_counts[k] += v;
  for (const auto& [k, v] : other.restricted_potential_counts) {
    restricted_potential_counts[k] += v;
  }
  for (const auto& [k, v] : other.n_stop_counts) n_stop_counts[k] += v;
  for (const auto& [k, v] : other.max_clan_counts) max_clan_counts[k] += v;
  null_steps += other.null_steps;
  disagreements += other.disagreements;
  hits_outside += other.hits_outside;
  implication_violations += other.implication_violations;
  identical_logs += other.identical_logs;
  containment_checks += other.containment_checks;
  clan_size_sum.resize(std::max(clan_size_sum.size(), other.clan_size_sum.size()));
  clan_size_sq_sum.resize(clan_size_sum.size());
  for (std::size_t t = 0; t < other.clan_size_sum.size(); ++t) {
    clan_size_sum[t] += other.clan_size_sum[t];
    clan_size_sq_sum[t] += other.clan_size_sq_sum[t];
  }
}

Histogram BatchStatistics::potential_histogram() const {
  return Normalize(potential_counts);
}

double BatchStatistics::mean_n_stop() const {
  if (n_samples == 0) return 0.0;
  double sum = 0.0;
  for (const auto& [n, count] : n_stop_counts) {
    sum += static_cast<double>(n) * static_cast<double>(count);
  }
  return sum / static_cast<double>(n_samples);
}

double BatchStatistics::n_stop_stddev() const {
  if (n_samples < 2) return 0.0;
  const double mean = mean_n_stop();
  double sq = 0.0;
  for (const auto& [n, count] : n_stop_counts) {
    const double d = static_cast<double>(n) - mean;
    sq += d * d * static_cast<double>(count);
  }
  return std::sqrt(sq / static_cast<double>(n_samples - 1));
}

double BatchStatistics::tail(std::uint64_t n) const {
  if (n_samples == 0) return 0.0;
  std::uint64_t above = 0;
  for (auto it = n_stop_counts.upper_bound(n); it != n_stop_counts.end(); ++it) {
    above += it->second;
  }
  return static_cast<double>(above) / static_cast<double>(n_samples);
}

double BatchStatistics::mean_clan_size(std::size_t t) const {
  return n_samples == 0 ? 0.0
                        : static_cast<double>(clan_size_sum.at(t)) /
                              static_cast<double>(n_samples);
}

double BatchStatistics::clan_size_stderr(std::size_t t) const {
  if (n_samples < 2) return 0.0;
  const double n = static_cast<double>(n_samples);
  const double mean = mean_clan_size(t);
  const double var =
      (static_cast<double>(clan_size_sq_sum.at(t)) - n * mean * mean) / (n - 1.0);
  return std::sqrt(std::max(var, 0.0) / n);
}

double BatchStatistics::disagreement_rate() const {
  return n_samples == 0 ? 0.0
                        : static_cast<double>(disagreements) /
                              static_cast<double>(n_samples);
}

double BinomialStderr(double p, std::uint64_t n) {
  if (n == 0) return 0.0;
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

namespace {

BatchStatistics EmptyStatistics(NeuronId i, std::uint64_t seed,
                                std::span<const double> clan_times) {
  BatchStatistics stats;
  stats.neuron = i;
  stats.seed = seed;
  stats.clan_times.assign(clan_times.begin(), clan_times.end());
  stats.clan_size_sum.assign(clan_times.size(), 0);
  stats.clan_size_sq_sum.assign(clan_times.size(), 0);
  return stats;
}

void Accumulate(BatchStatistics& stats, const SampleResult& sample,
                const std::vector<std::size_t>& sizes) {
  ++stats.n_samples;
  ++stats.potential_counts[sample.potential];
  ++stats.n_stop_counts[sample.n_stop];
  ++stats.max_clan_counts[sample.max_clan];
  stats.null_steps += sample.steps_null;
  for (std::size_t t = 0; t < sizes.size(); ++t) {
    stats.clan_size_sum[t] += sizes[t];
    stats.clan_size_sq_sum[t] += sizes[t] * sizes[t];
  }
}

}  // namespace

BatchStatistics RunBatch(const ModelSpec& model, NeuronId i, std::uint64_t n_samples,
                         std::uint64_t seed, const BatchOptions& options) {
  if (n_samples < 1) throw Error(ErrorCode::kInvalidArgument, "n_samples must be >= 1");
  const bool coupled = options.mode == BatchMode::kCoupled;
  if (coupled && options.finite_set.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "coupled batch needs a finite set");
  }
  // Validates conditions once, on the calling thread.
  SamplerOptions sampler_options = options.sampler;
  std::sort(sampler_options.clan_times.begin(), sampler_options.clan_times.end());
  { Sampler probe(model, sampler_options); }
  sampler_options.force = true;

  unsigned workers = options.workers != 0 ? options.workers
                                          : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n_samples));

  std::vector<BatchStatistics> partial(
      workers, EmptyStatistics(i, seed, sampler_options.clan_times));
  std::vector<std::exception_ptr> failures(workers);
  std::vector<std::uint64_t> failed_index(workers, 0);

  auto work = [&](unsigned w) {
    const std::uint64_t begin = n_samples * w / workers;
    const std::uint64_t end = n_samples * (w + 1) / workers;
    Sampler sampler(model, sampler_options);
    std::vector<std::size_t> sizes;
    BatchStatistics& stats = partial[w];
    std::uint64_t index = begin;
    try {
      for (; index < end; ++index) {
        RngStream stream(seed, index);
        if (coupled) {
          const CoupledSampleResult r =
              sampler.CoupledSample(options.finite_set, i, stream, &sizes);
          Accumulate(stats, r.full, sizes);
          ++stats.restricted_potential_counts[r.restricted.potential];
          stats.disagreements += r.agree ? 0 : 1;
          stats.hits_outside += r.hit_outside_f ? 1 : 0;
          stats.implication_violations += (!r.agree && !r.hit_outside_f) ? 1 : 0;
          stats.identical_logs += r.logs_identical ? 1 : 0;
          stats.containment_checks += r.containment_checks;
        } else {
          const SampleResult r = sampler.Sample(i, stream, nullptr, &sizes);
          Accumulate(stats, r, sizes);
        }
      }
    } catch (...) {
      failures[w] = std::current_exception();
      failed_index[w] = index;
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }

  for (unsigned w = 0; w < workers; ++w) {
    if (!failures[w]) continue;
    try {
      std::rethrow_exception(failures[w]);
    } catch (const Error& e) {
      throw Error(e.code(), "sample " + std::to_string(failed_index[w]) + ": " + e.what());
    }
  }

  BatchStatistics total = EmptyStatistics(i, seed, sampler_options.clan_times);
  for (const auto& p : partial) total.Merge(p);
  return total;
}

}  // namespace clansim
