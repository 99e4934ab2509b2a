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

#include "clansim/verify.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "clansim/error.h"
#include "clansim/model_io.h"
#include "clansim/sampler.h"

namespace clansim {
namespace {

std::string Indexed(const char* name, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s[%g]", name, x);
  return buf;
}

std::string Indexed(const char* name, std::uint64_t n) {
  return std::string(name) + "[" + std::to_string(n) + "]";
}

// True when nothing can ever feed i: its clan never grows past {i}.
bool Isolated(const ModelSpec& model, NeuronId i) {
  for (Threshold k = 1; k <= model.max_threshold(); ++k) {
    if (!model.pre(i, k).empty()) return false;
  }
  return true;
}

}  // namespace

std::vector<NeuronId> DefaultCouplingSet(const ModelSpec& model, NeuronId i) {
  std::vector<NeuronId> f = {i};
  for (Threshold k = 1; k <= model.max_threshold(); ++k) {
    for (NeuronId j : model.pre(i, k)) f.push_back(j);
  }
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

double TvToGeometric(const Histogram& h, double q) {
  Potential top = h.empty() ? 0 : h.rbegin()->first;
  double sum = 0.0;
  double mass = 0.0;
  double pn = 1.0 - q;
  for (Potential n = 0; n <= top; ++n, pn *= q) {
    auto it = h.find(n);
    const double e = it == h.end() ? 0.0 : it->second;
    sum += std::abs(e - pn);
    mass += pn;
  }
  // Geometric mass beyond the largest observed value.
  sum += std::max(0.0, 1.0 - mass);
  return 0.5 * sum;
}

VerificationReport RunVerification(const ModelSpec& model, const VerifyOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const NeuronId i = options.neuron;
  if (!model.contains(i)) {
    throw Error(ErrorCode::kNeuronOutOfScope,
                "neuron " + std::to_string(i) + " is not in the model");
  }
  if (options.samples == 0) {
    throw Error(ErrorCode::kInvalidArgument, "verify needs at least one sample");
  }
  const std::vector<NeuronId> scope = options.scope ? *options.scope : DefaultScope(model);

  VerificationReport report;
  report.model_digest = ModelDigest(model);

  const ConditionReport cond = CheckConditions(model, scope);
  report.quantities["alpha"] = cond.alpha;
  report.quantities["beta"] = cond.beta_finite ? cond.beta : INFINITY;
  report.quantities["growth_c"] = cond.growth_c;
  for (const auto& q : cond.neurons) {
    report.quantities[Indexed("big_lambda", q.id)] = q.big_lambda;
    report.quantities[Indexed("rho", q.id)] = q.rho;
    report.quantities[Indexed("margin", q.id)] = q.margin;
    report.quantities[Indexed("alpha_i", q.id)] = q.alpha;
  }
  const double alpha = cond.alpha;
  const double c = cond.growth_c;

  SamplerOptions sopts;
  sopts.max_steps = options.max_steps;
  sopts.force = options.force;
  sopts.scope = scope;

  // Perfect samples, with holding times so the clan size can be tracked.
  BatchOptions perfect;
  perfect.sampler = sopts;
  perfect.sampler.clan_times = options.clan_times;
  perfect.workers = options.workers;
  const BatchStatistics stats = RunBatch(model, i, options.samples, options.seed, perfect);
  report.seeds["perfect"] = options.seed;
  report.counts["samples"] = stats.n_samples;
  report.counts["null_steps"] = stats.null_steps;
  const double n = static_cast<double>(stats.n_samples);

  const bool isolated = Isolated(model, i);
  const double alpha_i = NeuronAlpha(model, i);
  for (std::uint64_t m = 1; m <= options.tail_max; ++m) {
    const double p = stats.tail(m);
    report.bounds.push_back(BoundRecord::Inequality(Indexed("tail_bound", m),
                                                    std::pow(alpha, m), p,
                                                    BinomialStderr(p, stats.n_samples)));
  }
  const double mean_se = stats.n_stop_stddev() / std::sqrt(n);
  if (alpha < 1.0) {
    report.bounds.push_back(BoundRecord::Inequality("mean_n_stop_bound", 1.0 / (1.0 - alpha),
                                                    stats.mean_n_stop(), mean_se));
  }
  for (std::size_t t = 0; t < options.clan_times.size(); ++t) {
    const double s = options.clan_times[t];
    report.bounds.push_back(BoundRecord::Inequality(Indexed("clan_size_bound", s),
                                                    std::exp(c * s), stats.mean_clan_size(t),
                                                    stats.clan_size_stderr(t)));
  }

  if (isolated) {
    // The clan stays {i} until one certified spike empties it, so N_STOP is
    // geometric and the clan size decays at the neuron's own removal rate.
    for (std::uint64_t m = 1; m <= std::min(options.exact_tail_max, options.tail_max); ++m) {
      const double a = std::pow(alpha_i, m);
      report.bounds.push_back(BoundRecord::Exact(Indexed("tail_exact", m), a, stats.tail(m),
                                                 BinomialStderr(a, stats.n_samples)));
    }
    if (alpha_i < 1.0) {
      report.bounds.push_back(BoundRecord::Exact("mean_n_stop_exact", 1.0 / (1.0 - alpha_i),
                                                 stats.mean_n_stop(), mean_se));
    }
    const double own_c = -ConditionMargin(model, i);
    for (std::size_t t = 0; t < options.clan_times.size(); ++t) {
      const double s = options.clan_times[t];
      report.bounds.push_back(BoundRecord::Exact(Indexed("clan_size_exact", s),
                                                 std::exp(own_c * s), stats.mean_clan_size(t),
                                                 stats.clan_size_stderr(t)));
    }
    if (model.rates(i).max_threshold() <= 1) {
      const double tv = TvToGeometric(stats.potential_histogram(), Rho(model, i));
      report.bounds.push_back(BoundRecord::Below("geometric_tv", 0.01, tv));
    }
  }

  // Coupled samples against the restricted chain on F.
  const std::vector<NeuronId> f =
      options.finite_set ? *options.finite_set : DefaultCouplingSet(model, i);
  const DeltaF delta = ComputeDeltaF(model, f, scope);
  report.quantities["delta_f"] = delta.delta;
  BatchOptions coupled;
  coupled.mode = BatchMode::kCoupled;
  coupled.finite_set = f;
  coupled.sampler = sopts;
  coupled.workers = options.workers;
  report.seeds["coupled"] = options.seed + 1;
  try {
    const BatchStatistics cs = RunBatch(model, i, options.samples, options.seed + 1, coupled);
    report.counts["coupled_samples"] = cs.n_samples;
    report.counts["disagreements"] = cs.disagreements;
    report.counts["hits_outside_f"] = cs.hits_outside;
    report.counts["containment_checks"] = cs.containment_checks;
    const double rate = cs.disagreement_rate();
    if (delta.contracting()) {
      report.quantities["coupling_bound"] = delta.bound();
      report.bounds.push_back(BoundRecord::Inequality(
          "coupling_bound", delta.bound(), rate, BinomialStderr(rate, cs.n_samples)));
    }
    report.bounds.push_back(BoundRecord::Exact(
        "coupling_implication_violations", 0.0,
        static_cast<double>(cs.implication_violations), 0.0));
    report.bounds.push_back(BoundRecord::Exact("containment_violations", 0.0, 0.0, 0.0));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kContainmentViolation) throw;
    report.bounds.push_back(BoundRecord::Exact("containment_violations", 0.0, 1.0, 0.0));
  }

  if (model.is_finite()) {
    const std::uint64_t jumps = options.oracle_jumps.value_or(options.samples);
    RngStream rng(options.seed + 2, 0);
    const Histogram oracle =
        EstimateMarginal(model, model.neurons(), i, options.oracle_burn_in, jumps, rng);
    report.seeds["oracle"] = options.seed + 2;
    report.counts["oracle_burn_in"] = options.oracle_burn_in;
    report.counts["oracle_jumps"] = jumps;
    report.bounds.push_back(
        BoundRecord::Below("oracle_tv", 0.02, TvDistance(stats.potential_histogram(), oracle)));
  }

  if (options.record_wall_clock) {
    report.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  }
  return report;
}

}  // namespace clansim
