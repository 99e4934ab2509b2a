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

// Command-line front end: check, sample, couple, oracle, verify.
//
// Exit codes: 0 success, 1 a bound or condition failed (reports are still
// written), 2 bad usage or unreadable input.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clansim/backward.h"
#include "clansim/error.h"
#include "clansim/model.h"
#include "clansim/model_io.h"
#include "clansim/oracle.h"
#include "clansim/report.h"
#include "clansim/sampler.h"
#include "clansim/verify.h"

namespace {

using namespace clansim;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t ParseId(const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text[0] == '-') {
    throw UsageError("not a neuron id: '" + text + "'");
  }
  return v;
}

// "A..B" inclusive.
std::vector<NeuronId> ParseScope(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw UsageError("scope must look like A..B");
  const NeuronId a = ParseId(text.substr(0, dots));
  const NeuronId b = ParseId(text.substr(dots + 2));
  if (b < a) throw UsageError("empty scope " + text);
  return ScopeRange(a, b);
}

// Comma separated ids; "A..B" items expand.
std::vector<NeuronId> ParseList(const std::string& text) {
  std::vector<NeuronId> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.find("..") != std::string::npos) {
      for (NeuronId j : ParseScope(item)) out.push_back(j);
    } else {
      out.push_back(ParseId(item));
    }
  }
  if (out.empty()) throw UsageError("empty neuron list");
  return out;
}

void PrintQuantities(const ConditionReport& cond) {
  std::printf("%8s %14s %14s %14s %14s %14s\n", "neuron", "Lambda", "rho", "incoming",
              "margin", "alpha_i");
  for (const auto& q : cond.neurons) {
    std::printf("%8llu %14.10g %14.10g %14.10g %14.10g %14.10g\n",
                static_cast<unsigned long long>(q.id), q.big_lambda, q.rho, q.incoming,
                q.margin, q.alpha);
  }
  std::printf("beta = %.17g%s\n", cond.beta, cond.beta_finite ? "" : " (not finite)");
  std::printf("alpha = %.17g (%s)\n", cond.alpha,
              cond.regime == AlphaRegime::kContracting  ? "contracting"
              : cond.regime == AlphaRegime::kDegenerate ? "degenerate"
                                                        : "violated");
  std::printf("c = %.17g\n", cond.growth_c);
}

struct Common {
  std::string model_path;
  NeuronId neuron = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::uint64_t max_steps = 1'000'000;
  bool force = false;
  std::string scope;
};

std::vector<NeuronId> ScopeOf(const ModelSpec& model, const std::string& text) {
  return text.empty() ? DefaultScope(model) : ParseScope(text);
}

int RunCheck(const Common& c) {
  const ModelSpec model = ParseModel(c.model_path);
  const auto scope = ScopeOf(model, c.scope);
  const Diagnostics diag = Validate(model, scope);
  for (const auto& issue : diag.issues) std::printf("issue: %s\n", issue.describe().c_str());
  const ConditionReport cond = CheckConditions(model, scope);
  PrintQuantities(cond);
  if (cond.analytic) std::printf("analytic: %s\n", cond.analytic->describe().c_str());
  for (const auto& w : cond.warnings) std::printf("warning: %s\n", w.c_str());
  const bool ok = diag.passes() && cond.passes;
  std::printf("conditions: %s\n", ok ? "pass" : "FAIL");
  return ok ? 0 : kExitFail;
}

SamplerOptions SamplerOpts(const ModelSpec& model, const Common& c) {
  SamplerOptions o;
  o.max_steps = c.max_steps;
  o.force = c.force;
  o.scope = ScopeOf(model, c.scope);
  return o;
}

int RunSample(const Common& c, const std::string& out_path, const std::string& log_path) {
  const ModelSpec model = ParseModel(c.model_path);
  BatchOptions opts;
  opts.sampler = SamplerOpts(model, c);
  opts.workers = c.workers;
  const BatchStatistics stats = RunBatch(model, c.neuron, c.samples, c.seed, opts);
  std::printf("samples = %llu\nmean_n_stop = %.10g\nnull_steps = %llu\n",
              static_cast<unsigned long long>(stats.n_samples), stats.mean_n_stop(),
              static_cast<unsigned long long>(stats.null_steps));
  for (const auto& [p, prob] : stats.potential_histogram()) {
    std::printf("  P(X=%llu) = %.6f\n", static_cast<unsigned long long>(p), prob);
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw Error(ErrorCode::kIoError, "cannot open " + out_path);
    WriteCountCsv(out, stats.potential_counts);
  }
  if (!log_path.empty()) {
    // Log of sample 0; the same stream the batch used for that index.
    Sampler sampler(model, opts.sampler);
    RngStream stream(c.seed, 0);
    EventLog log;
    sampler.Sample(c.neuron, stream, &log, nullptr);
    std::ofstream out(log_path);
    if (!out) throw Error(ErrorCode::kIoError, "cannot open " + log_path);
    WriteEventLogCsv(out, log);
  }
  return 0;
}

int RunCouple(const Common& c, const std::string& finite_set) {
  const ModelSpec model = ParseModel(c.model_path);
  const auto f = ParseList(finite_set);
  BatchOptions opts;
  opts.mode = BatchMode::kCoupled;
  opts.finite_set = f;
  opts.sampler = SamplerOpts(model, c);
  opts.workers = c.workers;
  const BatchStatistics stats = RunBatch(model, c.neuron, c.samples, c.seed, opts);
  const DeltaF delta = ComputeDeltaF(model, f, opts.sampler.scope);
  const double rate = stats.disagreement_rate();
  const double se = BinomialStderr(rate, stats.n_samples);
  std::printf("samples = %llu\ndisagreement_rate = %.10g (stderr %.3g)\n",
              static_cast<unsigned long long>(stats.n_samples), rate, se);
  std::printf("hits_outside_f = %llu\nimplication_violations = %llu\n",
              static_cast<unsigned long long>(stats.hits_outside),
              static_cast<unsigned long long>(stats.implication_violations));
  std::printf("delta_f = %.17g\nalpha = %.17g\n", delta.delta, delta.alpha);
  bool ok = stats.implication_violations == 0;
  if (delta.contracting()) {
    std::printf("bound = %.17g\n", delta.bound());
    ok = ok && rate <= delta.bound() + 3.0 * se;
  } else {
    std::printf("bound = none (alpha >= 1)\n");
  }
  std::printf("pass = %s\n", ok ? "true" : "false");
  return ok ? 0 : kExitFail;
}

int RunOracle(const Common& c, std::uint64_t burn_in, std::uint64_t jumps,
              const std::string& out_path) {
  const ModelSpec model = ParseModel(c.model_path);
  if (!model.is_finite()) throw UsageError("oracle needs a finite model");
  RngStream rng(c.seed, 0);
  const Histogram h = EstimateMarginal(model, model.neurons(), c.neuron, burn_in, jumps, rng);
  for (const auto& [p, prob] : h) {
    std::printf("  P(X=%llu) = %.6f\n", static_cast<unsigned long long>(p), prob);
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw Error(ErrorCode::kIoError, "cannot open " + out_path);
    WriteHistogramCsv(out, h);
  }
  return 0;
}

int RunVerify(const Common& c, VerifyOptions v, const std::string& finite_set,
              const std::string& report_path) {
  const ModelSpec model = ParseModel(c.model_path);
  v.neuron = c.neuron;
  v.samples = c.samples;
  v.seed = c.seed;
  v.workers = c.workers;
  v.max_steps = c.max_steps;
  v.force = c.force;
  if (!c.scope.empty()) v.scope = ParseScope(c.scope);
  if (!finite_set.empty()) v.finite_set = ParseList(finite_set);
  const VerificationReport report = RunVerification(model, v);
  WriteReport(report, report_path);
  int failed = 0;
  for (const auto& b : report.bounds) {
    if (!b.pass) {
      ++failed;
      std::printf("FAIL %s: empirical %.6g vs %.6g (stderr %.3g)\n", b.name.c_str(),
                  b.empirical, b.analytic, b.std_error);
    }
  }
  std::printf("%zu bound records, %d failed; report written to %s\n", report.bounds.size(),
              failed, report_path.c_str());
  return report.passes() ? 0 : kExitFail;
}

bool IsInputError(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSchemaError:
    case ErrorCode::kIoError:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kNeuronOutOfScope:
      return true;
    default:
      return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clansim: perfect simulation of stochastic spiking networks"};
  app.require_subcommand(1);

  Common c;
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", c.model_path, "Model JSON file")->required();
  };
  auto add_sampling = [&](CLI::App* sub) {
    sub->add_option("--neuron", c.neuron, "Target neuron id")->required();
    sub->add_option("--samples", c.samples, "Number of samples")->required();
    sub->add_option("--seed", c.seed, "Master seed")->required();
    sub->add_option("--workers", c.workers, "Worker threads (0 = all cores)");
    sub->add_option("--max-steps", c.max_steps, "Per-sample step budget");
    sub->add_option("--scope", c.scope, "Scope A..B for condition checks");
    sub->add_flag("--force", c.force, "Sample even if the conditions fail");
  };

  auto* check = app.add_subcommand("check", "Print condition quantities; exit 0 iff they hold");
  add_model(check);
  check->add_option("--scope", c.scope, "Scope A..B");

  std::string out_path;
  std::string log_path;
  auto* sample = app.add_subcommand("sample", "Draw perfect samples of one neuron");
  add_model(sample);
  add_sampling(sample);
  sample->add_option("--out", out_path, "Histogram CSV (potential,count)");
  sample->add_option("--event-log", log_path, "Backward event log CSV of sample 0");

  std::string finite_set;
  auto* couple = app.add_subcommand("couple", "Couple the full and restricted samplers");
  add_model(couple);
  add_sampling(couple);
  couple->add_option("--finite-set", finite_set, "Comma separated ids of F")->required();

  std::uint64_t burn_in = 10'000;
  std::uint64_t jumps = 0;
  auto* oracle = app.add_subcommand("oracle", "Forward CTMC estimate of a marginal");
  add_model(oracle);
  oracle->add_option("--neuron", c.neuron, "Target neuron id")->required();
  oracle->add_option("--burn-in", burn_in, "Jumps discarded first");
  oracle->add_option("--jumps", jumps, "Jumps measured")->required();
  oracle->add_option("--seed", c.seed, "Seed")->required();
  oracle->add_option("--out", out_path, "Histogram CSV (potential,probability)");

  VerifyOptions v;
  std::string report_path;
  std::uint64_t oracle_jumps = 0;
  bool wall_clock = false;
  auto* verify = app.add_subcommand("verify", "Check every applicable bound; write a report");
  add_model(verify);
  add_sampling(verify);
  verify->add_option("--report", report_path, "Report JSON path")->required();
  verify->add_option("--finite-set", finite_set, "Coupling set (default: i and pre(i))");
  verify->add_option("--oracle-burn-in", v.oracle_burn_in, "Oracle burn-in jumps");
  verify->add_option("--oracle-jumps", oracle_jumps, "Oracle jumps (default: samples)");
  verify->add_flag("--wall-clock", wall_clock, "Record elapsed time in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*check) return RunCheck(c);
    if (*sample) return RunSample(c, out_path, log_path);
    if (*couple) return RunCouple(c, finite_set);
    if (*oracle) return RunOracle(c, burn_in, jumps, out_path);
    if (*verify) {
      if (oracle_jumps > 0) v.oracle_jumps = oracle_jumps;
      v.record_wall_clock = wall_clock;
      return RunVerify(c, v, finite_set, report_path);
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "clansim: %s\n", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    std::fprintf(stderr, "clansim: %s\n", e.what());
    return IsInputError(e.code()) ? kExitUsage : kExitFail;
  }
  return kExitUsage;
}
