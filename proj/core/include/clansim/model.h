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

#ifndef CLANSIM_MODEL_H_
#define CLANSIM_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace clansim {

using NeuronId = std::uint64_t;
using Threshold = std::uint32_t;
using Potential = std::uint64_t;

// Presynaptic enumerations longer than this are treated as unbounded.
inline constexpr std::size_t kMaxNeighborhood = std::size_t{1} << 20;

// Event rates lambda(0..K_max) of one neuron. Index 0 is the external
// stimulus, index k >= 1 the threshold-k spike attempt. Entries past the end
// are zero.
class RateVector {
 public:
  RateVector() = default;
  explicit RateVector(std::vector<double> rates) : rates_(std::move(rates)) {}

  double operator[](Threshold k) const {
    return k < rates_.size() ? rates_[k] : 0.0;
  }
  std::span<const double> values() const { return rates_; }
  Threshold max_threshold() const {
    return rates_.empty() ? 0 : static_cast<Threshold>(rates_.size() - 1);
  }

  double stimulus() const { return (*this)[0]; }
  double total() const;
  double spike_total() const;  // sum over k >= 1

  // lambda(0) / total. Throws kInertNeuron when the total rate is not positive.
  double rho() const;

  friend bool operator==(const RateVector&, const RateVector&) = default;

 private:
  std::vector<double> rates_;
};

// One neuron of an explicitly enumerated network. `post[k]` lists the
// neurons incremented by a threshold-k spike.
struct NeuronSpec {
  NeuronId id = 0;
  RateVector rates;
  std::map<Threshold, std::vector<NeuronId>> post;

  friend bool operator==(const NeuronSpec&, const NeuronSpec&) = default;
};

// Countable family on I = {0, 1, 2, ...} with lambda_i(k) = a0 * r^i * s(k).
// A threshold-k spike of i increments {i-1, ..., i-w_k}, so the presynaptic
// set of i is {i+1, ..., i+w_k}. `window[k-1]` holds w_k.
struct DecayingFeedforward {
  double a0 = 1.0;
  double r = 0.5;
  std::vector<double> s;
  std::vector<std::uint32_t> window;

  std::uint32_t width(Threshold k) const {
    return k >= 1 && k <= window.size() ? window[k - 1] : 0;
  }

  friend bool operator==(const DecayingFeedforward&,
                         const DecayingFeedforward&) = default;
};

// Immutable description of the network: rates and synaptic maps over a
// finite or countable neuron set. All queries are pure and thread-safe.
class ModelSpec {
 public:
  using PreMap = std::map<std::pair<NeuronId, Threshold>, std::vector<NeuronId>>;

  // Presynaptic sets are derived by inverting the postsynaptic maps.
  static ModelSpec Finite(std::vector<NeuronSpec> neurons);
  // Presynaptic sets taken verbatim; used to exercise duality checking.
  static ModelSpec FiniteWithPre(std::vector<NeuronSpec> neurons, PreMap pre);
  // Lazily evaluated countable family. No condition checking happens here;
  // see BuildDecayingFeedforward.
  static ModelSpec Countable(DecayingFeedforward family);

  bool is_finite() const;
  // Enumerated neurons in ascending id order. Throws for countable models.
  const std::vector<NeuronId>& neurons() const;
  const std::vector<NeuronSpec>& neuron_specs() const;
  const DecayingFeedforward* family() const;

  bool contains(NeuronId i) const;
  RateVector rates(NeuronId i) const;
  std::vector<NeuronId> post(NeuronId i, Threshold k) const;
  std::vector<NeuronId> pre(NeuronId i, Threshold k) const;
  // Largest threshold with a nonzero rate anywhere in the model.
  Threshold max_threshold() const;

 private:
  struct FiniteData {
    std::vector<NeuronSpec> specs;  // sorted by id
    std::vector<NeuronId> ids;
    PreMap pre;
  };

  explicit ModelSpec(std::variant<FiniteData, DecayingFeedforward> data)
      : data_(std::move(data)) {}

  const NeuronSpec& spec(NeuronId i) const;

  std::variant<FiniteData, DecayingFeedforward> data_;
};

// Issue found by Validate. `j` and `k` are meaningful only for the codes that
// name a synapse or a rate entry.
struct ValidationIssue {
  enum class Kind { kDualityViolation, kInertNeuron, kNegativeRate, kSelfSynapse };
  Kind kind;
  NeuronId i = 0;
  NeuronId j = 0;
  Threshold k = 0;

  std::string describe() const;
  friend bool operator==(const ValidationIssue&, const ValidationIssue&) = default;
};

struct Diagnostics {
  std::vector<ValidationIssue> issues;
  bool passes() const { return issues.empty(); }
};

Diagnostics Validate(const ModelSpec& model, std::span<const NeuronId> scope);

// Scope helpers. DefaultScope enumerates a finite model; for a countable one
// it returns {0, ..., 99}.
std::vector<NeuronId> ScopeRange(NeuronId first, NeuronId last);
std::vector<NeuronId> DefaultScope(const ModelSpec& model);

double BigLambda(const ModelSpec& model, NeuronId i);
double Rho(const ModelSpec& model, NeuronId i);
// D_i: summed rate of the presynaptic spikes that can increment i.
double IncomingRate(const ModelSpec& model, NeuronId i);
// Net removal tendency m_i = sum_k lambda_i(k) rho_i^k - D_i.
double ConditionMargin(const ModelSpec& model, NeuronId i);
// alpha_i = [2 D_i + lambda_i(0) + sum_k lambda_i(k)(1 - rho_i^k)] / Lambda_i.
double NeuronAlpha(const ModelSpec& model, NeuronId i);

double Alpha(const ModelSpec& model, std::span<const NeuronId> scope);
double GrowthConstant(const ModelSpec& model, std::span<const NeuronId> scope);

enum class AlphaRegime { kContracting, kDegenerate, kViolated };

struct NeuronQuantities {
  NeuronId id = 0;
  double big_lambda = 0.0;
  double rho = 0.0;
  double incoming = 0.0;
  double margin = 0.0;
  double alpha = 0.0;
  double growth = 0.0;
};

// Closed-form check for the decaying feed-forward family:
//   sum_k s(k) (r + r^2 + ... + r^{w_k})  <=  sum_{k>=1} s(k) rho^k.
struct FeedforwardInequality {
  double interaction = 0.0;  // left-hand side
  double removal = 0.0;      // right-hand side
  bool holds = false;
  std::string describe() const;
};

struct ConditionReport {
  std::vector<NeuronQuantities> neurons;
  double beta = 0.0;
  double alpha = 0.0;
  double growth_c = 0.0;
  AlphaRegime regime = AlphaRegime::kContracting;
  bool beta_finite = true;
  bool passes = false;
  std::optional<FeedforwardInequality> analytic;
  std::vector<std::string> warnings;
};

ConditionReport CheckConditions(const ModelSpec& model,
                                std::span<const NeuronId> scope);

FeedforwardInequality AnalyzeFeedforward(const DecayingFeedforward& family);

// Builds the countable family after checking its closed-form condition.
// Throws kConditionViolated carrying the inequality on failure.
ModelSpec BuildDecayingFeedforward(DecayingFeedforward family);

// Finite-neighbourhood error measure: sup over scope of
// (rate of presynaptic spikes from outside F) / Lambda_i.
struct DeltaF {
  double delta = 0.0;
  double alpha = 0.0;

  bool contracting() const { return alpha < 1.0; }
  // delta / (1 - alpha). Throws kAlphaNotContracting when alpha >= 1.
  double bound() const;
};

DeltaF ComputeDeltaF(const ModelSpec& model, std::span<const NeuronId> f,
                     std::span<const NeuronId> scope);

}  // namespace clansim

#endif  // CLANSIM_MODEL_H_
