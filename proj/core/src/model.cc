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

#include "clansim/model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "clansim/error.h"

namespace clansim {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDualityViolation: return "DualityViolation";
    case ErrorCode::kInertNeuron: return "InertNeuron";
    case ErrorCode::kNegativeRate: return "NegativeRate";
    case ErrorCode::kSelfSynapse: return "SelfSynapse";
    case ErrorCode::kUnboundedNeighborhood: return "UnboundedNeighborhood";
    case ErrorCode::kConditionViolated: return "ConditionViolated";
    case ErrorCode::kAlphaNotContracting: return "AlphaNotContracting";
    case ErrorCode::kEmptyClan: return "EmptyClan";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kContainmentViolation: return "ContainmentViolation";
    case ErrorCode::kReplayInvariantViolation: return "ReplayInvariantViolation";
    case ErrorCode::kNeuronOutOfScope: return "NeuronOutOfScope";
    case ErrorCode::kNotNormalized: return "NotNormalized";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

double RateVector::total() const {
  return std::accumulate(rates_.begin(), rates_.end(), 0.0);
}

double RateVector::spike_total() const {
  return rates_.empty() ? 0.0 : total() - rates_[0];
}

double RateVector::rho() const {
  const double sum = total();
  if (!(sum > 0.0)) {
    throw Error(ErrorCode::kInertNeuron, "total rate is not positive");
  }
  return stimulus() / sum;
}

namespace {

void SortUnique(std::vector<NeuronId>& ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

std::vector<NeuronSpec> Normalize(std::vector<NeuronSpec> neurons) {
  std::sort(neurons.begin(), neurons.end(),
            [](const NeuronSpec& a, const NeuronSpec& b) { return a.id < b.id; });
  for (std::size_t n = 1; n < neurons.size(); ++n) {
    if (neurons[n].id == neurons[n - 1].id) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate neuron id " + std::to_string(neurons[n].id));
    }
  }
  for (auto& neuron : neurons) {
    for (auto it = neuron.post.begin(); it != neuron.post.end();) {
      if (it->first == 0) {
        throw Error(ErrorCode::kInvalidArgument,
                    "synapse threshold must be >= 1 (neuron " +
                        std::to_string(neuron.id) + ")");
      }
      SortUnique(it->second);
      it = it->second.empty() ? neuron.post.erase(it) : std::next(it);
    }
  }
  return neurons;
}

std::vector<NeuronId> IdsOf(const std::vector<NeuronSpec>& specs) {
  std::vector<NeuronId> ids;
  ids.reserve(specs.size());
  for (const auto& s : specs) ids.push_back(s.id);
  return ids;
}

}  // namespace

ModelSpec ModelSpec::Finite(std::vector<NeuronSpec> neurons) {
  FiniteData data;
  data.specs = Normalize(std::move(neurons));
  data.ids = IdsOf(data.specs);
  for (const auto& neuron : data.specs) {
    for (const auto& [k, targets] : neuron.post) {
      for (NeuronId target : targets) {
        if (!std::binary_search(data.ids.begin(), data.ids.end(), target)) {
          throw Error(ErrorCode::kNeuronOutOfScope,
                      "neuron " + std::to_string(neuron.id) +
                          " projects to unknown neuron " + std::to_string(target));
        }
        data.pre[{target, k}].push_back(neuron.id);
      }
    }
  }
  for (auto& [key, sources] : data.pre) SortUnique(sources);
  return ModelSpec(std::move(data));
}

ModelSpec ModelSpec::FiniteWithPre(std::vector<NeuronSpec> neurons, PreMap pre) {
  FiniteData data;
  data.specs = Normalize(std::move(neurons));
  data.ids = IdsOf(data.specs);
  for (auto& [key, sources] : pre) SortUnique(sources);
  std::erase_if(pre, [](const auto& entry) { return entry.second.empty(); });
  data.pre = std::move(pre);
  return ModelSpec(std::move(data));
}

ModelSpec ModelSpec::Countable(DecayingFeedforward family) {
  return ModelSpec(std::move(family));
}

bool ModelSpec::is_finite() const {
  return std::holds_alternative<FiniteData>(data_);
}

const std::vector<NeuronId>& ModelSpec::neurons() const {
  if (const auto* finite = std::get_if<FiniteData>(&data_)) return finite->ids;
  throw Error(ErrorCode::kInvalidArgument,
              "countable model has no finite enumeration");
}

const std::vector<NeuronSpec>& ModelSpec::neuron_specs() const {
  if (const auto* finite = std::get_if<FiniteData>(&data_)) return finite->specs;
  throw Error(ErrorCode::kInvalidArgument,
              "countable model has no finite enumeration");
}

const DecayingFeedforward* ModelSpec::family() const {
  return std::get_if<DecayingFeedforward>(&data_);
}

bool ModelSpec::contains(NeuronId i) const {
  if (const auto* finite = std::get_if<FiniteData>(&data_)) {
    return std::binary_search(finite->ids.begin(), finite->ids.end(), i);
  }
  return true;
}

const NeuronSpec& ModelSpec::spec(NeuronId i) const {
  const auto& finite = std::get<FiniteData>(data_);
  auto it = std::lower_bound(finite.ids.begin(), finite.ids.end(), i);
  if (it == finite.ids.end() || *it != i) {
    throw Error(ErrorCode::kNeuronOutOfScope,
                "neuron " + std::to_string(i) + " is not in the model");
  }
  return finite.specs[static_cast<std::size_t>(it - finite.ids.begin())];
}

RateVector ModelSpec::rates(NeuronId i) const {
  if (std::holds_alternative<FiniteData>(data_)) return spec(i).rates;
  const auto& fam = std::get<DecayingFeedforward>(data_);
  const double scale = fam.a0 * std::pow(fam.r, static_cast<double>(i));
  std::vector<double> values(fam.s.size());
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = scale * fam.s[k];
  return RateVector(std::move(values));
}

std::vector<NeuronId> ModelSpec::post(NeuronId i, Threshold k) const {
  if (std::holds_alternative<FiniteData>(data_)) {
    const auto& post = spec(i).post;
    auto it = post.find(k);
    return it == post.end() ? std::vector<NeuronId>{} : it->second;
  }
  const auto& fam = std::get<DecayingFeedforward>(data_);
  const NeuronId width = fam.width(k);
  if (width > kMaxNeighborhood) {
    throw Error(ErrorCode::kUnboundedNeighborhood,
                "window w_" + std::to_string(k) + " exceeds the neighbourhood limit");
  }
  std::vector<NeuronId> out;
  const NeuronId lowest = i >= width ? i - width : 0;
  for (NeuronId u = lowest; u < i; ++u) out.push_back(u);
  return out;
}

std::vector<NeuronId> ModelSpec::pre(NeuronId i, Threshold k) const {
  if (const auto* finite = std::get_if<FiniteData>(&data_)) {
    spec(i);
    auto it = finite->pre.find({i, k});
    return it == finite->pre.end() ? std::vector<NeuronId>{} : it->second;
  }
  const auto& fam = std::get<DecayingFeedforward>(data_);
  const NeuronId width = fam.width(k);
  if (width > kMaxNeighborhood) {
    throw Error(ErrorCode::kUnboundedNeighborhood,
                "window w_" + std::to_string(k) + " exceeds the neighbourhood limit");
  }
  std::vector<NeuronId> out;
  out.reserve(width);
  for (NeuronId m = 1; m <= width; ++m) out.push_back(i + m);
  return out;
}

Threshold ModelSpec::max_threshold() const {
  if (const auto* finite = std::get_if<FiniteData>(&data_)) {
    Threshold k_max = 0;
    for (const auto& s : finite->specs) k_max = std::max(k_max, s.rates.max_threshold());
    return k_max;
  }
  const auto& fam = std::get<DecayingFeedforward>(data_);
  return fam.s.empty() ? 0 : static_cast<Threshold>(fam.s.size() - 1);
}

std::string ValidationIssue::describe() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::kDualityViolation:
      out << "DualityViolation(" << i << "," << j << "," << k << ")";
      break;
    case Kind::kInertNeuron:
      out << "InertNeuron(" << i << ")";
      break;
    case Kind::kNegativeRate:
      out << "NegativeRate(" << i << "," << k << ")";
      break;
    case Kind::kSelfSynapse:
      out << "SelfSynapse(" << i << "," << k << ")";
      break;
  }
  return out.str();
}

Diagnostics Validate(const ModelSpec& model, std::span<const NeuronId> scope) {
  if (scope.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "validation scope is empty");
  }
  using Kind = ValidationIssue::Kind;
  Diagnostics diagnostics;
  auto report = [&](ValidationIssue issue) {
    if (std::find(diagnostics.issues.begin(), diagnostics.issues.end(), issue) ==
        diagnostics.issues.end()) {
      diagnostics.issues.push_back(issue);
    }
  };
  const Threshold k_max = model.max_threshold();
  for (NeuronId i : scope) {
    const RateVector rates = model.rates(i);
    bool negative = false;
    for (Threshold k = 0; k <= rates.max_threshold() && !rates.values().empty(); ++k) {
      if (rates[k] < 0.0) {
        report({Kind::kNegativeRate, i, 0, k});
        negative = true;
      }
    }
    if (!negative && !(rates.total() > 0.0)) report({Kind::kInertNeuron, i, 0, 0});

    for (Threshold k = 1; k <= k_max; ++k) {
      for (NeuronId j : model.post(i, k)) {
        if (j == i) {
          report({Kind::kSelfSynapse, i, i, k});
          continue;
        }
        const auto back = model.pre(j, k);
        if (!std::binary_search(back.begin(), back.end(), i)) {
          report({Kind::kDualityViolation, i, j, k});
        }
      }
      for (NeuronId j : model.pre(i, k)) {
        if (j == i) {
          report({Kind::kSelfSynapse, i, i, k});
          continue;
        }
        if (!model.contains(j)) {
          report({Kind::kDualityViolation, j, i, k});
          continue;
        }
        const auto forward = model.post(j, k);
        if (std::find(forward.begin(), forward.end(), i) == forward.end()) {
          report({Kind::kDualityViolation, j, i, k});
        }
      }
    }
  }
  return diagnostics;
}

std::vector<NeuronId> ScopeRange(NeuronId first, NeuronId last) {
  if (last < first) {
    throw Error(ErrorCode::kInvalidArgument, "scope range is empty");
  }
  std::vector<NeuronId> scope;
  scope.reserve(last - first + 1);
  for (NeuronId i = first; i <= last; ++i) scope.push_back(i);
  return scope;
}

std::vector<NeuronId> DefaultScope(const ModelSpec& model) {
  return model.is_finite() ? model.neurons() : ScopeRange(0, 99);
}

double IncomingRate(const ModelSpec& model, NeuronId i) {
  double incoming = 0.0;
  const Threshold k_max = model.max_threshold();
  for (Threshold k = 1; k <= k_max; ++k) {
    const auto sources = model.pre(i, k);
    if (sources.size() > kMaxNeighborhood) {
      throw Error(ErrorCode::kUnboundedNeighborhood,
                  "presynaptic set of neuron " + std::to_string(i) + " is too large");
    }
    for (NeuronId j : sources) incoming += model.rates(j)[k];
  }
  return incoming;
}

double BigLambda(const ModelSpec& model, NeuronId i) {
  return model.rates(i).total() + IncomingRate(model, i);
}

double Rho(const ModelSpec& model, NeuronId i) {
  try {
    return model.rates(i).rho();
  } catch (const Error&) {
    throw Error(ErrorCode::kInertNeuron, "neuron " + std::to_string(i));
  }
}

namespace {

// sum_{k>=1} lambda(k) rho^k
double CertifiedRemovalRate(const RateVector& rates, double rho) {
  double sum = 0.0;
  double power = 1.0;
  for (Threshold k = 1; k <= rates.max_threshold(); ++k) {
    power *= rho;
    sum += rates[k] * power;
  }
  return sum;
}

NeuronQuantities Quantities(const ModelSpec& model, NeuronId i) {
  const RateVector rates = model.rates(i);
  NeuronQuantities q;
  q.id = i;
  q.rho = Rho(model, i);
  q.incoming = IncomingRate(model, i);
  q.big_lambda = rates.total() + q.incoming;
  const double removal = CertifiedRemovalRate(rates, q.rho);
  q.margin = removal - q.incoming;
  q.growth = q.incoming - removal;
  // Stimuli plus uncertified attempts leave the clan unchanged (weight 1);
  // presynaptic additions grow it to two members (weight 2).
  q.alpha = (2.0 * q.incoming + rates.stimulus() + (rates.spike_total() - removal)) /
            q.big_lambda;
  return q;
}

}  // namespace

double ConditionMargin(const ModelSpec& model, NeuronId i) {
  return Quantities(model, i).margin;
}

double NeuronAlpha(const ModelSpec& model, NeuronId i) {
  return Quantities(model, i).alpha;
}

double Alpha(const ModelSpec& model, std::span<const NeuronId> scope) {
  double alpha = -std::numeric_limits<double>::infinity();
  for (NeuronId i : scope) alpha = std::max(alpha, NeuronAlpha(model, i));
  return alpha;
}

double GrowthConstant(const ModelSpec& model, std::span<const NeuronId> scope) {
  double c = -std::numeric_limits<double>::infinity();
  for (NeuronId i : scope) c = std::max(c, Quantities(model, i).growth);
  return c;
}

std::string FeedforwardInequality::describe() const {
  std::ostringstream out;
  out.precision(17);
  out << "sum_k s(k)(r+...+r^w_k) = " << interaction
      << (holds ? " <= " : " > ") << "sum_k s(k) rho^k = " << removal;
  return out.str();
}

FeedforwardInequality AnalyzeFeedforward(const DecayingFeedforward& family) {
  if (family.s.empty() || !(family.s[0] > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "s(0) must be positive");
  }
  if (!(family.a0 > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "a0 must be positive");
  }
  if (!(family.r > 0.0 && family.r < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "r must lie in (0, 1)");
  }
  for (double v : family.s) {
    if (v < 0.0) throw Error(ErrorCode::kInvalidArgument, "s(k) must be >= 0");
  }
  const RateVector s(family.s);
  const double rho = s.rho();
  FeedforwardInequality result;
  result.removal = CertifiedRemovalRate(s, rho);
  for (Threshold k = 1; k <= s.max_threshold(); ++k) {
    double geometric = 0.0;
    double power = 1.0;
    for (std::uint32_t m = 1; m <= family.width(k); ++m) {
      power *= family.r;
      geometric += power;
    }
    result.interaction += s[k] * geometric;
  }
  result.holds = result.interaction <= result.removal;
  return result;
}

ModelSpec BuildDecayingFeedforward(DecayingFeedforward family) {
  const FeedforwardInequality check = AnalyzeFeedforward(family);
  if (!check.holds) {
    throw Error(ErrorCode::kConditionViolated, check.describe());
  }
  return ModelSpec::Countable(std::move(family));
}

ConditionReport CheckConditions(const ModelSpec& model,
                                std::span<const NeuronId> scope) {
  if (scope.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "condition scope is empty");
  }
  ConditionReport report;
  report.alpha = -std::numeric_limits<double>::infinity();
  report.growth_c = -std::numeric_limits<double>::infinity();
  bool margins_ok = true;
  for (NeuronId i : scope) {
    NeuronQuantities q = Quantities(model, i);
    report.beta = std::max(report.beta, q.big_lambda);
    report.alpha = std::max(report.alpha, q.alpha);
    report.growth_c = std::max(report.growth_c, q.growth);
    if (q.margin < -1e-12 * q.big_lambda) margins_ok = false;
    report.neurons.push_back(q);
  }
  report.beta_finite = std::isfinite(report.beta);
  constexpr double kTolerance = 1e-12;
  if (report.alpha > 1.0 + kTolerance) {
    report.regime = AlphaRegime::kViolated;
    report.warnings.push_back("alpha > 1: the clan process is not contracting");
  } else if (report.alpha >= 1.0 - kTolerance) {
    report.regime = AlphaRegime::kDegenerate;
    report.warnings.push_back(
        "alpha = 1: tail and expectation bounds on the stopping step degenerate");
  }
  if (const auto* fam = model.family()) {
    report.analytic = AnalyzeFeedforward(*fam);
    if (!report.analytic->holds) margins_ok = false;
  }
  report.passes = margins_ok && report.beta_finite;
  return report;
}

double DeltaF::bound() const {
  if (!contracting()) {
    throw Error(ErrorCode::kAlphaNotContracting,
                "alpha = " + std::to_string(alpha) + " >= 1");
  }
  return delta / (1.0 - alpha);
}

DeltaF ComputeDeltaF(const ModelSpec& model, std::span<const NeuronId> f,
                     std::span<const NeuronId> scope) {
  if (f.empty()) throw Error(ErrorCode::kInvalidArgument, "F is empty");
  std::vector<NeuronId> inside(f.begin(), f.end());
  SortUnique(inside);
  DeltaF result;
  result.alpha = Alpha(model, scope);
  const Threshold k_max = model.max_threshold();
  for (NeuronId i : scope) {
    double outside = 0.0;
    for (Threshold k = 1; k <= k_max; ++k) {
      for (NeuronId j : model.pre(i, k)) {
        if (!std::binary_search(inside.begin(), inside.end(), j)) {
          outside += model.rates(j)[k];
        }
      }
    }
    result.delta = std::max(result.delta, outside / BigLambda(model, i));
  }
  return result;
}

}  // namespace clansim
