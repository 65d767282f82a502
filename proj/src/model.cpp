// Copyright 2025 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "adsub/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

namespace adsub {

namespace {
constexpr double kProbSumTol = 1e-9;
}  // namespace

// ---------------------------------------------------------------------------
// PartialRealization / free predicates (declared in types.hpp)
// ---------------------------------------------------------------------------

PartialRealization PartialRealization::from_pairs(
    std::vector<std::pair<ItemId, StateId>> obs) {
  std::sort(obs.begin(), obs.end());
  PartialRealization psi;
  for (const auto& [e, o] : obs) {
    if (psi.domain_.contains(e)) {
      fail(ErrorCode::kValidation,
           "duplicate item in partial realization: " + std::to_string(e));
    }
    psi.domain_ = psi.domain_.with(e);
  }
  psi.obs_ = std::move(obs);
  return psi;
}

StateId PartialRealization::state_of(ItemId e) const {
  for (const auto& [item, state] : obs_) {
    if (item == e) return state;
  }
  fail(ErrorCode::kValidation,
       "item not observed: " + std::to_string(e));
}

PartialRealization PartialRealization::with(ItemId e, StateId o) const {
  if (domain_.contains(e)) {
    fail(ErrorCode::kAlreadyObserved,
         "item already observed: " + std::to_string(e));
  }
  PartialRealization out = *this;
  auto it = std::lower_bound(out.obs_.begin(), out.obs_.end(),
                             std::make_pair(e, o));
  out.obs_.insert(it, {e, o});
  out.domain_ = out.domain_.with(e);
  return out;
}

PartialRealization PartialRealization::restricted_to(ItemSet d) const {
  PartialRealization out;
  for (const auto& [e, o] : obs_) {
    if (d.contains(e)) {
      out.obs_.emplace_back(e, o);
      out.domain_ = out.domain_.with(e);
    }
  }
  return out;
}

PartialRealization PartialRealization::merged_with(
    const PartialRealization& other) const {
  PartialRealization out = *this;
  for (const auto& [e, o] : other.obs_) {
    if (out.contains(e)) {
      if (out.state_of(e) != o) {
        fail(ErrorCode::kValidation, "merging disagreeing observations");
      }
      continue;
    }
    out = out.with(e, o);
  }
  return out;
}

std::vector<std::uint32_t> PartialRealization::packed() const {
  std::vector<std::uint32_t> key;
  key.reserve(obs_.size());
  for (const auto& [e, o] : obs_) {
    key.push_back((static_cast<std::uint32_t>(e) << 16) |
                  static_cast<std::uint32_t>(o));
  }
  return key;
}

bool consistent(const Realization& phi, const PartialRealization& psi) {
  for (const auto& [e, o] : psi.observations()) {
    if (phi.at(e) != o) return false;
  }
  return true;
}

bool subrealization(const PartialRealization& a, const PartialRealization& b) {
  if (!a.domain().subset_of(b.domain())) return false;
  for (const auto& [e, o] : a.observations()) {
    if (b.state_of(e) != o) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// TableUtility
// ---------------------------------------------------------------------------

TableUtility::TableUtility(std::map<std::uint64_t, std::vector<double>> rows,
                           int support_size, bool claims_minimal_dependency)
    : rows_(std::move(rows)),
      support_size_(support_size),
      claims_md_(claims_minimal_dependency) {
  for (const auto& [mask, values] : rows_) {
    if (static_cast<int>(values.size()) != support_size_) {
      fail(ErrorCode::kValidation,
           "table row has wrong number of values for set mask " +
               std::to_string(mask));
    }
    for (double v : values) {
      if (v < 0) {
        fail(ErrorCode::kValidation, "table utility value is negative");
      }
    }
  }
}

double TableUtility::value(ItemSet items, const Realization& /*phi*/,
                           int support_index) const {
  if (support_index < 0 || support_index >= support_size_) {
    fail(ErrorCode::kUnknownTableEntry,
         "table utility queried outside the prior support");
  }
  auto it = rows_.find(items.mask());
  if (it == rows_.end()) {
    fail(ErrorCode::kUnknownTableEntry,
         "table utility has no row for set mask " +
             std::to_string(items.mask()));
  }
  return it->second[static_cast<std::size_t>(support_index)];
}

nlohmann::json TableUtility::descriptor_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [mask, values] : rows_) {
    rows.push_back({{"set", ItemSet(mask).items()}, {"values", values}});
  }
  return {{"type", "table"},
          {"claims_minimal_dependency", claims_md_},
          {"rows", rows}};
}

// ---------------------------------------------------------------------------
// Instance
// ---------------------------------------------------------------------------

struct Instance::CacheState {
  struct VecHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const {
      // FNV-1a over the words.
      std::uint64_t h = 1469598103934665603ULL;
      for (std::uint32_t w : v) {
        h ^= w;
        h *= 1099511628211ULL;
      }
      return static_cast<std::size_t>(h);
    }
  };

  std::mutex f_mu;
  std::unordered_map<std::uint64_t, std::vector<double>> f_memo;

  std::mutex node_mu;
  std::unordered_map<std::vector<std::uint32_t>, std::unique_ptr<NodeData>,
                     VecHash>
      node_cache;

  std::mutex marginal_mu;
  std::unordered_map<std::vector<std::uint32_t>, MarginalPair, VecHash>
      marginal_cache;
};

Instance::Instance(Instance&&) noexcept = default;
Instance& Instance::operator=(Instance&&) noexcept = default;
Instance::~Instance() = default;

Instance::Instance(int num_states, std::vector<WeightedRealization> support,
                   std::shared_ptr<const UtilityModel> utility)
    : num_states_(num_states),
      support_(std::move(support)),
      utility_(std::move(utility)),
      caches_(std::make_unique<CacheState>()) {
  if (support_.empty()) {
    fail(ErrorCode::kValidation, "prior support is empty");
  }
  if (num_states_ < 1) {
    fail(ErrorCode::kValidation, "state alphabet is empty");
  }
  if (!utility_) {
    fail(ErrorCode::kValidation, "missing utility model");
  }
  num_items_ = support_.front().realization.num_items();
  if (num_items_ < 1) {
    fail(ErrorCode::kValidation, "ground set is empty");
  }
  if (num_items_ > kMaxItems) {
    fail(ErrorCode::kGroundSetTooLarge,
         "ground set exceeds " + std::to_string(kMaxItems) + " items");
  }
  double total = 0;
  for (const auto& wr : support_) {
    if (wr.realization.num_items() != num_items_) {
      fail(ErrorCode::kValidation, "realizations have differing lengths");
    }
    if (!(wr.prob > 0)) {
      fail(ErrorCode::kValidation, "prior probabilities must be positive");
    }
    for (StateId o : wr.realization.states) {
      if (o < 0 || o >= num_states_) {
        fail(ErrorCode::kValidation, "realization state outside alphabet");
      }
    }
    total += wr.prob;
  }
  if (std::abs(total - 1.0) > kProbSumTol) {
    fail(ErrorCode::kValidation, "prior probabilities sum to " +
                                     std::to_string(total) + ", expected 1");
  }
  for (std::size_t i = 0; i < support_.size(); ++i) {
    for (std::size_t j = i + 1; j < support_.size(); ++j) {
      if (support_[i].realization == support_[j].realization) {
        fail(ErrorCode::kValidation, "duplicate realization in prior support");
      }
    }
  }
}

double Instance::f(ItemSet items, int support_index) const {
  {
    std::lock_guard<std::mutex> lock(caches_->f_mu);
    auto it = caches_->f_memo.find(items.mask());
    if (it != caches_->f_memo.end()) {
      double v = it->second[static_cast<std::size_t>(support_index)];
      if (!std::isnan(v)) return v;
    }
  }
  const auto& wr = support_[static_cast<std::size_t>(support_index)];
  double v = utility_->value(items, wr.realization, support_index);
  {
    std::lock_guard<std::mutex> lock(caches_->f_mu);
    auto [it, inserted] = caches_->f_memo.try_emplace(
        items.mask(),
        std::vector<double>(support_.size(),
                            std::numeric_limits<double>::quiet_NaN()));
    it->second[static_cast<std::size_t>(support_index)] = v;
  }
  return v;
}

double Instance::f(ItemSet items, const Realization& phi) const {
  return utility_->value(items, phi, -1);
}

std::vector<int> Instance::consistent_support(
    const PartialRealization& psi) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (consistent(support_[i].realization, psi)) {
      out.push_back(static_cast<int>(i));
    }
  }
  return out;
}

const Instance::NodeData& Instance::node(const PartialRealization& psi) const {
  const auto key = psi.packed();
  {
    std::lock_guard<std::mutex> lock(caches_->node_mu);
    auto it = caches_->node_cache.find(key);
    if (it != caches_->node_cache.end()) return *it->second;
  }
  auto data = std::make_unique<NodeData>();
  data->consistent = consistent_support(psi);
  if (data->consistent.empty()) {
    fail(ErrorCode::kInconsistentObservation,
         "no support realization is consistent with the observation");
  }
  for (int i : data->consistent) {
    data->mass += support_[static_cast<std::size_t>(i)].prob;
  }
  data->base = conditional_value(psi.domain(), data->consistent, true);
  std::lock_guard<std::mutex> lock(caches_->node_mu);
  auto [it, inserted] = caches_->node_cache.try_emplace(key, std::move(data));
  return *it->second;
}

std::vector<Instance::StateGroup> Instance::group_by_state(
    ItemId e, std::span<const int> consistent) const {
  std::map<StateId, StateGroup> groups;
  for (int i : consistent) {
    StateId o = support_[static_cast<std::size_t>(i)].realization.at(e);
    auto& g = groups[o];
    g.state = o;
    g.support.push_back(i);
    g.mass += support_[static_cast<std::size_t>(i)].prob;
  }
  std::vector<StateGroup> out;
  out.reserve(groups.size());
  for (auto& [o, g] : groups) out.push_back(std::move(g));
  return out;
}

double Instance::conditional_value(ItemSet items,
                                   std::span<const int> consistent,
                                   bool s_is_observed_domain) const {
  if (consistent.empty()) {
    fail(ErrorCode::kInconsistentObservation,
         "conditional value over an empty support subset");
  }
  if (s_is_observed_domain && utility_->claims_minimal_dependency()) {
    return f(items, consistent.front());
  }
  double weighted = 0;
  double mass = 0;
  for (int i : consistent) {
    const double p = support_[static_cast<std::size_t>(i)].prob;
    weighted += p * f(items, i);
    mass += p;
  }
  return weighted / mass;
}

std::vector<std::pair<int, double>> Instance::conditional_distribution(
    const PartialRealization& psi) const {
  const NodeData& nd = node(psi);
  std::vector<std::pair<int, double>> out;
  out.reserve(nd.consistent.size());
  for (int i : nd.consistent) {
    out.emplace_back(i, support_[static_cast<std::size_t>(i)].prob / nd.mass);
  }
  return out;
}

std::vector<StateId> Instance::possible_states(
    ItemId e, const PartialRealization& psi) const {
  if (psi.contains(e)) {
    fail(ErrorCode::kAlreadyObserved,
         "possible_states of an already observed item");
  }
  const NodeData& nd = node(psi);
  std::vector<StateId> out;
  for (const auto& g : group_by_state(e, nd.consistent)) {
    out.push_back(g.state);
  }
  return out;
}

double Instance::f_on_partial(ItemSet items,
                              const PartialRealization& psi) const {
  const NodeData& nd = node(psi);
  return conditional_value(items, nd.consistent,
                           items.subset_of(psi.domain()));
}

Instance::MarginalPair Instance::marginals(
    ItemId e, const PartialRealization& psi) const {
  if (psi.contains(e)) {
    fail(ErrorCode::kAlreadyObserved,
         "marginal of an already observed item");
  }
  auto key = psi.packed();
  key.push_back(0x80000000u | static_cast<std::uint32_t>(e));
  {
    std::lock_guard<std::mutex> lock(caches_->marginal_mu);
    auto it = caches_->marginal_cache.find(key);
    if (it != caches_->marginal_cache.end()) return it->second;
  }
  const NodeData& nd = node(psi);
  const ItemSet extended = psi.domain().with(e);
  MarginalPair mp;
  mp.wc = std::numeric_limits<double>::infinity();
  double expected = 0;
  for (const auto& g : group_by_state(e, nd.consistent)) {
    const double v = conditional_value(extended, g.support, true);
    mp.wc = std::min(mp.wc, v - nd.base);
    expected += (g.mass / nd.mass) * v;
  }
  mp.avg = expected - nd.base;
  std::lock_guard<std::mutex> lock(caches_->marginal_mu);
  auto [it, inserted] = caches_->marginal_cache.try_emplace(std::move(key), mp);
  return it->second;
}

double Instance::avg_marginal(ItemId e, const PartialRealization& psi) const {
  return marginals(e, psi).avg;
}

double Instance::wc_marginal(ItemId e, const PartialRealization& psi) const {
  return marginals(e, psi).wc;
}

}  // namespace adsub
