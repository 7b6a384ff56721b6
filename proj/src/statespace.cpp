#include "grc/statespace.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "grc/entropy.hpp"
#include "grc/errors.hpp"

namespace grc {

StateSpace::StateSpace(std::size_t size) : size_(size) {
  if (size == 0) throw InvariantError("a state space must be non-empty");
}

StateSpace::StateSpace(std::vector<std::string> labels)
    : size_(labels.size()), labels_(std::move(labels)) {
  if (size_ == 0) throw InvariantError("a state space must be non-empty");
  std::unordered_set<std::string_view> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) {
      throw InvariantError("duplicate state label '" + l + "'");
    }
  }
}

const std::string& StateSpace::label(std::size_t i) const {
  if (!labeled()) throw InvariantError("state space has no labels");
  if (i >= size_) throw InvariantError("state index out of range");
  return labels_[i];
}

std::string StateSpace::display_label(std::size_t i) const {
  if (i >= size_) throw InvariantError("state index out of range");
  if (labeled()) return labels_[i];
  return "#" + std::to_string(i);
}

std::optional<std::size_t> StateSpace::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

StateSpacePtr make_space(std::size_t size) {
  return std::make_shared<const StateSpace>(size);
}

StateSpacePtr make_space(std::vector<std::string> labels) {
  return std::make_shared<const StateSpace>(std::move(labels));
}

bool same_space(const StateSpacePtr& a, const StateSpacePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

namespace {

void check_space(const StateSpacePtr& space) {
  if (!space) throw InvariantError("distribution requires a state space");
}

}  // namespace

Distribution::Distribution(StateSpacePtr space, std::span<const double> dense) {
  check_space(space);
  if (dense.size() != space->size()) {
    throw SpaceMismatchError("dense probability vector has " +
                             std::to_string(dense.size()) + " entries for a " +
                             std::to_string(space->size()) + "-state space");
  }
  std::vector<std::pair<std::size_t, double>> entries;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) entries.emplace_back(i, dense[i]);
  }
  *this = Distribution(std::move(space), std::move(entries), 0);
}

Distribution::Distribution(StateSpacePtr space,
                           std::vector<std::pair<std::size_t, double>> entries,
                           int)
    : space_(std::move(space)), entries_(std::move(entries)) {
  double sum = 0.0;
  std::size_t prev = 0;
  bool first = true;
  for (auto& [state, p] : entries_) {
    if (state >= space_->size()) {
      throw InvariantError("probability entry for state out of range");
    }
    if (!first && state <= prev) {
      throw InvariantError("probability entries must be sorted and unique");
    }
    if (p < 0.0) {
      throw InvariantError("probability entry is negative: " +
                           std::to_string(p));
    }
    prev = state;
    first = false;
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
    throw InvariantError("probabilities sum to " + std::to_string(sum) +
                         ", expected 1");
  }
  // Drop exact zeros so the stored support is exact.
  std::erase_if(entries_, [](const auto& e) { return e.second == 0.0; });
}

Distribution Distribution::from_sparse(
    StateSpacePtr space, std::vector<std::pair<std::size_t, double>> entries) {
  check_space(space);
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].first == entries[i - 1].first) {
      throw InvariantError("duplicate probability entry for state index " +
                           std::to_string(entries[i].first));
    }
  }
  return Distribution(std::move(space), std::move(entries), 0);
}

Distribution Distribution::point_mass(StateSpacePtr space, std::size_t state) {
  check_space(space);
  if (state >= space->size()) {
    throw InvariantError("point mass state out of range");
  }
  return Distribution(std::move(space), {{state, 1.0}}, 0);
}

Distribution Distribution::uniform(StateSpacePtr space) {
  check_space(space);
  const std::size_t n = space->size();
  std::vector<std::pair<std::size_t, double>> entries;
  entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    entries.emplace_back(i, 1.0 / static_cast<double>(n));
  }
  return Distribution(std::move(space), std::move(entries), 0);
}

double Distribution::prob(std::size_t state) const {
  if (state >= space_->size()) {
    throw InvariantError("state index out of range");
  }
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), state,
      [](const auto& e, std::size_t s) { return e.first < s; });
  if (it != entries_.end() && it->first == state) return it->second;
  return 0.0;
}

std::vector<std::size_t> Distribution::support() const {
  std::vector<std::size_t> s;
  s.reserve(entries_.size());
  for (const auto& [state, p] : entries_) s.push_back(state);
  return s;
}

std::vector<double> Distribution::to_dense() const {
  std::vector<double> dense(space_->size(), 0.0);
  for (const auto& [state, p] : entries_) dense[state] = p;
  return dense;
}

double shannon_entropy(const Distribution& d) noexcept {
  double h = 0.0;
  for (const auto& [state, p] : d.entries()) h -= p * std::log(p);
  return h;
}

}  // namespace grc
