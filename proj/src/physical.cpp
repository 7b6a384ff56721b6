#include "grc/physical.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "grc/entropy.hpp"
#include "grc/errors.hpp"

namespace grc {

PhysicalSpace::PhysicalSpace(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  if (labels_.empty()) throw InvariantError("a physical space must be non-empty");
  std::unordered_set<std::string_view> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) {
      throw InvariantError("duplicate physical state label '" + l + "'");
    }
  }
}

const std::string& PhysicalSpace::label(std::size_t i) const {
  if (i >= labels_.size()) throw InvariantError("physical state index out of range");
  return labels_[i];
}

PhysicalSpacePtr make_physical_space(std::vector<std::string> labels) {
  return std::make_shared<const PhysicalSpace>(std::move(labels));
}

PhysicalSpacePtr make_physical_space(std::size_t size) {
  std::vector<std::string> labels;
  labels.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    labels.push_back("s" + std::to_string(i + 1));
  }
  return make_physical_space(std::move(labels));
}

PhysicalDistribution::PhysicalDistribution(PhysicalSpacePtr space,
                                           std::vector<double> probs)
    : space_(std::move(space)), probs_(std::move(probs)) {
  if (!space_) throw InvariantError("distribution requires a physical space");
  if (probs_.size() != space_->size()) {
    throw SpaceMismatchError("probability vector has " +
                             std::to_string(probs_.size()) +
                             " entries for a " + std::to_string(space_->size()) +
                             "-state physical space");
  }
  // Validates non-negativity and the sum.
  shannon_entropy_nats(probs_);
}

double PhysicalDistribution::prob(std::size_t i) const {
  if (i >= probs_.size()) throw InvariantError("physical state index out of range");
  return probs_[i];
}

Partition::Partition(PhysicalSpacePtr space,
                     std::vector<std::vector<std::size_t>> blocks,
                     std::vector<std::string> block_labels)
    : space_(std::move(space)),
      blocks_(std::move(blocks)),
      block_labels_(std::move(block_labels)) {
  if (!space_) throw InvariantError("partition requires a physical space");
  if (blocks_.empty()) throw InvariantError("partition must have at least one block");
  if (block_labels_.size() != blocks_.size()) {
    throw InvariantError("partition needs one label per block");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& l : block_labels_) {
    if (!seen.insert(l).second) {
      throw InvariantError("duplicate block label '" + l + "'");
    }
  }
  const std::size_t n = space_->size();
  block_of_.assign(n, blocks_.size());
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    if (blocks_[j].empty()) {
      throw InvariantError("partition block '" + block_labels_[j] +
                           "' is empty");
    }
    for (std::size_t i : blocks_[j]) {
      if (i >= n) throw InvariantError("partition refers to a state out of range");
      if (block_of_[i] != blocks_.size()) {
        throw InvariantError("partition blocks overlap at state '" +
                             space_->label(i) + "'");
      }
      block_of_[i] = j;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (block_of_[i] == blocks_.size()) {
      throw InvariantError("partition does not cover state '" +
                           space_->label(i) + "'");
    }
  }
}

Partition Partition::with_default_labels(
    PhysicalSpacePtr space, std::vector<std::vector<std::size_t>> blocks) {
  std::vector<std::string> labels;
  labels.reserve(blocks.size());
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    labels.push_back("c" + std::to_string(j + 1));
  }
  return Partition(std::move(space), std::move(blocks), std::move(labels));
}

const std::vector<std::size_t>& Partition::block(std::size_t j) const {
  if (j >= blocks_.size()) throw InvariantError("block index out of range");
  return blocks_[j];
}

std::size_t Partition::block_of(std::size_t i) const {
  if (i >= block_of_.size()) throw InvariantError("physical state index out of range");
  return block_of_[i];
}

StateSpacePtr Partition::computational_space() const {
  return make_space(block_labels_);
}

BijectiveDynamics::BijectiveDynamics(std::vector<std::size_t> perm)
    : perm_(std::move(perm)) {
  if (perm_.empty()) throw InvariantError("dynamics require a non-empty space");
  std::vector<bool> hit(perm_.size(), false);
  for (std::size_t t : perm_) {
    if (t >= perm_.size() || hit[t]) {
      throw InvariantError("dynamics map is not a permutation");
    }
    hit[t] = true;
  }
}

std::size_t BijectiveDynamics::apply(std::size_t i) const {
  if (i >= perm_.size()) throw InvariantError("physical state index out of range");
  return perm_[i];
}

double shannon_entropy(const PhysicalDistribution& p) noexcept {
  return entropy_of_support_nats(p.probs());
}

PhysicalDistribution apply_dynamics(const PhysicalDistribution& p,
                                    const BijectiveDynamics& dyn) {
  if (dyn.size() != p.size()) {
    throw SpaceMismatchError("dynamics act on a space of different size");
  }
  std::vector<double> out(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    out[dyn.apply(i)] = p.prob(i);
  }
  return PhysicalDistribution(p.space(), std::move(out));
}

namespace {

void check_same_space(const PhysicalDistribution& p, const Partition& part) {
  if (p.space() != part.space() && !(*p.space() == *part.space())) {
    throw SpaceMismatchError(
        "distribution and partition live on different physical spaces");
  }
}

}  // namespace

Distribution induce_computational_distribution(const PhysicalDistribution& p,
                                               const Partition& part) {
  check_same_space(p, part);
  std::vector<std::pair<std::size_t, double>> entries;
  for (std::size_t j = 0; j < part.block_count(); ++j) {
    double mass = 0.0;
    for (std::size_t i : part.block(j)) mass += p.prob(i);
    if (mass != 0.0) entries.emplace_back(j, mass);
  }
  return Distribution::from_sparse(part.computational_space(),
                                   std::move(entries));
}

double noncomputational_entropy(const PhysicalDistribution& p,
                                const Partition& part) {
  check_same_space(p, part);
  const Distribution induced = induce_computational_distribution(p, part);
  return shannon_entropy(p) - shannon_entropy(induced);
}

double conditional_entropy(const PhysicalDistribution& p,
                           const Partition& part) {
  check_same_space(p, part);
  double total = 0.0;
  for (std::size_t j = 0; j < part.block_count(); ++j) {
    double mass = 0.0;
    for (std::size_t i : part.block(j)) mass += p.prob(i);
    if (mass <= 0.0) continue;  // empty-weight blocks contribute nothing
    double h = 0.0;
    for (std::size_t i : part.block(j)) {
      const double q = p.prob(i) / mass;
      if (q > 0.0) h -= q * std::log(q);
    }
    total += mass * h;
  }
  return total;
}

}  // namespace grc
