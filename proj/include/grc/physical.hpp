#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "grc/statespace.hpp"

namespace grc {

// A finite set of detailed physical states.  Deliberately distinct from
// StateSpace: computational states are *sets* of physical states, and the
// type system keeps the two levels apart.
class PhysicalSpace {
 public:
  explicit PhysicalSpace(std::vector<std::string> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& label(std::size_t i) const;
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  friend bool operator==(const PhysicalSpace& a, const PhysicalSpace& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
};

using PhysicalSpacePtr = std::shared_ptr<const PhysicalSpace>;

PhysicalSpacePtr make_physical_space(std::vector<std::string> labels);
// Convenience: states named "s1".."sN".
PhysicalSpacePtr make_physical_space(std::size_t size);

// Dense probability distribution over the physical states.
class PhysicalDistribution {
 public:
  PhysicalDistribution(PhysicalSpacePtr space, std::vector<double> probs);

  const PhysicalSpacePtr& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double prob(std::size_t i) const;
  const std::vector<double>& probs() const noexcept { return probs_; }

 private:
  PhysicalSpacePtr space_;
  std::vector<double> probs_;
};

// A partition of the physical states into named blocks; each block is one
// computational state.  Blocks must be non-empty, disjoint, and jointly
// cover the space.
class Partition {
 public:
  Partition(PhysicalSpacePtr space, std::vector<std::vector<std::size_t>> blocks,
            std::vector<std::string> block_labels);
  // Blocks named "c1".."cM".
  static Partition with_default_labels(
      PhysicalSpacePtr space, std::vector<std::vector<std::size_t>> blocks);

  const PhysicalSpacePtr& space() const noexcept { return space_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  const std::vector<std::size_t>& block(std::size_t j) const;
  const std::vector<std::string>& block_labels() const noexcept {
    return block_labels_;
  }
  // Index of the block containing physical state i.
  std::size_t block_of(std::size_t i) const;

  // The computational state space named by the block labels.
  StateSpacePtr computational_space() const;

 private:
  PhysicalSpacePtr space_;
  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<std::string> block_labels_;
  std::vector<std::size_t> block_of_;
};

// Reversible (permutation) dynamics on a physical space: state i evolves to
// state perm[i].
class BijectiveDynamics {
 public:
  explicit BijectiveDynamics(std::vector<std::size_t> perm);

  std::size_t size() const noexcept { return perm_.size(); }
  std::size_t apply(std::size_t i) const;
  const std::vector<std::size_t>& perm() const noexcept { return perm_; }

 private:
  std::vector<std::size_t> perm_;
};

// Entropy of the physical distribution, nats.
double shannon_entropy(const PhysicalDistribution& p) noexcept;

// One evolution step.  Permutations only: entropy is conserved exactly.
PhysicalDistribution apply_dynamics(const PhysicalDistribution& p,
                                    const BijectiveDynamics& dyn);

// Probability each computational state receives under the partition:
// P(c_j) = sum of p over block j.
Distribution induce_computational_distribution(const PhysicalDistribution& p,
                                               const Partition& part);

// Entropy not visible at the computational level:
// S_nc = S(physical) - H(computational), nats.  Always >= 0 up to rounding.
double noncomputational_entropy(const PhysicalDistribution& p,
                                const Partition& part);

// Expected within-block entropy sum_j P(c_j) * S(p | c_j), nats.  Equals
// noncomputational_entropy by the chain rule; computed independently.
double conditional_entropy(const PhysicalDistribution& p,
                           const Partition& part);

}  // namespace grc
