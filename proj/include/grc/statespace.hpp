#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace grc {

// A finite set of computational states.  Labels are optional: spaces large
// enough that materializing labels would be wasteful stay unlabeled and are
// identified by size alone.
class StateSpace {
 public:
  explicit StateSpace(std::size_t size);
  explicit StateSpace(std::vector<std::string> labels);

  std::size_t size() const noexcept { return size_; }
  bool labeled() const noexcept { return !labels_.empty(); }

  // Requires labeled().
  const std::string& label(std::size_t i) const;
  // Label when present, "#i" otherwise.
  std::string display_label(std::size_t i) const;
  std::optional<std::size_t> index_of(std::string_view label) const;

  friend bool operator==(const StateSpace& a, const StateSpace& b) {
    return a.size_ == b.size_ && a.labels_ == b.labels_;
  }

 private:
  std::size_t size_;
  std::vector<std::string> labels_;
};

using StateSpacePtr = std::shared_ptr<const StateSpace>;

StateSpacePtr make_space(std::size_t size);
StateSpacePtr make_space(std::vector<std::string> labels);

// True when the two pointers denote the same space (pointer or structural
// equality).
bool same_space(const StateSpacePtr& a, const StateSpacePtr& b);

// A probability distribution over a StateSpace, stored sparsely: only
// strictly positive entries are kept, so the support is exact by
// construction and never depends on an epsilon.  Entries are sorted by
// state index.  The total must be within kProbabilitySumTolerance of 1.
class Distribution {
 public:
  Distribution(StateSpacePtr space, std::span<const double> dense);

  static Distribution from_sparse(
      StateSpacePtr space, std::vector<std::pair<std::size_t, double>> entries);
  static Distribution point_mass(StateSpacePtr space, std::size_t state);
  static Distribution uniform(StateSpacePtr space);

  const StateSpacePtr& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return space_->size(); }

  // Probability of a state; exact 0.0 for states outside the support.
  double prob(std::size_t state) const;
  const std::vector<std::pair<std::size_t, double>>& entries() const noexcept {
    return entries_;
  }
  std::vector<std::size_t> support() const;
  std::vector<double> to_dense() const;

  friend bool operator==(const Distribution& a, const Distribution& b) {
    return same_space(a.space_, b.space_) && a.entries_ == b.entries_;
  }

 private:
  Distribution(StateSpacePtr space,
               std::vector<std::pair<std::size_t, double>> entries, int);

  StateSpacePtr space_;
  std::vector<std::pair<std::size_t, double>> entries_;
};

// Entropy of the distribution in nats.
double shannon_entropy(const Distribution& d) noexcept;

}  // namespace grc
