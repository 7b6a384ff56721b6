#include "grc/opcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "grc/errors.hpp"

namespace grc {

namespace {

void require_space(const StateSpacePtr& sp, const char* which) {
  if (!sp) throw InvariantError(std::string("operation requires a ") + which +
                                " space");
}

}  // namespace

Operation::Operation(StateSpacePtr initial, StateSpacePtr final_sp,
                     std::vector<std::size_t> targets,
                     std::vector<double> dense)
    : initial_(std::move(initial)),
      final_(std::move(final_sp)),
      targets_(std::move(targets)),
      dense_(std::move(dense)) {}

Operation Operation::deterministic(StateSpacePtr initial,
                                   StateSpacePtr final_sp,
                                   std::vector<std::size_t> targets) {
  require_space(initial, "initial");
  require_space(final_sp, "final");
  if (initial->size() > kSpaceCap || final_sp->size() > kSpaceCap) {
    throw SpaceCapError("operation spaces are capped at 2^20 states");
  }
  if (targets.size() != initial->size()) {
    throw SpaceMismatchError("target map has " +
                             std::to_string(targets.size()) +
                             " entries for a " +
                             std::to_string(initial->size()) +
                             "-state initial space");
  }
  for (std::size_t t : targets) {
    if (t >= final_sp->size()) {
      throw InvariantError("target state out of range");
    }
  }
  return Operation(std::move(initial), std::move(final_sp),
                   std::move(targets), {});
}

Operation Operation::stochastic(StateSpacePtr initial, StateSpacePtr final_sp,
                                std::vector<std::vector<double>> rows) {
  require_space(initial, "initial");
  require_space(final_sp, "final");
  const std::size_t m = initial->size();
  const std::size_t n = final_sp->size();
  if (m > kDenseCap || n > kDenseCap) {
    throw SpaceCapError("dense stochastic rules are capped at 2^12 states");
  }
  if (rows.size() != m) {
    throw SpaceMismatchError("rule has " + std::to_string(rows.size()) +
                             " rows for a " + std::to_string(m) +
                             "-state initial space");
  }
  std::vector<double> dense;
  dense.reserve(m * n);
  for (const auto& row : rows) {
    if (row.size() != n) {
      throw SpaceMismatchError("rule row has " + std::to_string(row.size()) +
                               " columns for a " + std::to_string(n) +
                               "-state final space");
    }
    double sum = 0.0;
    for (double p : row) {
      if (p < 0.0) throw InvariantError("rule entry is negative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
      throw InvariantError("rule row sums to " + std::to_string(sum) +
                           ", expected 1");
    }
    dense.insert(dense.end(), row.begin(), row.end());
  }
  return Operation(std::move(initial), std::move(final_sp), {},
                   std::move(dense));
}

Operation Operation::identity(StateSpacePtr space) {
  require_space(space, "state");
  std::vector<std::size_t> targets(space->size());
  for (std::size_t i = 0; i < targets.size(); ++i) targets[i] = i;
  return deterministic(space, space, std::move(targets));
}

double Operation::rule(std::size_t i, std::size_t j) const {
  if (i >= initial_size() || j >= final_size()) {
    throw InvariantError("state index out of range");
  }
  if (has_target_form()) return targets_[i] == j ? 1.0 : 0.0;
  return dense_[i * final_size() + j];
}

std::size_t Operation::target(std::size_t i) const {
  if (i >= initial_size()) throw InvariantError("state index out of range");
  if (has_target_form()) return targets_[i];
  // Dense storage: the row must still be deterministic.
  const std::size_t n = final_size();
  std::size_t hit = n;
  for (std::size_t j = 0; j < n; ++j) {
    const double p = dense_[i * n + j];
    if (p == 0.0) continue;
    if (std::abs(p - 1.0) <= kDeterminismTolerance && hit == n) {
      hit = j;
    } else {
      throw NondeterministicError(
          "operation has no unique successor for state " + std::to_string(i));
    }
  }
  if (hit == n) {
    throw NondeterministicError("operation row " + std::to_string(i) +
                                " has no successor");
  }
  return hit;
}

std::vector<std::pair<std::size_t, double>> Operation::row_support(
    std::size_t i) const {
  if (i >= initial_size()) throw InvariantError("state index out of range");
  std::vector<std::pair<std::size_t, double>> out;
  if (has_target_form()) {
    out.emplace_back(targets_[i], 1.0);
    return out;
  }
  const std::size_t n = final_size();
  for (std::size_t j = 0; j < n; ++j) {
    const double p = dense_[i * n + j];
    if (p > 0.0) out.emplace_back(j, p);
  }
  return out;
}

Computation::Computation(Operation op, Distribution context)
    : op_(std::move(op)), context_(std::move(context)) {
  if (!same_space(op_.initial_space(), context_.space())) {
    throw SpaceMismatchError(
        "context is not over the operation's initial space");
  }
}

Precondition::Precondition(std::vector<std::size_t> members,
                           std::size_t space_size)
    : members_(std::move(members)) {
  if (members_.empty()) {
    throw InvariantError("a precondition must assume at least one state");
  }
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()),
                 members_.end());
  if (members_.back() >= space_size) {
    throw InvariantError("precondition member out of range");
  }
}

Precondition Precondition::full(std::size_t space_size) {
  std::vector<std::size_t> all(space_size);
  for (std::size_t i = 0; i < space_size; ++i) all[i] = i;
  return Precondition(std::move(all), space_size);
}

bool Precondition::contains(std::size_t state) const {
  return std::binary_search(members_.begin(), members_.end(), state);
}

ConditionedOperation::ConditionedOperation(Operation op, Precondition assumed)
    : op_(std::move(op)), assumed_(std::move(assumed)) {
  if (assumed_.members().back() >= op_.initial_size()) {
    throw SpaceMismatchError("assumed set refers to states outside the space");
  }
  if (!is_deterministic(op_)) {
    throw NondeterministicError(
        "a conditioned operation must be deterministic");
  }
  if (!is_reversible_under(op_, assumed_)) {
    throw InvariantError(
        "operation is not injective on its assumed set: the claimed "
        "precondition does not make it reversible");
  }
}

bool is_deterministic(const Operation& op) {
  if (op.has_target_form()) return true;
  const std::size_t m = op.initial_size();
  const std::size_t n = op.final_size();
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t ones = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double p = op.rule(i, j);
      if (p == 0.0) continue;
      if (std::abs(p - 1.0) <= kDeterminismTolerance) {
        ++ones;
      } else {
        return false;
      }
    }
    if (ones != 1) return false;
  }
  return true;
}

std::vector<std::pair<std::size_t, std::size_t>> transition_relation(
    const Operation& op) {
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (std::size_t i = 0; i < op.initial_size(); ++i) {
    for (const auto& [j, p] : op.row_support(i)) rel.emplace_back(i, j);
  }
  return rel;
}

bool is_unconditionally_reversible(const Operation& op) {
  std::vector<bool> hit(op.final_size(), false);
  for (std::size_t i = 0; i < op.initial_size(); ++i) {
    for (const auto& [j, p] : op.row_support(i)) {
      if (hit[j]) return false;
      hit[j] = true;
    }
  }
  return true;
}

Distribution push_forward(const Computation& comp) {
  const Operation& op = comp.op();
  std::vector<std::pair<std::size_t, double>> acc;
  for (const auto& [i, pi] : comp.context().entries()) {
    for (const auto& [j, r] : op.row_support(i)) {
      acc.emplace_back(j, pi * r);
    }
  }
  std::sort(acc.begin(), acc.end());
  std::vector<std::pair<std::size_t, double>> merged;
  for (const auto& [j, p] : acc) {
    if (!merged.empty() && merged.back().first == j) {
      merged.back().second += p;
    } else {
      merged.emplace_back(j, p);
    }
  }
  return Distribution::from_sparse(op.final_space(), std::move(merged));
}

double entropy_ejected(const Computation& comp) {
  return shannon_entropy(comp.context()) - shannon_entropy(push_forward(comp));
}

bool is_entropy_ejecting(const Operation& op) {
  if (!is_deterministic(op)) {
    throw NondeterministicError(
        "entropy-ejection classification is defined for deterministic "
        "operations only");
  }
  return !is_unconditionally_reversible(op);
}

Distribution witness_context(const Operation& op) {
  if (!is_deterministic(op)) {
    throw NondeterministicError(
        "witness contexts are defined for deterministic operations only");
  }
  // Lowest-index pair of initial states sharing a final state.  With the
  // context (1/2, 1/2) on such a pair the whole bit of input entropy leaves
  // the computational state.
  std::vector<std::size_t> first_hit(op.final_size(),
                                     std::numeric_limits<std::size_t>::max());
  std::size_t best_i = std::numeric_limits<std::size_t>::max();
  std::size_t best_k = 0;
  for (std::size_t i = 0; i < op.initial_size(); ++i) {
    const std::size_t j = op.target(i);
    if (first_hit[j] == std::numeric_limits<std::size_t>::max()) {
      first_hit[j] = i;
    } else if (first_hit[j] < best_i ||
               (first_hit[j] == best_i && i < best_k)) {
      best_i = first_hit[j];
      best_k = i;
    }
  }
  if (best_i == std::numeric_limits<std::size_t>::max()) {
    throw NoWitnessError(
        "operation merges no states; every context passes through "
        "losslessly");
  }
  return Distribution::from_sparse(op.initial_space(),
                                   {{best_i, 0.5}, {best_k, 0.5}});
}

std::vector<std::size_t> image_of(const Operation& op, const Precondition& a) {
  if (a.members().back() >= op.initial_size()) {
    throw SpaceMismatchError("assumed set refers to states outside the space");
  }
  if (!is_deterministic(op)) {
    throw NondeterministicError(
        "images of assumed sets are defined for deterministic operations "
        "only");
  }
  std::vector<std::size_t> img;
  img.reserve(a.size());
  for (std::size_t i : a.members()) img.push_back(op.target(i));
  std::sort(img.begin(), img.end());
  img.erase(std::unique(img.begin(), img.end()), img.end());
  return img;
}

bool is_reversible_under(const Operation& op, const Precondition& a) {
  return image_of(op, a).size() == a.size();
}

namespace {

// Preimage lists of each reachable final state, finals ascending, preimages
// ascending.
std::vector<std::pair<std::size_t, std::vector<std::size_t>>> preimages(
    const Operation& op) {
  if (!is_deterministic(op)) {
    throw NondeterministicError(
        "preconditions are constructed for deterministic operations only");
  }
  std::vector<std::vector<std::size_t>> by_final(op.final_size());
  for (std::size_t i = 0; i < op.initial_size(); ++i) {
    by_final[op.target(i)].push_back(i);
  }
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> out;
  for (std::size_t j = 0; j < by_final.size(); ++j) {
    if (!by_final[j].empty()) out.emplace_back(j, std::move(by_final[j]));
  }
  return out;
}

}  // namespace

Precondition construct_precondition(const Operation& op) {
  std::vector<std::size_t> members;
  for (const auto& [j, pre] : preimages(op)) members.push_back(pre.front());
  return Precondition(std::move(members), op.initial_size());
}

std::uint64_t count_maximal_preconditions(const Operation& op,
                                          bool* overflowed) {
  if (overflowed) *overflowed = false;
  std::uint64_t count = 1;
  for (const auto& [j, pre] : preimages(op)) {
    const std::uint64_t k = pre.size();
    if (count > std::numeric_limits<std::uint64_t>::max() / k) {
      if (overflowed) *overflowed = true;
      return std::numeric_limits<std::uint64_t>::max();
    }
    count *= k;
  }
  return count;
}

std::vector<Precondition> enumerate_maximal_preconditions(const Operation& op,
                                                          std::uint64_t limit) {
  const auto pre = preimages(op);
  bool overflowed = false;
  const std::uint64_t count = count_maximal_preconditions(op, &overflowed);
  if (overflowed || count > limit) {
    throw EnumerationCapError(
        "operation admits " +
            (overflowed ? std::string("more than 18446744073709551615")
                        : std::to_string(count)) +
            " maximal preconditions, beyond the cap of " +
            std::to_string(limit),
        count, overflowed);
  }
  std::vector<Precondition> out;
  out.reserve(count);
  std::vector<std::size_t> choice(pre.size(), 0);
  for (std::uint64_t c = 0; c < count; ++c) {
    std::vector<std::size_t> members;
    members.reserve(pre.size());
    for (std::size_t k = 0; k < pre.size(); ++k) {
      members.push_back(pre[k].second[choice[k]]);
    }
    out.emplace_back(std::move(members), op.initial_size());
    // Advance the choice vector lexicographically, last final fastest.
    for (std::size_t k = pre.size(); k-- > 0;) {
      if (++choice[k] < pre[k].second.size()) break;
      choice[k] = 0;
    }
  }
  return out;
}

double precondition_probability(const Computation& comp,
                                const Precondition& a) {
  if (a.members().back() >= comp.op().initial_size()) {
    throw SpaceMismatchError("assumed set refers to states outside the space");
  }
  double mass = 0.0;
  for (const auto& [i, p] : comp.context().entries()) {
    if (a.contains(i)) mass += p;
  }
  return mass;
}

ConditionedOperation reversal(const ConditionedOperation& co) {
  const Operation& op = co.op();
  const std::size_t n = op.final_size();
  const bool same = same_space(op.initial_space(), op.final_space());

  std::vector<std::size_t> back(n);
  for (std::size_t j = 0; j < n; ++j) {
    // Default extension off the image: identity when the spaces coincide,
    // lowest-index initial state otherwise.  Either way the extension is
    // irrelevant on the assumed set of the reversal.
    back[j] = same ? j : 0;
  }
  std::vector<std::size_t> image;
  image.reserve(co.assumed().size());
  for (std::size_t a : co.assumed().members()) {
    const std::size_t j = op.target(a);
    back[j] = a;
    image.push_back(j);
  }
  Operation rev = Operation::deterministic(op.final_space(),
                                           op.initial_space(), std::move(back));
  return ConditionedOperation(std::move(rev),
                              Precondition(std::move(image), n));
}

double merge_entropy_exact(double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) {
    throw DomainError("merge entropy requires p, q > 0");
  }
  if (p + q > 1.0 + kDeterminismTolerance) {
    throw DomainError("merge entropy requires p + q <= 1, got " +
                      std::to_string(p + q));
  }
  const double s = p + q;
  return -p * std::log(p) - q * std::log(q) + s * std::log(s);
}

double merge_entropy_asymptotic(double p, double r) {
  if (!(p > 0.0) || p > 1.0) {
    throw DomainError("merge entropy requires p in (0, 1]");
  }
  if (!(r > 1.0)) {
    throw DomainError("the asymptotic form requires a ratio r > 1");
  }
  return (p / r) * (1.0 + std::log(r));
}

}  // namespace grc
