#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "grc/entropy.hpp"
#include "grc/statespace.hpp"

namespace grc {

inline constexpr std::uint64_t kDefaultEnumerationLimit = 1000000;

// Largest state space for which we will materialize per-state structures
// (index maps, supports).  Dense stochastic rules are further restricted.
inline constexpr std::size_t kSpaceCap = std::size_t{1} << 20;
inline constexpr std::size_t kDenseCap = std::size_t{1} << 12;

// A discrete stochastic operation from an initial to a final state space.
// Two storage forms:
//   - a target map (one final state per initial state) for deterministic
//     operations, which is the only form allowed above kDenseCap;
//   - a dense row-stochastic rule for small stochastic examples.
class Operation {
 public:
  static Operation deterministic(StateSpacePtr initial, StateSpacePtr final_sp,
                                 std::vector<std::size_t> targets);
  static Operation stochastic(StateSpacePtr initial, StateSpacePtr final_sp,
                              std::vector<std::vector<double>> rows);
  static Operation identity(StateSpacePtr space);

  const StateSpacePtr& initial_space() const noexcept { return initial_; }
  const StateSpacePtr& final_space() const noexcept { return final_; }
  std::size_t initial_size() const noexcept { return initial_->size(); }
  std::size_t final_size() const noexcept { return final_->size(); }

  bool has_target_form() const noexcept { return dense_.empty(); }

  // Transition probability from initial state i to final state j.
  double rule(std::size_t i, std::size_t j) const;
  // The unique successor of i.  Requires a deterministic operation.
  std::size_t target(std::size_t i) const;
  // Positive entries of row i, ascending by final state.
  std::vector<std::pair<std::size_t, double>> row_support(std::size_t i) const;

 private:
  Operation(StateSpacePtr initial, StateSpacePtr final_sp,
            std::vector<std::size_t> targets, std::vector<double> dense);

  StateSpacePtr initial_;
  StateSpacePtr final_;
  std::vector<std::size_t> targets_;  // target form
  std::vector<double> dense_;         // row-major rule, stochastic form
};

// An operation applied to a context (initial distribution).
class Computation {
 public:
  Computation(Operation op, Distribution context);

  const Operation& op() const noexcept { return op_; }
  const Distribution& context() const noexcept { return context_; }

 private:
  Operation op_;
  Distribution context_;
};

// A non-empty set of assumed initial states, kept sorted.
class Precondition {
 public:
  Precondition(std::vector<std::size_t> members, std::size_t space_size);
  static Precondition full(std::size_t space_size);

  const std::vector<std::size_t>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool contains(std::size_t state) const;

  friend bool operator==(const Precondition& a, const Precondition& b) {
    return a.members_ == b.members_;
  }

 private:
  std::vector<std::size_t> members_;
};

// An operation together with the precondition under which it is claimed
// reversible.  Construction verifies the claim (deterministic + injective
// on the assumed set).
class ConditionedOperation {
 public:
  ConditionedOperation(Operation op, Precondition assumed);

  const Operation& op() const noexcept { return op_; }
  const Precondition& assumed() const noexcept { return assumed_; }

 private:
  Operation op_;
  Precondition assumed_;
};

// --- classification ---------------------------------------------------

// True iff every row has a single entry within kDeterminismTolerance of 1
// and exact zeros elsewhere.
bool is_deterministic(const Operation& op);

// All (initial, final) pairs with positive transition probability, in
// lexicographic order.
std::vector<std::pair<std::size_t, std::size_t>> transition_relation(
    const Operation& op);

// True iff no final state is reachable from two distinct initial states.
bool is_unconditionally_reversible(const Operation& op);

// Distribution over final states after running the computation.
Distribution push_forward(const Computation& comp);

// Entropy moved out of the computational state: H(context) - H(result),
// nats.  Negative for entropy-creating stochastic operations.
double entropy_ejected(const Computation& comp);

// True iff some context loses computational entropy.  For deterministic
// operations this is exactly "not unconditionally reversible"; stochastic
// operations are not classified here.
bool is_entropy_ejecting(const Operation& op);

// A context that certifies entropy ejection: probability 1/2 on each of the
// lowest-index pair of initial states sharing a final state.  Ejects
// exactly 1 bit.
Distribution witness_context(const Operation& op);

// --- preconditions and reversals --------------------------------------

// Image of the assumed set, sorted, duplicates removed.
std::vector<std::size_t> image_of(const Operation& op, const Precondition& a);

// True iff the operation is injective on the assumed set.
bool is_reversible_under(const Operation& op, const Precondition& a);

// The canonical precondition: for each reachable final state, the
// lowest-index initial state mapping to it.  Its size equals the number of
// reachable final states, which is the maximum possible.
Precondition construct_precondition(const Operation& op);

// Every maximal precondition (one preimage chosen per reachable final
// state), enumerated in lexicographic order of the choices with reachable
// finals ascending.  Throws EnumerationCapError when the exact count
// exceeds `limit`.
std::vector<Precondition> enumerate_maximal_preconditions(
    const Operation& op, std::uint64_t limit = kDefaultEnumerationLimit);

// Exact number of maximal preconditions (product of preimage sizes over
// reachable finals).  Saturates at 2^64-1; `overflowed` reports that.
std::uint64_t count_maximal_preconditions(const Operation& op,
                                          bool* overflowed = nullptr);

// Probability the context satisfies the precondition.
double precondition_probability(const Computation& comp, const Precondition& a);

// The canonical reversal: runs the conditioned operation backwards on the
// image of its assumed set.  Off that image the map extends with the
// identity when initial and final spaces coincide, and with the lowest-
// index initial state otherwise.
ConditionedOperation reversal(const ConditionedOperation& co);

// --- merge entropy -----------------------------------------------------

// Entropy ejected when masses p and q (q outside the assumed set) land on
// the same final state while the rest of the context passes through
// losslessly: p ln(1/p) + q ln(1/q) - (p+q) ln(1/(p+q)), nats.
// Requires p, q > 0 and p + q <= 1.
double merge_entropy_exact(double p, double q);

// Large-ratio approximation of the above with r = p/q:
// (p/r) (1 + ln r), nats.  Requires p in (0,1] and r > 1.
double merge_entropy_asymptotic(double p, double r);

}  // namespace grc
