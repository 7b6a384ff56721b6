#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grc/opcore.hpp"
#include "grc/statespace.hpp"

namespace grc {

// A named discrete variable with at least two values.
struct VariableDecl {
  std::string name;
  unsigned arity = 2;
};

// One value per variable of a factorized space.
struct Assignment {
  std::vector<unsigned> values;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

// A state space factored into named variables.  Joint states are numbered
// lexicographically with the first-declared variable most significant.
class FactorizedSpace {
 public:
  explicit FactorizedSpace(std::vector<VariableDecl> vars);

  std::size_t variable_count() const noexcept { return vars_.size(); }
  const VariableDecl& variable(std::size_t k) const;
  const std::vector<VariableDecl>& variables() const noexcept { return vars_; }
  std::optional<std::size_t> variable_index(std::string_view name) const;

  std::size_t joint_size() const noexcept { return joint_size_; }
  std::size_t index_of(const Assignment& a) const;
  Assignment assignment_of(std::size_t index) const;
  // "x=0 y=1" style label of a joint state.
  std::string label_of(std::size_t index) const;

  // The joint StateSpace; carries labels only when small enough to afford
  // them (at most kDenseCap states).
  StateSpacePtr joint_state_space() const;

  friend bool operator==(const FactorizedSpace& a, const FactorizedSpace& b);

 private:
  std::vector<VariableDecl> vars_;
  std::size_t joint_size_ = 1;
};

// A total function from tuples over input variables to an output value,
// stored densely over the input domain.
class TruthTable {
 public:
  TruthTable(std::vector<unsigned> input_arities, unsigned output_arity,
             std::vector<unsigned> values);

  std::size_t input_count() const noexcept { return input_arities_.size(); }
  const std::vector<unsigned>& input_arities() const noexcept {
    return input_arities_;
  }
  unsigned output_arity() const noexcept { return output_arity_; }
  std::size_t domain_size() const noexcept { return values_.size(); }
  const std::vector<unsigned>& values() const noexcept { return values_; }

  unsigned eval(std::span<const unsigned> inputs) const;

  friend bool operator==(const TruthTable&, const TruthTable&) = default;

 private:
  std::vector<unsigned> input_arities_;
  unsigned output_arity_;
  std::vector<unsigned> values_;
};

enum class GateKind {
  RSET,     // x := 1,    assumes x = 0
  RCLR,     // x := 0,    assumes x = 1
  RSETI,    // x := i,    assumes x = j,  i != j
  RCOPY,    // y := x,    assumes y = v
  RUNCOPY,  // y := v,    assumes y = x
  RFUNC,    // z := F(..),assumes z = v
  RUNFUNC,  // z := v,    assumes z = F(..)
  CNOT,     // x := x XOR c,        unconditional
  CCNOT,    // z := z XOR (x AND y),unconditional
};

const char* gate_kind_name(GateKind kind);

// Everything needed to build one gate: the kind, the touched variables in
// order (inputs first, output last where applicable), and the kind's
// parameters.
struct GateSpec {
  GateKind kind;
  std::vector<std::string> operands;
  unsigned set_to = 0;        // i of RSETI
  unsigned assumed_from = 0;  // j of RSETI
  unsigned known_value = 0;   // v of RCOPY / RUNCOPY / RFUNC / RUNFUNC
  std::optional<TruthTable> table;  // RFUNC / RUNFUNC
};

// Builds the gate as a conditioned operation over the *whole* space,
// acting as the identity on untouched variables.  The returned precondition
// is the gate's assumed set; CNOT and CCNOT assume the full space.
ConditionedOperation build_gate(const GateSpec& spec,
                                const FactorizedSpace& space);

// Lifts an operation on a tuple of variables (same factored initial and
// final form) to the joint space, identity elsewhere.  Deterministic
// operations lift at any supported size; stochastic ones only while the
// joint space fits a dense rule.
Operation lift_to_space(const Operation& op,
                        const std::vector<std::string>& operand_names,
                        const FactorizedSpace& space);

// True iff g2 undoes g1: g2's assumed set covers the image of g1's, and
// running g1 then g2 fixes every state g1 assumes.
bool is_reversal_pair(const ConditionedOperation& g1,
                      const ConditionedOperation& g2);

}  // namespace grc
