#include "grc/gates.hpp"

#include <algorithm>
#include <unordered_set>

#include "grc/errors.hpp"

namespace grc {

FactorizedSpace::FactorizedSpace(std::vector<VariableDecl> vars)
    : vars_(std::move(vars)) {
  if (vars_.empty()) {
    throw InvariantError("a factorized space needs at least one variable");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& v : vars_) {
    if (v.arity < 2) {
      throw InvariantError("variable '" + v.name +
                           "' must have at least two values");
    }
    if (!seen.insert(v.name).second) {
      throw InvariantError("duplicate variable '" + v.name + "'");
    }
  }
  for (const auto& v : vars_) {
    if (joint_size_ > kSpaceCap / v.arity) {
      throw SpaceCapError("joint space exceeds the 2^20-state cap");
    }
    joint_size_ *= v.arity;
  }
}

const VariableDecl& FactorizedSpace::variable(std::size_t k) const {
  if (k >= vars_.size()) throw InvariantError("variable index out of range");
  return vars_[k];
}

std::optional<std::size_t> FactorizedSpace::variable_index(
    std::string_view name) const {
  for (std::size_t k = 0; k < vars_.size(); ++k) {
    if (vars_[k].name == name) return k;
  }
  return std::nullopt;
}

std::size_t FactorizedSpace::index_of(const Assignment& a) const {
  if (a.values.size() != vars_.size()) {
    throw SpaceMismatchError("assignment has " +
                             std::to_string(a.values.size()) +
                             " values for " + std::to_string(vars_.size()) +
                             " variables");
  }
  std::size_t idx = 0;
  for (std::size_t k = 0; k < vars_.size(); ++k) {
    if (a.values[k] >= vars_[k].arity) {
      throw InvariantError("value out of range for variable '" +
                           vars_[k].name + "'");
    }
    idx = idx * vars_[k].arity + a.values[k];
  }
  return idx;
}

Assignment FactorizedSpace::assignment_of(std::size_t index) const {
  if (index >= joint_size_) throw InvariantError("joint state out of range");
  Assignment a;
  a.values.assign(vars_.size(), 0);
  for (std::size_t k = vars_.size(); k-- > 0;) {
    a.values[k] = static_cast<unsigned>(index % vars_[k].arity);
    index /= vars_[k].arity;
  }
  return a;
}

std::string FactorizedSpace::label_of(std::size_t index) const {
  const Assignment a = assignment_of(index);
  std::string out;
  for (std::size_t k = 0; k < vars_.size(); ++k) {
    if (k) out += ' ';
    out += vars_[k].name;
    out += '=';
    out += std::to_string(a.values[k]);
  }
  return out;
}

StateSpacePtr FactorizedSpace::joint_state_space() const {
  if (joint_size_ > kDenseCap) return make_space(joint_size_);
  std::vector<std::string> labels;
  labels.reserve(joint_size_);
  for (std::size_t i = 0; i < joint_size_; ++i) labels.push_back(label_of(i));
  return make_space(std::move(labels));
}

bool operator==(const FactorizedSpace& a, const FactorizedSpace& b) {
  if (a.vars_.size() != b.vars_.size()) return false;
  for (std::size_t k = 0; k < a.vars_.size(); ++k) {
    if (a.vars_[k].name != b.vars_[k].name ||
        a.vars_[k].arity != b.vars_[k].arity) {
      return false;
    }
  }
  return true;
}

TruthTable::TruthTable(std::vector<unsigned> input_arities,
                       unsigned output_arity, std::vector<unsigned> values)
    : input_arities_(std::move(input_arities)),
      output_arity_(output_arity),
      values_(std::move(values)) {
  if (input_arities_.empty()) {
    throw InvariantError("a truth table needs at least one input");
  }
  if (output_arity_ < 2) {
    throw InvariantError("a truth table output needs at least two values");
  }
  std::size_t domain = 1;
  for (unsigned ar : input_arities_) {
    if (ar < 2) throw InvariantError("truth table inputs need at least two values");
    if (domain > kSpaceCap / ar) {
      throw SpaceCapError("truth table domain exceeds the 2^20-state cap");
    }
    domain *= ar;
  }
  if (values_.size() != domain) {
    throw InvariantError("truth table must be total: expected " +
                         std::to_string(domain) + " rows, got " +
                         std::to_string(values_.size()));
  }
  for (unsigned v : values_) {
    if (v >= output_arity_) {
      throw InvariantError("truth table value out of range");
    }
  }
}

unsigned TruthTable::eval(std::span<const unsigned> inputs) const {
  if (inputs.size() != input_arities_.size()) {
    throw SpaceMismatchError("truth table arity mismatch");
  }
  std::size_t idx = 0;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    if (inputs[k] >= input_arities_[k]) {
      throw InvariantError("truth table input out of range");
    }
    idx = idx * input_arities_[k] + inputs[k];
  }
  return values_[idx];
}

const char* gate_kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::RSET: return "rSET";
    case GateKind::RCLR: return "rCLR";
    case GateKind::RSETI: return "rSETi";
    case GateKind::RCOPY: return "rCOPY";
    case GateKind::RUNCOPY: return "rUnCOPY";
    case GateKind::RFUNC: return "rFUNC";
    case GateKind::RUNFUNC: return "rUnFUNC";
    case GateKind::CNOT: return "cNOT";
    case GateKind::CCNOT: return "ccNOT";
  }
  return "?";
}

namespace {

struct ResolvedOperands {
  std::vector<std::size_t> var_index;  // position in the space
  std::vector<unsigned> arity;
};

ResolvedOperands resolve_operands(const GateSpec& spec,
                                  const FactorizedSpace& space) {
  ResolvedOperands out;
  std::unordered_set<std::string_view> seen;
  for (const auto& name : spec.operands) {
    auto k = space.variable_index(name);
    if (!k) {
      throw InvariantError("gate operand '" + name +
                           "' is not a variable of the space");
    }
    if (!seen.insert(name).second) {
      throw InvariantError("gate operand '" + name + "' appears twice");
    }
    out.var_index.push_back(*k);
    out.arity.push_back(space.variable(*k).arity);
  }
  return out;
}

void require_operand_count(const GateSpec& spec, std::size_t count) {
  if (spec.operands.size() != count) {
    throw InvariantError(std::string(gate_kind_name(spec.kind)) + " takes " +
                         std::to_string(count) + " operands, got " +
                         std::to_string(spec.operands.size()));
  }
}

void require_binary(const ResolvedOperands& ops, const GateSpec& spec) {
  for (unsigned ar : ops.arity) {
    if (ar != 2) {
      throw InvariantError(std::string(gate_kind_name(spec.kind)) +
                           " operates on binary variables");
    }
  }
}

// Sub-space enumeration over the operand tuple, first operand most
// significant (mirrors the joint convention).
std::size_t sub_index(std::span<const unsigned> values,
                      std::span<const unsigned> arity) {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    idx = idx * arity[k] + values[k];
  }
  return idx;
}

std::vector<unsigned> sub_assignment(std::size_t idx,
                                     std::span<const unsigned> arity) {
  std::vector<unsigned> values(arity.size(), 0);
  for (std::size_t k = arity.size(); k-- > 0;) {
    values[k] = static_cast<unsigned>(idx % arity[k]);
    idx /= arity[k];
  }
  return values;
}

struct SubGate {
  std::vector<std::size_t> targets;     // over the operand tuple
  std::vector<std::size_t> assumed;     // sub indices
};

SubGate build_sub_gate(const GateSpec& spec, const ResolvedOperands& ops) {
  SubGate g;
  std::size_t sub_size = 1;
  for (unsigned ar : ops.arity) sub_size *= ar;
  g.targets.resize(sub_size);

  auto for_each_state = [&](auto&& fn) {
    for (std::size_t s = 0; s < sub_size; ++s) {
      fn(s, sub_assignment(s, ops.arity));
    }
  };

  switch (spec.kind) {
    case GateKind::RSET:
    case GateKind::RCLR: {
      require_binary(ops, spec);
      const unsigned to = spec.kind == GateKind::RSET ? 1u : 0u;
      const unsigned from = 1u - to;
      for_each_state([&](std::size_t s, std::vector<unsigned> a) {
        a[0] = to;
        g.targets[s] = sub_index(a, ops.arity);
        if (sub_assignment(s, ops.arity)[0] == from) g.assumed.push_back(s);
      });
      break;
    }
    case GateKind::RSETI: {
      const unsigned ar = ops.arity[0];
      if (spec.set_to >= ar || spec.assumed_from >= ar) {
        throw InvariantError("rSETi values must be within the variable's arity");
      }
      if (spec.set_to == spec.assumed_from) {
        throw InvariantError(
            "rSETi with i = j is vacuous: the gate would assume the value it "
            "writes");
      }
      for_each_state([&](std::size_t s, std::vector<unsigned> a) {
        const unsigned was = a[0];
        a[0] = spec.set_to;
        g.targets[s] = sub_index(a, ops.arity);
        if (was == spec.assumed_from) g.assumed.push_back(s);
      });
      break;
    }
    case GateKind::RCOPY:
    case GateKind::RUNCOPY: {
      if (ops.arity[0] != ops.arity[1]) {
        throw InvariantError(std::string(gate_kind_name(spec.kind)) +
                             " needs source and destination of equal arity");
      }
      if (spec.known_value >= ops.arity[1]) {
        throw InvariantError("known value out of range for the destination");
      }
      for_each_state([&](std::size_t s, std::vector<unsigned> a) {
        const unsigned x = a[0];
        const unsigned y = a[1];
        a[1] = spec.kind == GateKind::RCOPY ? x : spec.known_value;
        g.targets[s] = sub_index(a, ops.arity);
        const bool assumed =
            spec.kind == GateKind::RCOPY ? y == spec.known_value : y == x;
        if (assumed) g.assumed.push_back(s);
      });
      break;
    }
    case GateKind::RFUNC:
    case GateKind::RUNFUNC: {
      if (!spec.table) {
        throw InvariantError(std::string(gate_kind_name(spec.kind)) +
                             " needs a truth table");
      }
      const TruthTable& f = *spec.table;
      const std::size_t nin = ops.arity.size() - 1;
      if (nin == 0) {
        throw InvariantError(std::string(gate_kind_name(spec.kind)) +
                             " needs at least one input and an output");
      }
      if (f.input_count() != nin) {
        throw InvariantError("truth table arity does not match the operand list");
      }
      for (std::size_t k = 0; k < nin; ++k) {
        if (f.input_arities()[k] != ops.arity[k]) {
          throw InvariantError("truth table input arity mismatch on operand " +
                               spec.operands[k]);
        }
      }
      if (f.output_arity() != ops.arity[nin]) {
        throw InvariantError("truth table output arity must match the output "
                             "variable");
      }
      if (spec.known_value >= ops.arity[nin]) {
        throw InvariantError("known value out of range for the output");
      }
      for_each_state([&](std::size_t s, std::vector<unsigned> a) {
        const unsigned z = a[nin];
        const unsigned fz = f.eval(std::span(a.data(), nin));
        a[nin] = spec.kind == GateKind::RFUNC ? fz : spec.known_value;
        g.targets[s] = sub_index(a, ops.arity);
        const bool assumed = spec.kind == GateKind::RFUNC
                                 ? z == spec.known_value
                                 : z == fz;
        if (assumed) g.assumed.push_back(s);
      });
      break;
    }
    case GateKind::CNOT: {
      require_binary(ops, spec);
      for_each_state([&](std::size_t s, std::vector<unsigned> a) {
        a[1] ^= a[0];
        g.targets[s] = sub_index(a, ops.arity);
        g.assumed.push_back(s);
      });
      break;
    }
    case GateKind::CCNOT: {
      require_binary(ops, spec);
      for_each_state([&](std::size_t s, std::vector<unsigned> a) {
        a[2] ^= a[0] & a[1];
        g.targets[s] = sub_index(a, ops.arity);
        g.assumed.push_back(s);
      });
      break;
    }
  }
  return g;
}

std::size_t expected_operand_count(GateKind kind, std::size_t given) {
  switch (kind) {
    case GateKind::RSET:
    case GateKind::RCLR:
    case GateKind::RSETI:
      return 1;
    case GateKind::RCOPY:
    case GateKind::RUNCOPY:
    case GateKind::CNOT:
      return 2;
    case GateKind::CCNOT:
      return 3;
    case GateKind::RFUNC:
    case GateKind::RUNFUNC:
      return given;  // variadic: inputs plus one output
  }
  return given;
}

}  // namespace

Operation lift_to_space(const Operation& op,
                        const std::vector<std::string>& operand_names,
                        const FactorizedSpace& space) {
  std::vector<std::size_t> var_index;
  std::vector<unsigned> arity;
  std::unordered_set<std::string_view> seen;
  for (const auto& name : operand_names) {
    auto k = space.variable_index(name);
    if (!k) {
      throw InvariantError("operand '" + name +
                           "' is not a variable of the space");
    }
    if (!seen.insert(name).second) {
      throw InvariantError("operand '" + name + "' appears twice");
    }
    var_index.push_back(*k);
    arity.push_back(space.variable(*k).arity);
  }
  std::size_t sub_size = 1;
  for (unsigned ar : arity) sub_size *= ar;
  if (op.initial_size() != sub_size || op.final_size() != sub_size) {
    throw SpaceMismatchError(
        "operation does not act on the named operand tuple");
  }

  const std::size_t joint = space.joint_size();
  StateSpacePtr joint_space = space.joint_state_space();

  auto project = [&](const Assignment& a) {
    std::vector<unsigned> values(var_index.size());
    for (std::size_t k = 0; k < var_index.size(); ++k) {
      values[k] = a.values[var_index[k]];
    }
    return values;
  };
  auto embed = [&](Assignment a, std::size_t sub_idx) {
    const std::vector<unsigned> values = sub_assignment(sub_idx, arity);
    for (std::size_t k = 0; k < var_index.size(); ++k) {
      a.values[var_index[k]] = values[k];
    }
    return a;
  };

  if (is_deterministic(op)) {
    std::vector<std::size_t> targets(joint);
    for (std::size_t s = 0; s < joint; ++s) {
      const Assignment a = space.assignment_of(s);
      const std::size_t sub_to = op.target(sub_index(project(a), arity));
      targets[s] = space.index_of(embed(a, sub_to));
    }
    return Operation::deterministic(joint_space, joint_space,
                                    std::move(targets));
  }

  if (joint > kDenseCap) {
    throw SpaceCapError(
        "stochastic operations lift only while the joint space fits a dense "
        "rule");
  }
  std::vector<std::vector<double>> rows(joint,
                                        std::vector<double>(joint, 0.0));
  for (std::size_t s = 0; s < joint; ++s) {
    const Assignment a = space.assignment_of(s);
    const std::size_t sub_from = sub_index(project(a), arity);
    for (const auto& [sub_to, p] : op.row_support(sub_from)) {
      rows[s][space.index_of(embed(a, sub_to))] = p;
    }
  }
  return Operation::stochastic(joint_space, joint_space, std::move(rows));
}

ConditionedOperation build_gate(const GateSpec& spec,
                                const FactorizedSpace& space) {
  require_operand_count(spec,
                        expected_operand_count(spec.kind, spec.operands.size()));
  const ResolvedOperands ops = resolve_operands(spec, space);
  const SubGate sub = build_sub_gate(spec, ops);

  const std::size_t joint = space.joint_size();
  StateSpacePtr joint_space = space.joint_state_space();

  std::vector<std::size_t> targets(joint);
  std::vector<std::size_t> assumed;
  std::vector<bool> sub_assumed(sub.targets.size(), false);
  for (std::size_t s : sub.assumed) sub_assumed[s] = true;

  for (std::size_t s = 0; s < joint; ++s) {
    Assignment a = space.assignment_of(s);
    std::vector<unsigned> values(ops.var_index.size());
    for (std::size_t k = 0; k < ops.var_index.size(); ++k) {
      values[k] = a.values[ops.var_index[k]];
    }
    const std::size_t from = sub_index(values, ops.arity);
    const std::vector<unsigned> to = sub_assignment(sub.targets[from], ops.arity);
    for (std::size_t k = 0; k < ops.var_index.size(); ++k) {
      a.values[ops.var_index[k]] = to[k];
    }
    targets[s] = space.index_of(a);
    if (sub_assumed[from]) assumed.push_back(s);
  }

  Operation lifted = Operation::deterministic(joint_space, joint_space,
                                              std::move(targets));
  return ConditionedOperation(std::move(lifted),
                              Precondition(std::move(assumed), joint));
}

bool is_reversal_pair(const ConditionedOperation& g1,
                      const ConditionedOperation& g2) {
  if (!same_space(g1.op().final_space(), g2.op().initial_space())) {
    throw SpaceMismatchError(
        "candidate reversal acts on a different space than the original's "
        "final space");
  }
  for (std::size_t a : g1.assumed().members()) {
    const std::size_t b = g1.op().target(a);
    if (!g2.assumed().contains(b)) return false;
    if (g2.op().target(b) != a) return false;
  }
  return true;
}

}  // namespace grc
