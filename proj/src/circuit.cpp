#include "grc/circuit.hpp"

#include <utility>

#include "grc/entropy.hpp"
#include "grc/errors.hpp"

namespace grc {

Circuit::Circuit(FactorizedSpace space, std::vector<ConditionedOperation> gates)
    : space_(std::move(space)), gates_(std::move(gates)) {
  const std::size_t joint = space_.joint_size();
  for (const auto& g : gates_) {
    if (g.op().initial_size() != joint || g.op().final_size() != joint) {
      throw SpaceMismatchError(
          "every gate of a circuit must act on the circuit's joint space");
    }
  }
}

double GateReport::delta_s_nc_bits() const {
  return nats_to_bits(delta_s_nc_nats);
}

double AnalysisReport::total_delta_s_nc_bits() const {
  return nats_to_bits(total_delta_s_nc_nats);
}

namespace {

void check_input(const Circuit& circ, const Distribution& input) {
  if (input.size() != circ.space().joint_size()) {
    throw SpaceMismatchError("input distribution is not over the circuit space");
  }
}

}  // namespace

std::vector<Distribution> propagate(const Circuit& circ,
                                    const Distribution& input) {
  check_input(circ, input);
  std::vector<Distribution> stages;
  stages.reserve(circ.gates().size() + 1);
  stages.push_back(input);
  for (const auto& g : circ.gates()) {
    stages.push_back(push_forward(Computation(g.op(), stages.back())));
  }
  return stages;
}

AnalysisReport analyze(const Circuit& circ, const Distribution& input) {
  const std::vector<Distribution> stages = propagate(circ, input);
  AnalysisReport report;
  report.gates.reserve(circ.gates().size());
  for (std::size_t k = 0; k < circ.gates().size(); ++k) {
    GateReport r;
    r.gate_index = k;
    r.precondition_probability = precondition_probability(
        Computation(circ.gates()[k].op(), stages[k]),
        circ.gates()[k].assumed());
    r.precondition_satisfied =
        r.precondition_probability >= 1.0 - kDeterminismTolerance;
    r.input_entropy_nats = shannon_entropy(stages[k]);
    r.output_entropy_nats = shannon_entropy(stages[k + 1]);
    r.delta_s_nc_nats = r.input_entropy_nats - r.output_entropy_nats;
    report.gates.push_back(r);
  }
  report.input_entropy_nats = shannon_entropy(stages.front());
  report.final_entropy_nats = shannon_entropy(stages.back());
  report.total_delta_s_nc_nats =
      report.input_entropy_nats - report.final_entropy_nats;
  return report;
}

Circuit bennett_construct(const TruthTable& f, const FactorizedSpace& space,
                          const std::vector<std::string>& inputs,
                          const std::string& ancilla,
                          const std::string& output) {
  auto require_binary_var = [&](const std::string& name) {
    auto k = space.variable_index(name);
    if (!k) {
      throw InvariantError("variable '" + name + "' is not in the space");
    }
    if (space.variable(*k).arity != 2) {
      throw InvariantError(
          "the compute-copy-uncompute construction works on binary "
          "variables; '" + name + "' is not binary");
    }
  };
  if (inputs.empty()) {
    throw InvariantError("the construction needs at least one input");
  }
  for (const auto& name : inputs) require_binary_var(name);
  require_binary_var(ancilla);
  require_binary_var(output);
  if (f.input_count() != inputs.size()) {
    throw InvariantError("function arity does not match the input list");
  }
  for (unsigned ar : f.input_arities()) {
    if (ar != 2) {
      throw InvariantError(
          "the compute-copy-uncompute construction needs a boolean function");
    }
  }
  if (f.output_arity() != 2) {
    throw InvariantError(
        "the compute-copy-uncompute construction needs a boolean function");
  }

  GateSpec compute;
  compute.kind = GateKind::RFUNC;
  compute.operands = inputs;
  compute.operands.push_back(ancilla);
  compute.known_value = 0;
  compute.table = f;

  GateSpec copy_out;
  copy_out.kind = GateKind::RCOPY;
  copy_out.operands = {ancilla, output};
  copy_out.known_value = 0;

  GateSpec uncompute = compute;
  uncompute.kind = GateKind::RUNFUNC;

  std::vector<ConditionedOperation> gates;
  gates.push_back(build_gate(compute, space));
  gates.push_back(build_gate(copy_out, space));
  gates.push_back(build_gate(uncompute, space));
  return Circuit(space, std::move(gates));
}

}  // namespace grc
