#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "grc/gates.hpp"
#include "grc/opcore.hpp"

namespace grc {

// A sequence of conditioned gates over one factorized space, applied in
// order.  The sequence may be empty.
class Circuit {
 public:
  Circuit(FactorizedSpace space, std::vector<ConditionedOperation> gates);

  const FactorizedSpace& space() const noexcept { return space_; }
  const std::vector<ConditionedOperation>& gates() const noexcept {
    return gates_;
  }

 private:
  FactorizedSpace space_;
  std::vector<ConditionedOperation> gates_;
};

// Entropy bookkeeping for one gate of a run.
struct GateReport {
  std::size_t gate_index = 0;
  double precondition_probability = 0.0;
  bool precondition_satisfied = false;  // probability 1 up to rounding
  double input_entropy_nats = 0.0;
  double output_entropy_nats = 0.0;
  double delta_s_nc_nats = 0.0;  // input_entropy - output_entropy

  double delta_s_nc_bits() const;
};

struct AnalysisReport {
  std::vector<GateReport> gates;
  double input_entropy_nats = 0.0;
  double final_entropy_nats = 0.0;
  // Entropy ejected by the whole run: input minus final entropy.
  double total_delta_s_nc_nats = 0.0;

  double total_delta_s_nc_bits() const;
  bool non_entropy_ejecting(double tol = 1e-9) const {
    return total_delta_s_nc_nats <= tol;
  }
};

// Distributions before gate 0, between gates, and after the last gate;
// result has gates().size() + 1 entries.
std::vector<Distribution> propagate(const Circuit& circ,
                                    const Distribution& input);

// Per-gate precondition probabilities and entropy deltas plus run totals.
AnalysisReport analyze(const Circuit& circ, const Distribution& input);

// The compute-copy-uncompute embedding of a boolean function: computes f
// into the ancilla, copies it to the output, then decomputes the ancilla.
// Inputs, ancilla, and output must be binary variables of `space`; the
// ancilla and output are assumed clear (= 0) on entry.
Circuit bennett_construct(const TruthTable& f, const FactorizedSpace& space,
                          const std::vector<std::string>& inputs,
                          const std::string& ancilla,
                          const std::string& output);

}  // namespace grc
