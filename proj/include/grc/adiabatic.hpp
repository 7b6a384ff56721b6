#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grc/opcore.hpp"
#include "grc/statespace.hpp"

namespace grc {

enum class Level : unsigned char { Low, High };

enum class NodeKind : unsigned char {
  DrivenRail,  // level imposed by the schedule
  Storage,     // level follows whatever it is connected to
};

struct Node {
  std::string id;
  NodeKind kind = NodeKind::Storage;
};

// A logic signal carried on two rails.  The signal reads 1 when the
// positive rail is high and the negative rail is low, 0 in the opposite
// configuration, and is outside the encoding otherwise.
struct DualRailSignal {
  std::string name;
  std::size_t pos = 0;  // node index
  std::size_t neg = 0;
};

// A switch connecting terminals a and b; conducting exactly while its
// control signal reads 1.
struct TransmissionGate {
  std::size_t control_signal = 0;
  std::size_t term_a = 0;
  std::size_t term_b = 0;
};

// The static structure of a switch-level network.
class SwitchNet {
 public:
  std::size_t add_node(std::string id, NodeKind kind);
  // Adds two rail nodes "<name>.p" / "<name>.n" and the signal over them.
  std::size_t add_signal(std::string name, NodeKind kind);
  void add_gate(std::size_t control_signal, std::size_t term_a,
                std::size_t term_b);
  // Name-based form: control is a signal name, terminals are node ids.
  void add_gate(std::string_view control_signal, std::string_view term_a,
                std::string_view term_b);

  std::size_t node_count() const noexcept { return nodes_.size(); }
  const Node& node(std::size_t i) const;
  std::size_t signal_count() const noexcept { return signals_.size(); }
  const DualRailSignal& signal(std::size_t s) const;
  std::optional<std::size_t> signal_index(std::string_view name) const;
  std::optional<std::size_t> node_index(std::string_view id) const;
  const std::vector<TransmissionGate>& gates() const noexcept { return gates_; }

 private:
  std::vector<Node> nodes_;
  std::vector<DualRailSignal> signals_;
  std::vector<TransmissionGate> gates_;
};

// A level that may be fixed or bound to a named boolean input at
// simulation time.
struct LevelExpr {
  enum class Kind : unsigned char { Const, Input } kind = Kind::Const;
  bool value = false;       // Kind::Const
  std::string input_name;   // Kind::Input

  static LevelExpr constant(bool v) { return {Kind::Const, v, {}}; }
  static LevelExpr input(std::string name) {
    return {Kind::Input, false, std::move(name)};
  }
};

// An ordered schedule: initial signal values, then adiabatic ramps of
// driven signals.  Signals are addressed by name and resolved against the
// net at simulation time.  Initial settings must all precede the first ramp.
class Schedule {
 public:
  void set_initial(std::string signal, LevelExpr value);
  void ramp(std::string signal, LevelExpr from, LevelExpr to);

  struct Initial {
    std::string signal;
    LevelExpr value;
  };
  struct Ramp {
    std::string signal;
    LevelExpr from;
    LevelExpr to;
  };

  const std::vector<Initial>& initials() const noexcept { return initials_; }
  const std::vector<Ramp>& ramps() const noexcept { return ramps_; }

 private:
  std::vector<Initial> initials_;
  std::vector<Ramp> ramps_;
};

// One dissipative charge transfer: a storage node snapped to a driver's
// level when a connection formed between nodes at different levels.
struct TraceEvent {
  std::size_t step = 0;  // 1-based ramp index
  std::size_t node = 0;
  Level snapped_to = Level::Low;
};

struct SimResult {
  std::vector<Level> final_levels;  // per node
  // Number of snapped nodes, and the same grouped per rail pair (a
  // signal's two rails snapping in one step count once).
  std::size_t dissipative_node_events = 0;
  std::size_t dissipative_pair_events = 0;
  std::vector<TraceEvent> trace;

  bool node_high(std::size_t node) const { return final_levels.at(node) == Level::High; }
};

// Runs the schedule.  `inputs` binds the named values referenced by the
// schedule.  Every signal must receive an initial value; every ramp must
// name a driven signal whose current value matches the ramp's `from`.
// Throws DriveFightError / EncodingError on electrical violations.
SimResult simulate(const SwitchNet& net, const Schedule& schedule,
                   const std::map<std::string, bool>& inputs);

// Reads the final logical value of a signal from a result.
bool final_signal_value(const SwitchNet& net, const SimResult& result,
                        std::size_t signal);
bool final_signal_value(const SwitchNet& net, const SimResult& result,
                        std::string_view signal);

// Sweeps every assignment of the named boolean inputs, simulates each, and
// assembles the induced operation from input assignments to final values of
// the output signals.  The precondition is the set of assignments whose run
// dissipated nothing.  Enumeration order: first input most significant,
// value 0 before 1.
ConditionedOperation extract_operation(
    const SwitchNet& net, const Schedule& schedule,
    const std::vector<std::string>& input_names,
    const std::vector<std::string>& output_signals);

// Per-assignment sweep data, for reporting.
struct SweepCase {
  std::vector<bool> inputs;
  std::vector<bool> outputs;
  std::size_t dissipative_node_events = 0;
  std::size_t dissipative_pair_events = 0;
};

std::vector<SweepCase> sweep_inputs(const SwitchNet& net,
                                    const Schedule& schedule,
                                    const std::vector<std::string>& input_names,
                                    const std::vector<std::string>& output_signals);

// The two-transmission-gate copy cell: storage signal B is connected to
// drive signal D by a pair of switches controlled by A.  The schedule ramps
// A to its input value, then ramps D from 0 to 1.  Copies A into B without
// dissipation whenever A and B do not start both-1.
struct CopyCellModel {
  SwitchNet net;
  Schedule schedule;
  std::vector<std::string> input_names;     // {"A", "B"}
  std::vector<std::string> output_signals;  // {"A", "B"}
};

CopyCellModel copy_cell_model();

}  // namespace grc
