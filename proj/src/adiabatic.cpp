#include "grc/adiabatic.hpp"

#include <algorithm>
#include <set>

#include "grc/errors.hpp"

namespace grc {

std::size_t SwitchNet::add_node(std::string id, NodeKind kind) {
  for (const auto& n : nodes_) {
    if (n.id == id) throw InvariantError("duplicate node id '" + id + "'");
  }
  nodes_.push_back(Node{std::move(id), kind});
  return nodes_.size() - 1;
}

std::size_t SwitchNet::add_signal(std::string name, NodeKind kind) {
  for (const auto& s : signals_) {
    if (s.name == name) {
      throw InvariantError("duplicate signal '" + name + "'");
    }
  }
  const std::size_t pos = add_node(name + ".p", kind);
  const std::size_t neg = add_node(name + ".n", kind);
  signals_.push_back(DualRailSignal{std::move(name), pos, neg});
  return signals_.size() - 1;
}

void SwitchNet::add_gate(std::size_t control_signal, std::size_t term_a,
                         std::size_t term_b) {
  if (control_signal >= signals_.size()) {
    throw InvariantError("gate control signal out of range");
  }
  if (term_a >= nodes_.size() || term_b >= nodes_.size()) {
    throw InvariantError("gate terminal out of range");
  }
  if (term_a == term_b) {
    throw InvariantError("gate terminals must be distinct nodes");
  }
  gates_.push_back(TransmissionGate{control_signal, term_a, term_b});
}

void SwitchNet::add_gate(std::string_view control_signal,
                         std::string_view term_a, std::string_view term_b) {
  const auto control = signal_index(control_signal);
  if (!control) {
    throw InvariantError("gate control '" + std::string(control_signal) +
                         "' is not a signal in the net");
  }
  const auto a = node_index(term_a);
  const auto b = node_index(term_b);
  if (!a || !b) {
    throw InvariantError("gate terminal '" +
                         std::string(!a ? term_a : term_b) +
                         "' is not a node in the net");
  }
  add_gate(*control, *a, *b);
}

const Node& SwitchNet::node(std::size_t i) const {
  if (i >= nodes_.size()) throw InvariantError("node index out of range");
  return nodes_[i];
}

const DualRailSignal& SwitchNet::signal(std::size_t s) const {
  if (s >= signals_.size()) throw InvariantError("signal index out of range");
  return signals_[s];
}

std::optional<std::size_t> SwitchNet::signal_index(std::string_view name) const {
  for (std::size_t s = 0; s < signals_.size(); ++s) {
    if (signals_[s].name == name) return s;
  }
  return std::nullopt;
}

std::optional<std::size_t> SwitchNet::node_index(std::string_view id) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id == id) return i;
  }
  return std::nullopt;
}

void Schedule::set_initial(std::string signal, LevelExpr value) {
  if (!ramps_.empty()) {
    throw InvariantError("initial settings must precede the first ramp");
  }
  initials_.push_back(Initial{std::move(signal), std::move(value)});
}

void Schedule::ramp(std::string signal, LevelExpr from, LevelExpr to) {
  ramps_.push_back(Ramp{std::move(signal), std::move(from), std::move(to)});
}

namespace {

bool eval_level(const LevelExpr& e, const std::map<std::string, bool>& inputs) {
  if (e.kind == LevelExpr::Kind::Const) return e.value;
  auto it = inputs.find(e.input_name);
  if (it == inputs.end()) {
    throw InvariantError("schedule references unbound input '" + e.input_name +
                         "'");
  }
  return it->second;
}

// Mutable simulation state plus the connectivity machinery.
class Simulator {
 public:
  Simulator(const SwitchNet& net, const Schedule& schedule,
            const std::map<std::string, bool>& inputs)
      : net_(net), schedule_(schedule), inputs_(inputs) {}

  SimResult run() {
    init_levels();
    gate_on_.assign(net_.gates().size(), false);
    refresh_gates();
    // An initial state with a conducting connection across differing
    // levels would already have equilibrated; resolve it before step 1 and
    // count any charge that had to move.
    resolve_components(0);
    check_encodings(0);
    std::size_t step = 1;
    for (const auto& ramp : schedule_.ramps()) {
      apply_ramp(ramp, step);
      // Moving a control can open or close switches; settle to fixpoint.
      // A snapped node can itself be a control, so keep refreshing until
      // the switch states are stable.
      while (refresh_gates()) {
        resolve_components(step);
      }
      check_encodings(step);
      ++step;
    }
    SimResult result;
    result.final_levels = levels_;
    result.trace = std::move(trace_);
    result.dissipative_node_events = result.trace.size();
    result.dissipative_pair_events = count_pairs(result.trace);
    return result;
  }

 private:
  std::size_t resolve_signal(const std::string& name) const {
    const auto idx = net_.signal_index(name);
    if (!idx) {
      throw InvariantError("schedule references unknown signal '" + name +
                           "'");
    }
    return *idx;
  }

  void init_levels() {
    levels_.assign(net_.node_count(), Level::Low);
    std::vector<bool> covered(net_.signal_count(), false);
    for (const auto& init : schedule_.initials()) {
      const std::size_t s = resolve_signal(init.signal);
      const DualRailSignal& sig = net_.signal(s);
      const bool v = eval_level(init.value, inputs_);
      levels_[sig.pos] = v ? Level::High : Level::Low;
      levels_[sig.neg] = v ? Level::Low : Level::High;
      covered[s] = true;
    }
    for (std::size_t s = 0; s < net_.signal_count(); ++s) {
      if (!covered[s]) {
        throw InvariantError("signal '" + net_.signal(s).name +
                             "' has no initial value");
      }
    }
  }

  // Recomputes switch states from control values.  Returns true when any
  // switch changed state.
  bool refresh_gates() {
    bool changed = false;
    for (std::size_t g = 0; g < net_.gates().size(); ++g) {
      const bool on = signal_value(net_.gates()[g].control_signal);
      if (on != gate_on_[g]) {
        gate_on_[g] = on;
        changed = true;
      }
    }
    return changed;
  }

  bool signal_value(std::size_t s) const {
    const DualRailSignal& sig = net_.signal(s);
    const Level p = levels_[sig.pos];
    const Level n = levels_[sig.neg];
    if (p == Level::High && n == Level::Low) return true;
    if (p == Level::Low && n == Level::High) return false;
    throw EncodingError("signal '" + sig.name +
                        "' is outside the dual-rail encoding");
  }

  void check_encodings(std::size_t step) const {
    for (std::size_t s = 0; s < net_.signal_count(); ++s) {
      const DualRailSignal& sig = net_.signal(s);
      if (levels_[sig.pos] == levels_[sig.neg]) {
        throw EncodingError("signal '" + sig.name +
                            "' left the dual-rail encoding after step " +
                            std::to_string(step));
      }
    }
  }

  // Connected components over conducting switches.
  std::vector<std::size_t> components() const {
    std::vector<std::size_t> comp(net_.node_count());
    for (std::size_t i = 0; i < comp.size(); ++i) comp[i] = i;
    // Tiny nets: contract edges by repeated relabeling.
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t g = 0; g < net_.gates().size(); ++g) {
        if (!gate_on_[g]) continue;
        const std::size_t a = comp[net_.gates()[g].term_a];
        const std::size_t b = comp[net_.gates()[g].term_b];
        if (a == b) continue;
        const std::size_t lo = std::min(a, b);
        for (auto& c : comp) {
          if (c == a || c == b) c = lo;
        }
        changed = true;
      }
    }
    return comp;
  }

  // Snaps storage nodes to their component's driven level.  Returns the
  // number of nodes that moved.  Conflicting drivers, or a floating
  // component whose nodes disagree, are electrical errors.
  std::size_t resolve_components(std::size_t step) {
    const std::vector<std::size_t> comp = components();
    std::size_t moved = 0;
    for (std::size_t root = 0; root < comp.size(); ++root) {
      if (comp[root] != root) continue;
      bool has_driver = false;
      Level driven = Level::Low;
      for (std::size_t i = 0; i < comp.size(); ++i) {
        if (comp[i] != root) continue;
        if (net_.node(i).kind != NodeKind::DrivenRail) continue;
        if (has_driver && levels_[i] != driven) {
          throw DriveFightError("nodes '" + driver_name(comp, root) +
                                "' and '" + net_.node(i).id +
                                "' drive one component to opposite levels");
        }
        has_driver = true;
        driven = levels_[i];
      }
      if (has_driver) {
        for (std::size_t i = 0; i < comp.size(); ++i) {
          if (comp[i] != root || levels_[i] == driven) continue;
          levels_[i] = driven;
          trace_.push_back(TraceEvent{step, i, driven});
          ++moved;
        }
      } else {
        // No driver: the component floats.  Equal levels share charge
        // losslessly; unequal levels would equalize dissipatively with no
        // defined logic value, which we reject.
        for (std::size_t i = 0; i < comp.size(); ++i) {
          if (comp[i] != root) continue;
          if (levels_[i] != levels_[root]) {
            throw DriveFightError(
                "floating nodes '" + net_.node(root).id + "' and '" +
                net_.node(i).id + "' connected at opposite levels");
          }
        }
      }
    }
    return moved;
  }

  std::string driver_name(const std::vector<std::size_t>& comp,
                          std::size_t root) const {
    for (std::size_t i = 0; i < comp.size(); ++i) {
      if (comp[i] == root && net_.node(i).kind == NodeKind::DrivenRail) {
        return net_.node(i).id;
      }
    }
    return "?";
  }

  void apply_ramp(const Schedule::Ramp& ramp, std::size_t step) {
    const std::size_t s = resolve_signal(ramp.signal);
    const DualRailSignal& sig = net_.signal(s);
    if (net_.node(sig.pos).kind != NodeKind::DrivenRail) {
      throw InvariantError("ramped signal '" + sig.name +
                           "' is not a driven rail pair");
    }
    const bool from = eval_level(ramp.from, inputs_);
    const bool to = eval_level(ramp.to, inputs_);
    if (signal_value(s) != from) {
      throw InvariantError("ramp of '" + sig.name +
                           "' starts from the wrong value at step " +
                           std::to_string(step));
    }
    if (from == to) return;
    // Everything conducting to a moving rail follows it adiabatically.
    const std::vector<std::size_t> comp = components();
    if (comp[sig.pos] == comp[sig.neg]) {
      throw DriveFightError("the rails of '" + sig.name +
                            "' are shorted together");
    }
    move_rail(comp, sig.pos, to ? Level::High : Level::Low, sig);
    move_rail(comp, sig.neg, to ? Level::Low : Level::High, sig);
  }

  void move_rail(const std::vector<std::size_t>& comp, std::size_t rail,
                 Level target, const DualRailSignal& sig) {
    const std::size_t root = comp[rail];
    // A static driver elsewhere in the component would fight the swing.
    for (std::size_t i = 0; i < comp.size(); ++i) {
      if (comp[i] != root || i == rail) continue;
      if (net_.node(i).kind == NodeKind::DrivenRail && levels_[i] != target) {
        throw DriveFightError("ramping '" + sig.name + "' against driver '" +
                              net_.node(i).id + "'");
      }
    }
    for (std::size_t i = 0; i < comp.size(); ++i) {
      if (comp[i] == root) levels_[i] = target;
    }
  }

  std::size_t count_pairs(const std::vector<TraceEvent>& trace) const {
    // Both rails of a signal snapping in the same step count as one event;
    // nodes outside any signal count individually.
    std::vector<std::size_t> group_of(net_.node_count());
    for (std::size_t i = 0; i < group_of.size(); ++i) {
      group_of[i] = net_.signal_count() + i;
    }
    for (std::size_t s = 0; s < net_.signal_count(); ++s) {
      group_of[net_.signal(s).pos] = s;
      group_of[net_.signal(s).neg] = s;
    }
    std::set<std::pair<std::size_t, std::size_t>> groups;
    for (const auto& e : trace) {
      groups.insert({e.step, group_of[e.node]});
    }
    return groups.size();
  }

  const SwitchNet& net_;
  const Schedule& schedule_;
  const std::map<std::string, bool>& inputs_;
  std::vector<Level> levels_;
  std::vector<bool> gate_on_;
  std::vector<TraceEvent> trace_;
};

}  // namespace

SimResult simulate(const SwitchNet& net, const Schedule& schedule,
                   const std::map<std::string, bool>& inputs) {
  return Simulator(net, schedule, inputs).run();
}

bool final_signal_value(const SwitchNet& net, const SimResult& result,
                        std::size_t signal) {
  const DualRailSignal& sig = net.signal(signal);
  const Level p = result.final_levels.at(sig.pos);
  const Level n = result.final_levels.at(sig.neg);
  if (p == Level::High && n == Level::Low) return true;
  if (p == Level::Low && n == Level::High) return false;
  throw EncodingError("signal '" + sig.name +
                      "' finished outside the dual-rail encoding");
}

bool final_signal_value(const SwitchNet& net, const SimResult& result,
                        std::string_view signal) {
  const auto idx = net.signal_index(signal);
  if (!idx) {
    throw InvariantError("signal '" + std::string(signal) +
                         "' is not in the net");
  }
  return final_signal_value(net, result, *idx);
}

std::vector<SweepCase> sweep_inputs(
    const SwitchNet& net, const Schedule& schedule,
    const std::vector<std::string>& input_names,
    const std::vector<std::string>& output_signals) {
  if (input_names.empty()) {
    throw InvariantError("a sweep needs at least one input name");
  }
  if (input_names.size() > 20) {
    throw SpaceCapError("sweeps are capped at 2^20 assignments");
  }
  std::vector<std::size_t> out_idx;
  for (const auto& name : output_signals) {
    auto s = net.signal_index(name);
    if (!s) {
      throw InvariantError("output signal '" + name + "' is not in the net");
    }
    out_idx.push_back(*s);
  }
  const std::size_t cases = std::size_t{1} << input_names.size();
  std::vector<SweepCase> sweep;
  sweep.reserve(cases);
  for (std::size_t c = 0; c < cases; ++c) {
    SweepCase sc;
    std::map<std::string, bool> inputs;
    for (std::size_t k = 0; k < input_names.size(); ++k) {
      // First input most significant, value 0 first.
      const bool v = (c >> (input_names.size() - 1 - k)) & 1;
      inputs[input_names[k]] = v;
      sc.inputs.push_back(v);
    }
    const SimResult r = simulate(net, schedule, inputs);
    for (std::size_t s : out_idx) {
      sc.outputs.push_back(final_signal_value(net, r, s));
    }
    sc.dissipative_node_events = r.dissipative_node_events;
    sc.dissipative_pair_events = r.dissipative_pair_events;
    sweep.push_back(std::move(sc));
  }
  return sweep;
}

namespace {

StateSpacePtr boolean_tuple_space(const std::vector<std::string>& names) {
  const std::size_t n = std::size_t{1} << names.size();
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string label;
    for (std::size_t k = 0; k < names.size(); ++k) {
      if (k) label += ' ';
      label += names[k];
      label += '=';
      label += ((i >> (names.size() - 1 - k)) & 1) ? '1' : '0';
    }
    labels.push_back(std::move(label));
  }
  return make_space(std::move(labels));
}

}  // namespace

ConditionedOperation extract_operation(
    const SwitchNet& net, const Schedule& schedule,
    const std::vector<std::string>& input_names,
    const std::vector<std::string>& output_signals) {
  if (output_signals.empty()) {
    throw InvariantError("operation extraction needs at least one output");
  }
  const std::vector<SweepCase> sweep =
      sweep_inputs(net, schedule, input_names, output_signals);
  StateSpacePtr initial = boolean_tuple_space(input_names);
  StateSpacePtr final_sp = boolean_tuple_space(output_signals);
  std::vector<std::size_t> targets;
  std::vector<std::size_t> lossless;
  targets.reserve(sweep.size());
  for (std::size_t c = 0; c < sweep.size(); ++c) {
    std::size_t j = 0;
    for (bool v : sweep[c].outputs) j = (j << 1) | (v ? 1 : 0);
    targets.push_back(j);
    if (sweep[c].dissipative_node_events == 0) lossless.push_back(c);
  }
  Operation op = Operation::deterministic(std::move(initial),
                                          std::move(final_sp),
                                          std::move(targets));
  if (lossless.empty()) {
    throw InvariantError(
        "every input assignment dissipates; the cell has no reversible "
        "regime");
  }
  return ConditionedOperation(std::move(op),
                              Precondition(std::move(lossless), sweep.size()));
}

CopyCellModel copy_cell_model() {
  CopyCellModel m;
  m.net.add_signal("A", NodeKind::DrivenRail);
  m.net.add_signal("D", NodeKind::DrivenRail);
  m.net.add_signal("B", NodeKind::Storage);
  m.net.add_gate("A", "D.p", "B.p");
  m.net.add_gate("A", "D.n", "B.n");
  m.schedule.set_initial("A", LevelExpr::constant(false));
  m.schedule.set_initial("D", LevelExpr::constant(false));
  m.schedule.set_initial("B", LevelExpr::input("B"));
  m.schedule.ramp("A", LevelExpr::constant(false), LevelExpr::input("A"));
  m.schedule.ramp("D", LevelExpr::constant(false), LevelExpr::constant(true));
  m.input_names = {"A", "B"};
  m.output_signals = {"A", "B"};
  return m;
}

}  // namespace grc
