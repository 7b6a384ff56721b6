#include "grc/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "grc/adiabatic.hpp"
#include "grc/circuit.hpp"
#include "grc/entropy.hpp"
#include "grc/errors.hpp"
#include "grc/model.hpp"
#include "grc/opcore.hpp"

namespace grc {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitClean = 0;
constexpr int kExitEjecting = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;

// Human tables show six significant digits; JSON keeps full precision.
std::string fmt6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return buf.str();
}

// Loads and parses a model file; on failure fills `result` with the
// diagnostics (prefixed by the path) and a usage exit code.
std::optional<Model> load_model(const std::string& path,
                                CommandResult& result) {
  std::optional<std::string> text = read_file(path);
  if (!text) {
    result.err = "cannot read '" + path + "'\n";
    result.exit_code = kExitUsage;
    return std::nullopt;
  }
  ParseResult parsed = parse_model(*text);
  if (!parsed.ok()) {
    for (const Diagnostic& d : parsed.diagnostics) {
      result.err += path + ":" + to_string(d) + "\n";
    }
    result.exit_code = kExitUsage;
    return std::nullopt;
  }
  return std::move(*parsed.model);
}

CommandResult usage_error(std::string message) {
  CommandResult r;
  r.err = std::move(message) + "\n";
  r.exit_code = kExitUsage;
  return r;
}

std::string state_label(const StateSpacePtr& space, std::size_t i) {
  return space->display_label(i);
}

std::string assumed_set_text(const StateSpacePtr& space,
                             const std::vector<std::size_t>& members) {
  std::string out = "{";
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (k != 0) out += ", ";
    out += state_label(space, members[k]);
  }
  out += "}";
  return out;
}

std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

CommandResult run_classify(const ClassifyOptions& options) {
  CommandResult result;
  std::optional<Model> model = load_model(options.path, result);
  if (!model) return result;
  const GateDecl* decl = model->find_gate(options.op);
  if (!decl) {
    return usage_error("no operation named '" + options.op + "' in '" +
                       options.path + "'");
  }

  const Operation& op = decl->op.op();
  const bool deterministic = is_deterministic(op);
  const bool unconditional = is_unconditionally_reversible(op);
  const Precondition canonical = construct_precondition(op);
  const bool ejecting = is_entropy_ejecting(op);

  if (options.json) {
    ordered_json j;
    j["deterministic"] = deterministic;
    j["unconditionally_reversible"] = unconditional;
    ordered_json members = ordered_json::array();
    for (std::size_t s : canonical.members()) {
      members.push_back(state_label(op.initial_space(), s));
    }
    j["canonical_precondition"] = std::move(members);
    j["reachable_final_count"] = canonical.size();
    result.out = dump_json(j);
  } else {
    std::string& out = result.out;
    out += "operation: " + decl->name + "\n";
    out += "deterministic: " + yes_no(deterministic) + "\n";
    out += "unconditionally reversible: " + yes_no(unconditional) + "\n";
    out += "reachable final states: " + std::to_string(canonical.size()) + "\n";
    out += "canonical precondition: " +
           assumed_set_text(op.initial_space(), canonical.members()) + "\n";
    out += "entropy ejecting: " + yes_no(ejecting) + "\n";
  }
  result.exit_code = ejecting ? kExitEjecting : kExitClean;
  return result;
}

CommandResult run_analyze(const AnalyzeOptions& options) {
  CommandResult result;
  if (options.temperature && !(*options.temperature > 0.0)) {
    return usage_error("--temperature must be positive");
  }
  std::optional<Model> model = load_model(options.path, result);
  if (!model) return result;
  const CircuitDecl* cdecl = model->find_circuit(options.circuit);
  if (!cdecl) {
    return usage_error("no circuit named '" + options.circuit + "' in '" +
                       options.path + "'");
  }
  const DistDecl* ddecl = model->find_dist(options.dist);
  if (!ddecl) {
    return usage_error("no distribution named '" + options.dist + "' in '" +
                       options.path + "'");
  }

  AnalysisReport report;
  try {
    Circuit circuit = model->build_circuit(*cdecl);
    report = analyze(circuit, ddecl->dist);
  } catch (const SpaceCapError& e) {
    result.err = std::string(e.what()) + "\n";
    result.exit_code = kExitCap;
    return result;
  } catch (const Error& e) {
    return usage_error(e.what());
  }

  const bool clean = report.non_entropy_ejecting();
  const double ejected_nats = std::max(report.total_delta_s_nc_nats, 0.0);

  if (options.json) {
    ordered_json j;
    j["circuit"] = cdecl->name;
    j["distribution"] = ddecl->name;
    j["input_entropy_nats"] = report.input_entropy_nats;
    j["final_entropy_nats"] = report.final_entropy_nats;
    j["total_delta_s_nc_nats"] = report.total_delta_s_nc_nats;
    j["total_delta_s_nc_bits"] = report.total_delta_s_nc_bits();
    j["non_entropy_ejecting"] = clean;
    if (options.temperature) {
      j["temperature_kelvin"] = *options.temperature;
      j["heat_joules"] = heat_dissipation(ejected_nats, *options.temperature);
    }
    ordered_json gates = ordered_json::array();
    for (const GateReport& g : report.gates) {
      ordered_json row;
      row["index"] = g.gate_index + 1;
      row["name"] = cdecl->gate_names.at(g.gate_index);
      row["precondition_probability"] = g.precondition_probability;
      row["precondition_satisfied"] = g.precondition_satisfied;
      row["input_entropy_nats"] = g.input_entropy_nats;
      row["output_entropy_nats"] = g.output_entropy_nats;
      row["delta_s_nc_nats"] = g.delta_s_nc_nats;
      row["delta_s_nc_bits"] = g.delta_s_nc_bits();
      gates.push_back(std::move(row));
    }
    j["gates"] = std::move(gates);
    result.out = dump_json(j);
  } else {
    std::string& out = result.out;
    out += "circuit '" + cdecl->name + "' under distribution '" + ddecl->name +
           "'\n";
    out += "  #  gate            P(precond)  sat  dS_nc [bit]\n";
    for (const GateReport& g : report.gates) {
      char line[160];
      std::snprintf(line, sizeof(line), "%3zu  %-14s  %-10s  %-3s  %s\n",
                    g.gate_index + 1,
                    cdecl->gate_names.at(g.gate_index).c_str(),
                    fmt6(g.precondition_probability).c_str(),
                    yes_no(g.precondition_satisfied).c_str(),
                    fmt6(g.delta_s_nc_bits()).c_str());
      out += line;
    }
    out += "input entropy:  " + fmt6(nats_to_bits(report.input_entropy_nats)) +
           " bit\n";
    out += "final entropy:  " + fmt6(nats_to_bits(report.final_entropy_nats)) +
           " bit\n";
    out += "total ejected:  " + fmt6(report.total_delta_s_nc_bits()) +
           " bit (" + fmt6(report.total_delta_s_nc_nats) + " nat)\n";
    if (options.temperature) {
      out += "heat at " + fmt6(*options.temperature) + " K: " +
             fmt6(heat_dissipation(ejected_nats, *options.temperature)) +
             " J\n";
    }
    out += std::string("verdict: ") +
           (clean ? "non-entropy-ejecting" : "entropy-ejecting") + "\n";
  }
  result.exit_code = clean ? kExitClean : kExitEjecting;
  return result;
}

namespace {

// The listing cap: explicit flag, else GRC_ENUM_LIMIT, else the default.
// Returns nullopt (and fills `error`) when the environment value is bad.
std::optional<std::uint64_t> resolve_enum_limit(
    const std::optional<std::uint64_t>& flag, std::string& error) {
  if (flag) return *flag;
  const char* env = std::getenv("GRC_ENUM_LIMIT");
  if (env == nullptr || *env == '\0') return kDefaultEnumerationLimit;
  std::uint64_t value = 0;
  const char* end = env + std::string_view(env).size();
  auto [ptr, ec] = std::from_chars(env, end, value);
  if (ec != std::errc() || ptr != end) {
    error = std::string("invalid GRC_ENUM_LIMIT value '") + env + "'";
    return std::nullopt;
  }
  return value;
}

}  // namespace

CommandResult run_preconditions(const PreconditionsOptions& options) {
  CommandResult result;
  std::string limit_error;
  std::optional<std::uint64_t> limit =
      resolve_enum_limit(options.limit, limit_error);
  if (!limit) return usage_error(std::move(limit_error));

  std::optional<Model> model = load_model(options.path, result);
  if (!model) return result;
  const GateDecl* decl = model->find_gate(options.op);
  if (!decl) {
    return usage_error("no operation named '" + options.op + "' in '" +
                       options.path + "'");
  }

  const Operation& op = decl->op.op();
  bool overflowed = false;
  const std::uint64_t count = count_maximal_preconditions(op, &overflowed);
  const bool listed = !overflowed && count <= *limit;

  std::vector<std::vector<std::size_t>> sets;
  if (listed) {
    for (const Precondition& p : enumerate_maximal_preconditions(op, *limit)) {
      sets.push_back(p.members());
    }
    std::sort(sets.begin(), sets.end());
  }

  if (options.json) {
    ordered_json j;
    j["operation"] = decl->name;
    j["count"] = count;
    j["count_overflowed"] = overflowed;
    j["listed"] = listed;
    ordered_json list = ordered_json::array();
    for (const std::vector<std::size_t>& members : sets) {
      ordered_json one = ordered_json::array();
      for (std::size_t s : members) {
        one.push_back(state_label(op.initial_space(), s));
      }
      list.push_back(std::move(one));
    }
    j["preconditions"] = std::move(list);
    result.out = dump_json(j);
  } else {
    std::string& out = result.out;
    out += "operation: " + decl->name + "\n";
    out += "maximal preconditions: ";
    out += overflowed ? std::string("more than 18446744073709551614")
                      : std::to_string(count);
    if (!listed) out += " (listing capped at " + std::to_string(*limit) + ")";
    out += "\n";
    for (const std::vector<std::size_t>& members : sets) {
      out += assumed_set_text(op.initial_space(), members) + "\n";
    }
  }
  result.exit_code = listed ? kExitClean : kExitCap;
  return result;
}

namespace {

struct NetSelection {
  std::string name;
  SwitchNet net;
  Schedule schedule;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

// Picks the net to simulate: the built-in copy cell, or a net block from a
// model file (by --net name when the file declares several).
std::optional<NetSelection> select_net(const AdiabaticOptions& options,
                                       CommandResult& result) {
  if (options.source == "fig7") {
    CopyCellModel cell = copy_cell_model();
    return NetSelection{"fig7", std::move(cell.net), std::move(cell.schedule),
                        std::move(cell.input_names),
                        std::move(cell.output_signals)};
  }
  std::optional<Model> model = load_model(options.source, result);
  if (!model) return std::nullopt;
  const NetDecl* decl = nullptr;
  if (options.net) {
    decl = model->find_net(*options.net);
    if (!decl) {
      result = usage_error("no net named '" + *options.net + "' in '" +
                           options.source + "'");
      return std::nullopt;
    }
  } else if (model->nets.size() == 1) {
    decl = &model->nets.front();
  } else if (model->nets.empty()) {
    result = usage_error("'" + options.source + "' declares no net blocks");
    return std::nullopt;
  } else {
    result = usage_error("'" + options.source + "' declares " +
                         std::to_string(model->nets.size()) +
                         " nets; pick one with --net");
    return std::nullopt;
  }
  return NetSelection{decl->name, decl->net, decl->schedule, decl->inputs,
                      decl->outputs};
}

// Parses "A=1,B=0" into bindings, in the order written.
std::optional<std::vector<std::pair<std::string, bool>>> parse_input_bindings(
    const std::string& text, std::string& error) {
  std::vector<std::pair<std::string, bool>> bindings;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string item = text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    const auto trim = [](std::string s) {
      const char* ws = " \t";
      std::size_t b = s.find_first_not_of(ws);
      std::size_t e = s.find_last_not_of(ws);
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    item = trim(item);
    std::size_t eq = item.find('=');
    std::string value = eq == std::string::npos ? "" : trim(item.substr(eq + 1));
    std::string name = eq == std::string::npos ? "" : trim(item.substr(0, eq));
    if (name.empty() || (value != "0" && value != "1")) {
      error = "bad input binding '" + item + "' (expected name=0 or name=1)";
      return std::nullopt;
    }
    for (const auto& [existing, unused] : bindings) {
      if (existing == name) {
        error = "input '" + name + "' bound twice";
        return std::nullopt;
      }
    }
    bindings.emplace_back(name, value == "1");
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (bindings.empty()) {
    error = "empty --input binding list";
    return std::nullopt;
  }
  return bindings;
}

std::string level_name(Level level) {
  return level == Level::High ? "high" : "low";
}

CommandResult run_single_case(const NetSelection& sel,
                              const std::vector<std::pair<std::string, bool>>&
                                  bindings,
                              bool json) {
  CommandResult result;
  std::map<std::string, bool> inputs(bindings.begin(), bindings.end());
  SimResult sim;
  try {
    sim = simulate(sel.net, sel.schedule, inputs);
  } catch (const Error& e) {
    return usage_error(e.what());
  }

  if (json) {
    ordered_json j;
    j["net"] = sel.name;
    ordered_json in = ordered_json::object();
    for (const auto& [name, value] : bindings) in[name] = value;
    j["inputs"] = std::move(in);
    ordered_json fin = ordered_json::object();
    for (std::size_t s = 0; s < sel.net.signal_count(); ++s) {
      fin[sel.net.signal(s).name] = final_signal_value(sel.net, sim, s);
    }
    j["final"] = std::move(fin);
    j["dissipative_node_events"] = sim.dissipative_node_events;
    j["dissipative_pair_events"] = sim.dissipative_pair_events;
    ordered_json trace = ordered_json::array();
    for (const TraceEvent& ev : sim.trace) {
      ordered_json row;
      row["step"] = ev.step;
      row["node"] = sel.net.node(ev.node).id;
      row["to"] = level_name(ev.snapped_to);
      trace.push_back(std::move(row));
    }
    j["trace"] = std::move(trace);
    result.out = dump_json(j);
  } else {
    std::string& out = result.out;
    out += "net: " + sel.name + "\n";
    out += "inputs:";
    for (const auto& [name, value] : bindings) {
      out += " " + name + "=" + (value ? "1" : "0");
    }
    out += "\nfinal:";
    for (std::size_t s = 0; s < sel.net.signal_count(); ++s) {
      out += " " + sel.net.signal(s).name + "=" +
             (final_signal_value(sel.net, sim, s) ? "1" : "0");
    }
    out += "\n";
    out += "dissipative node events: " +
           std::to_string(sim.dissipative_node_events) + " (rail pairs: " +
           std::to_string(sim.dissipative_pair_events) + ")\n";
    if (!sim.trace.empty()) {
      out += "trace:\n";
      for (const TraceEvent& ev : sim.trace) {
        out += "  step " + std::to_string(ev.step) + ": " +
               sel.net.node(ev.node).id + " -> " + level_name(ev.snapped_to) +
               "\n";
      }
    }
  }
  result.exit_code =
      sim.dissipative_node_events == 0 ? kExitClean : kExitEjecting;
  return result;
}

CommandResult run_sweep(const NetSelection& sel, bool json) {
  CommandResult result;
  if (sel.inputs.empty() || sel.outputs.empty()) {
    return usage_error("net '" + sel.name +
                       "' declares no inputs/outputs to sweep");
  }

  std::vector<SweepCase> cases;
  ConditionedOperation op = ConditionedOperation(
      Operation::identity(make_space(1)), Precondition::full(1));
  try {
    cases = sweep_inputs(sel.net, sel.schedule, sel.inputs, sel.outputs);
    op = extract_operation(sel.net, sel.schedule, sel.inputs, sel.outputs);
  } catch (const SpaceCapError& e) {
    result.err = std::string(e.what()) + "\n";
    result.exit_code = kExitCap;
    return result;
  } catch (const Error& e) {
    return usage_error(e.what());
  }

  bool any_dissipative = false;
  for (const SweepCase& c : cases) {
    if (c.dissipative_node_events > 0) any_dissipative = true;
  }
  const auto transitions = transition_relation(op.op());

  if (json) {
    ordered_json j;
    j["net"] = sel.name;
    j["inputs"] = sel.inputs;
    j["outputs"] = sel.outputs;
    ordered_json case_rows = ordered_json::array();
    for (const SweepCase& c : cases) {
      ordered_json row;
      row["inputs"] = c.inputs;
      row["outputs"] = c.outputs;
      row["dissipative_node_events"] = c.dissipative_node_events;
      row["dissipative_pair_events"] = c.dissipative_pair_events;
      case_rows.push_back(std::move(row));
    }
    j["cases"] = std::move(case_rows);
    ordered_json opj;
    ordered_json trans = ordered_json::array();
    for (const auto& [from, to] : transitions) {
      ordered_json row;
      row["from"] = state_label(op.op().initial_space(), from);
      row["to"] = state_label(op.op().final_space(), to);
      trans.push_back(std::move(row));
    }
    opj["transitions"] = std::move(trans);
    ordered_json assumed = ordered_json::array();
    for (std::size_t s : op.assumed().members()) {
      assumed.push_back(state_label(op.op().initial_space(), s));
    }
    opj["dissipation_free_precondition"] = std::move(assumed);
    j["operation"] = std::move(opj);
    result.out = dump_json(j);
  } else {
    std::string& out = result.out;
    out += "net: " + sel.name + "\n";
    for (const SweepCase& c : cases) {
      out += "case";
      for (std::size_t i = 0; i < sel.inputs.size(); ++i) {
        out += " " + sel.inputs[i] + "=" + (c.inputs[i] ? "1" : "0");
      }
      out += ": outputs";
      for (std::size_t i = 0; i < sel.outputs.size(); ++i) {
        out += " " + sel.outputs[i] + "=" + (c.outputs[i] ? "1" : "0");
      }
      out += ", node events " + std::to_string(c.dissipative_node_events) +
             ", pair events " + std::to_string(c.dissipative_pair_events) +
             "\n";
    }
    out += "induced operation:\n";
    for (const auto& [from, to] : transitions) {
      out += "  " + state_label(op.op().initial_space(), from) + " -> " +
             state_label(op.op().final_space(), to) + "\n";
    }
    out += "dissipation-free precondition: " +
           assumed_set_text(op.op().initial_space(), op.assumed().members()) +
           "\n";
  }
  result.exit_code = any_dissipative ? kExitEjecting : kExitClean;
  return result;
}

}  // namespace

CommandResult run_adiabatic(const AdiabaticOptions& options) {
  CommandResult result;
  if (options.input && options.all_inputs) {
    return usage_error("choose one of --input / --all-inputs");
  }
  std::optional<NetSelection> sel = select_net(options, result);
  if (!sel) return result;

  if (options.input) {
    std::string error;
    auto bindings = parse_input_bindings(*options.input, error);
    if (!bindings) return usage_error(std::move(error));
    return run_single_case(*sel, *bindings, options.json);
  }
  // With declared inputs a bare invocation means "sweep them all"; a net
  // with a fully constant schedule runs once.
  if (options.all_inputs || !sel->inputs.empty()) {
    return run_sweep(*sel, options.json);
  }
  return run_single_case(*sel, {}, options.json);
}

}  // namespace grc
