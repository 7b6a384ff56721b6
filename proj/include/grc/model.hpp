#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grc/adiabatic.hpp"
#include "grc/circuit.hpp"
#include "grc/gates.hpp"
#include "grc/statespace.hpp"

namespace grc {

// A problem found while parsing; spans are 1-based byte positions.
struct Diagnostic {
  enum class Severity : unsigned char { Error, Warning };
  Severity severity = Severity::Error;
  std::size_t line = 0;
  std::size_t column = 0;
  std::string message;
  std::string code;  // stable machine-readable category
};

// "3:7: error: ... [code]" (no file name; callers prepend one).
std::string to_string(const Diagnostic& d);

struct DistDecl {
  std::string name;
  Distribution dist;  // over the model's joint space
};

struct GateDecl {
  std::string name;
  GateSpec spec;
  ConditionedOperation op;
};

struct CircuitDecl {
  std::string name;
  std::vector<std::string> gate_names;
};

// Levels written in net blocks: a constant, or the value bound at run time
// to the input named after the signal itself.
struct NetLevel {
  enum class Kind : unsigned char { Zero, One, Input } kind = Kind::Zero;
};

struct NetSignalDecl {
  std::string name;
  bool driven = false;
};

struct NetGateDecl {
  std::string control;  // signal name
  std::string term_a;   // node id, "<signal>.p" or "<signal>.n"
  std::string term_b;
};

struct NetInitDecl {
  std::string signal;
  NetLevel value;
};

struct NetRampDecl {
  std::string signal;
  NetLevel from;
  NetLevel to;
};

struct NetDecl {
  std::string name;
  std::vector<NetSignalDecl> signals;
  std::vector<NetGateDecl> tgates;
  std::vector<NetInitDecl> inits;
  std::vector<NetRampDecl> ramps;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  SwitchNet net;
  Schedule schedule;
};

// A parsed model file: declarations in source order, with the library
// objects already constructed.
struct Model {
  std::vector<VariableDecl> variables;
  std::optional<FactorizedSpace> space;  // present iff variables exist
  std::vector<DistDecl> dists;
  std::vector<GateDecl> gates;
  std::vector<CircuitDecl> circuits;
  std::vector<NetDecl> nets;

  const DistDecl* find_dist(std::string_view name) const;
  const GateDecl* find_gate(std::string_view name) const;
  const CircuitDecl* find_circuit(std::string_view name) const;
  const NetDecl* find_net(std::string_view name) const;

  Circuit build_circuit(const CircuitDecl& decl) const;
};

// Exactly one of `model` / `diagnostics` is non-empty.
struct ParseResult {
  std::optional<Model> model;
  std::vector<Diagnostic> diagnostics;

  bool ok() const noexcept { return model.has_value(); }
};

// Total: any input produces a model or at least one diagnostic, never both
// and never an exception.
ParseResult parse_model(std::string_view text);

// Canonical text form: declarations grouped by category in source order,
// distribution entries in joint-state order, probabilities at full
// round-trip precision.  parse(print(m)) reproduces print(m) byte for byte.
std::string print_model(const Model& m);

}  // namespace grc
