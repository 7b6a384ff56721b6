#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "grc/commands.hpp"

namespace {

int emit(const grc::CommandResult& result) {
  if (!result.out.empty()) std::fputs(result.out.c_str(), stdout);
  if (!result.err.empty()) std::fputs(result.err.c_str(), stderr);
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reversible computation toolkit"};
  app.require_subcommand(1);

  grc::ClassifyOptions classify;
  CLI::App* c = app.add_subcommand(
      "classify", "classify one operation of a model file");
  c->add_option("file", classify.path, "model file")->required();
  c->add_option("--op", classify.op, "operation name")->required();
  c->add_flag("--json", classify.json, "machine-readable output");

  grc::AnalyzeOptions analyze;
  CLI::App* a = app.add_subcommand(
      "analyze", "per-gate entropy bookkeeping for a circuit run");
  a->add_option("file", analyze.path, "model file")->required();
  a->add_option("--circuit", analyze.circuit, "circuit name")->required();
  a->add_option("--dist", analyze.dist, "input distribution name")->required();
  a->add_option("--temperature", analyze.temperature,
                "temperature in kelvin; adds dissipated-heat output");
  a->add_flag("--json", analyze.json, "machine-readable output");

  grc::PreconditionsOptions precond;
  CLI::App* p = app.add_subcommand(
      "preconditions", "enumerate the maximal preconditions of an operation");
  p->add_option("file", precond.path, "model file")->required();
  p->add_option("--op", precond.op, "operation name")->required();
  p->add_option("--limit", precond.limit,
                "listing cap (default: GRC_ENUM_LIMIT or 1000000)");
  p->add_flag("--json", precond.json, "machine-readable output");

  grc::AdiabaticOptions adiabatic;
  CLI::App* d = app.add_subcommand(
      "adiabatic", "switch-level simulation of a dual-rail net");
  d->add_option("source", adiabatic.source,
                "model file, or the built-in net 'fig7'")
      ->required();
  d->add_option("--net", adiabatic.net, "net name, when the file has several");
  d->add_option("--input", adiabatic.input,
                "single run with bindings like \"A=1,B=0\"");
  d->add_flag("--all-inputs", adiabatic.all_inputs,
              "sweep every assignment of the declared inputs");
  d->add_flag("--json", adiabatic.json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exits 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return 2;
  }

  if (c->parsed()) return emit(grc::run_classify(classify));
  if (a->parsed()) return emit(grc::run_analyze(analyze));
  if (p->parsed()) return emit(grc::run_preconditions(precond));
  return emit(grc::run_adiabatic(adiabatic));
}
