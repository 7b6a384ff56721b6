#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "grc/commands.hpp"
#include "grc/model.hpp"

using namespace grc;

namespace {

const std::string kRoot = GRC_SOURCE_DIR;

std::string model_path(const std::string& name) {
  return kRoot + "/models/" + name;
}

std::string golden(const std::string& name) {
  std::ifstream in(kRoot + "/tests/golden/" + name, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("classify reports the erase gate") {
  ClassifyOptions opt;
  opt.path = model_path("erasure.grc");
  opt.op = "erase";

  SUBCASE("json output matches the golden byte for byte") {
    opt.json = true;
    CommandResult r = run_classify(opt);
    CHECK(r.exit_code == 1);
    CHECK(r.err.empty());
    CHECK(r.out == golden("classify_erase.json"));
  }
  SUBCASE("human output carries the same verdicts") {
    CommandResult r = run_classify(opt);
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("deterministic: yes") != std::string::npos);
    CHECK(r.out.find("unconditionally reversible: no") != std::string::npos);
    CHECK(r.out.find("reachable final states: 1") != std::string::npos);
    CHECK(r.out.find("{x=0}") != std::string::npos);
  }
  SUBCASE("a conditioned set gate still merges states unconditionally") {
    opt.path = model_path("rset.grc");
    opt.op = "set";
    opt.json = true;
    CommandResult r = run_classify(opt);
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("\"unconditionally_reversible\": false") !=
          std::string::npos);
    CHECK(r.out.find("\"reachable_final_count\": 1") != std::string::npos);
  }
  SUBCASE("unknown operation name") {
    opt.op = "nosuch";
    CommandResult r = run_classify(opt);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("nosuch") != std::string::npos);
  }
  SUBCASE("unreadable file") {
    opt.path = model_path("does_not_exist.grc");
    CommandResult r = run_classify(opt);
    CHECK(r.exit_code == 2);
  }
  SUBCASE("parse errors arrive as path-prefixed diagnostics") {
    opt.path = kRoot + "/tests/golden/classify_erase.json";  // not a model
    CommandResult r = run_classify(opt);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("classify_erase.json:1:") != std::string::npos);
    CHECK(r.err.find("error:") != std::string::npos);
  }
}

TEST_CASE("analyze matches the goldens and the exit-code contract") {
  AnalyzeOptions opt;
  opt.path = model_path("erasure.grc");
  opt.circuit = "main";
  opt.dist = "uniform";
  opt.json = true;

  SUBCASE("erasure at 300 K") {
    opt.temperature = 300.0;
    CommandResult r = run_analyze(opt);
    CHECK(r.exit_code == 1);
    CHECK(r.out == golden("analyze_erasure.json"));
  }
  SUBCASE("byte-identical across repeated runs") {
    CommandResult a = run_analyze(opt);
    CommandResult b = run_analyze(opt);
    CHECK(a.out == b.out);
    CHECK(a.exit_code == b.exit_code);
  }
  SUBCASE("compute-copy-uncompute run is clean") {
    opt.path = model_path("bennett_and.grc");
    opt.circuit = "bennett";
    opt.dist = "uniform_inputs";
    CommandResult r = run_analyze(opt);
    CHECK(r.exit_code == 0);
    CHECK(r.out == golden("analyze_bennett.json"));
  }
  SUBCASE("honored precondition exits zero") {
    opt.path = model_path("rset.grc");
    opt.dist = "ready";
    CommandResult r = run_analyze(opt);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"non_entropy_ejecting\": true") != std::string::npos);
  }
  SUBCASE("violated precondition exits one") {
    opt.path = model_path("rset.grc");
    opt.dist = "unready";
    CommandResult r = run_analyze(opt);
    CHECK(r.exit_code == 1);
  }
  SUBCASE("temperature must be positive") {
    opt.temperature = 0.0;
    CommandResult r = run_analyze(opt);
    CHECK(r.exit_code == 2);
  }
  SUBCASE("unknown circuit and distribution names") {
    opt.circuit = "nosuch";
    CHECK(run_analyze(opt).exit_code == 2);
    opt.circuit = "main";
    opt.dist = "nosuch";
    CHECK(run_analyze(opt).exit_code == 2);
  }
}

TEST_CASE("preconditions enumerates, sorts, and respects the cap") {
  PreconditionsOptions opt;
  opt.path = model_path("erasure.grc");
  opt.op = "erase";
  opt.json = true;

  SUBCASE("erase golden") {
    CommandResult r = run_preconditions(opt);
    CHECK(r.exit_code == 0);
    CHECK(r.out == golden("preconditions_erase.json"));
  }
  SUBCASE("listing is sorted lexicographically") {
    opt.path = model_path("bennett_and.grc");
    opt.op = "compute";
    CommandResult r = run_preconditions(opt);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"count\": 256") != std::string::npos);
    // The first listed set chooses the lowest-index preimage everywhere,
    // which is exactly the canonical precondition of the gate.
    std::size_t first = r.out.find("\"x=0 y=0 z=0 w=0\"");
    std::size_t second = r.out.find("\"x=0 y=0 z=0 w=1\"");
    REQUIRE(first != std::string::npos);
    REQUIRE(second != std::string::npos);
    CHECK(first < second);
  }
  SUBCASE("an explicit --limit below the count only counts") {
    opt.path = model_path("bennett_and.grc");
    opt.op = "compute";
    opt.limit = 5;
    CommandResult r = run_preconditions(opt);
    CHECK(r.exit_code == 3);
    CHECK(r.out.find("\"count\": 256") != std::string::npos);
    CHECK(r.out.find("\"listed\": false") != std::string::npos);
    CHECK(r.out.find("\"preconditions\": []") != std::string::npos);
  }
  SUBCASE("the environment variable sets the default cap") {
    opt.path = model_path("bennett_and.grc");
    opt.op = "compute";
    setenv("GRC_ENUM_LIMIT", "5", 1);
    CommandResult capped = run_preconditions(opt);
    CHECK(capped.exit_code == 3);
    // The explicit flag wins over the environment.
    opt.limit = 300;
    CommandResult listed = run_preconditions(opt);
    CHECK(listed.exit_code == 0);
    unsetenv("GRC_ENUM_LIMIT");
  }
  SUBCASE("a bad environment value is a usage error") {
    setenv("GRC_ENUM_LIMIT", "not-a-number", 1);
    CommandResult r = run_preconditions(opt);
    CHECK(r.exit_code == 2);
    unsetenv("GRC_ENUM_LIMIT");
  }
}

TEST_CASE("adiabatic simulates the copy cell") {
  AdiabaticOptions opt;
  opt.source = "fig7";
  opt.json = true;

  SUBCASE("builtin sweep golden; one dissipative case makes exit one") {
    CommandResult r = run_adiabatic(opt);
    CHECK(r.exit_code == 1);
    CHECK(r.out == golden("adiabatic_fig7_sweep.json"));
  }
  SUBCASE("single dissipation-free case exits zero") {
    opt.input = "A=1,B=0";
    CommandResult r = run_adiabatic(opt);
    CHECK(r.exit_code == 0);
    CHECK(r.out == golden("adiabatic_fig7_copy.json"));
  }
  SUBCASE("the dissipative corner case exits one and carries a trace") {
    opt.input = "A=1,B=1";
    CommandResult r = run_adiabatic(opt);
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("\"dissipative_node_events\": 2") != std::string::npos);
    CHECK(r.out.find("\"step\": 1") != std::string::npos);
  }
  SUBCASE("the same net written as a model file behaves identically") {
    opt.source = model_path("fig7.grc");
    CommandResult file_run = run_adiabatic(opt);
    CHECK(file_run.exit_code == 1);
    opt.source = "fig7";
    CommandResult builtin_run = run_adiabatic(opt);
    // Same cases and operation; only the net name differs.
    std::string a = file_run.out;
    std::string b = builtin_run.out;
    a.replace(a.find("\"cell\""), 6, "\"fig7\"");
    CHECK(a == b);
  }
  SUBCASE("binding errors are usage errors") {
    opt.input = "A=2";
    CHECK(run_adiabatic(opt).exit_code == 2);
    opt.input = "A=1,A=0";
    CHECK(run_adiabatic(opt).exit_code == 2);
    opt.input = "";
    CHECK(run_adiabatic(opt).exit_code == 2);
  }
  SUBCASE("an unbound scheduled input is a usage error") {
    opt.source = model_path("fig7.grc");
    opt.input = "B=1";
    CommandResult r = run_adiabatic(opt);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("'A'") != std::string::npos);
  }
  SUBCASE("net selection errors") {
    opt.source = model_path("fig7.grc");
    opt.net = "nosuch";
    CHECK(run_adiabatic(opt).exit_code == 2);
    opt.net.reset();
    opt.source = model_path("erasure.grc");  // no net blocks
    CHECK(run_adiabatic(opt).exit_code == 2);
  }
  SUBCASE("input and all-inputs exclude each other") {
    opt.input = "A=1";
    opt.all_inputs = true;
    CHECK(run_adiabatic(opt).exit_code == 2);
  }
}

TEST_CASE("shipped model files parse to their canonical form and back") {
  for (const char* name :
       {"erasure.grc", "rset.grc", "bennett_and.grc", "fig7.grc"}) {
    std::ifstream in(model_path(name), std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();

    ParseResult first = parse_model(buf.str());
    REQUIRE(first.ok());
    std::string canon = print_model(*first.model);
    ParseResult second = parse_model(canon);
    REQUIRE(second.ok());
    CHECK(print_model(*second.model) == canon);
  }
}
