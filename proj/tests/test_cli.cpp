#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "vcat/document.hpp"

using namespace vcat;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string fixture(const std::string& name) {
  return std::string(VCAT_SOURCE_DIR) + "/fixtures/" + name;
}

std::string golden(const std::string& name) {
  return std::string(VCAT_SOURCE_DIR) + "/tests/golden/" + name;
}

}  // namespace

TEST_CASE("fixtures parse, validate, and re-emit byte-identically") {
  for (const auto& name : {"P1.json", "P2.json", "P3.json"}) {
    std::string text = slurp(fixture(name));
    InstanceDocument doc = parse_document(text);
    CHECK(emit_document(doc) == text);
    RunResult r = run_command(doc, "validate", {});
    CHECK(r.exit_code == 0);
  }
}

TEST_CASE("reports are deterministic") {
  std::string text = slurp(fixture("P1.json"));
  InstanceDocument doc = parse_document(text);
  RunResult a = run_command(doc, "representable", {{"problem", "repF0at1"}, {"method", "all"}});
  RunResult b = run_command(doc, "representable", {{"problem", "repF0at1"}, {"method", "all"}});
  CHECK(a.report.dump() == b.report.dump());
  CHECK(a.exit_code == 0);
}

TEST_CASE("exit-code contract") {
  InstanceDocument p1 = parse_document(slurp(fixture("P1.json")));
  CHECK(run_command(p1, "representable", {{"problem", "repF0at1"}, {"method", "direct"}}).exit_code == 0);
  CHECK(run_command(p1, "representable", {{"problem", "repF1"}}).exit_code == 1);
  InstanceDocument p3 = parse_document(slurp(fixture("P3.json")));
  CHECK(run_command(p3, "weighted-limit", {{"problem", "wlX"}, {"method", "all"}}).exit_code == 0);
  CHECK(run_command(p3, "weighted-limit", {{"problem", "wlTop"}, {"method", "all"}}).exit_code == 1);
  // unresolved references and bad documents are input errors
  CHECK_THROWS_AS(run_command(p1, "representable", {{"problem", "nope"}}), ValidationError);
  CHECK_THROWS_AS(parse_document("{\"cosmos\": \"weird\"}"), ValidationError);
  CHECK_THROWS_AS(parse_document("not json"), ValidationError);
}

TEST_CASE("library reports match the stored goldens") {
  struct Case {
    const char* fixture_name;
    const char* command;
    std::map<std::string, std::string> opts;
    const char* format;
    const char* golden_name;
  };
  const Case cases[] = {
      {"P1.json", "representable", {{"problem", "repF0at1"}, {"method", "all"}}, "json", "P1_rep_f0.golden"},
      {"P1.json", "representable", {{"problem", "repF1"}}, "json", "P1_rep_f1_search.golden"},
      {"P1.json", "groth", {{"presheaf", "F1"}}, "json", "P1_groth_f1.golden"},
      {"P1.json", "fiber", {{"presheaf", "F0"}}, "text", "P1_fiber_f0.golden"},
      {"P2.json", "terminal", {{"problem", "terminalP2"}}, "json", "P2_terminal.golden"},
      {"P2.json", "tensor", {{"problem", "bridgeP2"}}, "text", "P2_bridge.golden"},
      {"P3.json", "weighted-limit", {{"problem", "wlX"}, {"method", "all"}}, "json", "P3_wl_x.golden"},
      {"P3.json", "weighted-limit", {{"problem", "wlTop"}, {"method", "all"}}, "text", "P3_wl_top.golden"},
  };
  for (const auto& c : cases) {
    INFO(c.golden_name);
    InstanceDocument doc = parse_document(slurp(fixture(c.fixture_name)));
    RunResult r = run_command(doc, c.command, c.opts);
    std::string rendered =
        std::string(c.format) == "text" ? render_text(r.report) : r.report.dump(2) + "\n";
    CHECK(rendered == slurp(golden(c.golden_name)));
  }
}

TEST_CASE("fixture verdicts") {
  InstanceDocument p2 = parse_document(slurp(fixture("P2.json")));
  RunResult t = run_command(p2, "terminal", {{"problem", "terminalP2"}});
  CHECK(t.report.at("internal_terminal") == false);
  CHECK(t.report.at("v_terminal_underlying") == true);
  RunResult b = run_command(p2, "tensor", {{"problem", "bridgeP2"}});
  CHECK(b.report.at("hypotheses_hold") == false);
  CHECK(b.report.at("divergence") == true);
  CHECK(b.report.at("divergence_under_hypotheses") == false);

  InstanceDocument p3 = parse_document(slurp(fixture("P3.json")));
  RunResult wl = run_command(p3, "weighted-limit", {{"problem", "wlX"}, {"method", "all"}});
  for (const auto& [m, v] : wl.report.at("methods").items()) CHECK(v == "true");
  CHECK(wl.report.at("methods").size() == 5);
}

TEST_CASE("generated documents are deterministic and valid") {
  std::string a = generate_document(42, 4, CosmosTag::finset);
  std::string b = generate_document(42, 4, CosmosTag::finset);
  CHECK(a == b);
  InstanceDocument doc = parse_document(a);
  CHECK(run_command(doc, "validate", {}).exit_code == 0);
  std::string c = generate_document(7, 3, CosmosTag::fincat);
  CHECK(run_command(parse_document(c), "validate", {}).exit_code == 0);
}
