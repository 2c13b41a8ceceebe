// Batch front end: instance documents with named entities, canonical JSON
// parse/emit, and the command dispatcher behind the CLI.
#pragma once

#include <nlohmann/json.hpp>

#include "vcat/limits.hpp"
#include "vcat/testkit.hpp"

namespace vcat {

using Json = nlohmann::json;

struct ProblemSpec {
  std::string kind;  // representability | weighted-limit | terminal | tensor | tensor-bridge
  std::map<std::string, std::string> refs;
  std::map<Label, std::string> lambda;  // weighted-limit: shape object -> map name
  bool search = false;
};

struct InstanceDocument {
  CosmosTag cosmos = CosmosTag::finset;
  std::vector<std::string> object_names;  // in document order
  std::map<std::string, Obj> objects;
  std::vector<std::string> map_names;
  std::map<std::string, Map> maps;
  std::vector<std::string> vcategory_names;
  std::map<std::string, VCategory> vcategories;
  std::vector<std::string> presheaf_names;
  std::map<std::string, VPresheaf> presheaves;
  std::vector<std::string> vfunctor_names;
  std::map<std::string, VFunctorToV> vfunctors_to_v;
  std::map<std::string, VFunctorCC> vfunctors_cc;
  std::vector<std::string> vnat_names;
  std::map<std::string, VNat> vnats;
  std::map<std::string, std::pair<std::string, std::string>> vnat_bounds;  // presheaf refs
  std::vector<std::string> internal_names;
  std::map<std::string, InternalCategory> internal_cats;
  std::map<std::string, Internalization> internalizations;  // for int-built entries
  std::map<std::string, InternalFunctor> internal_functors;
  std::vector<std::string> problem_names;
  std::map<std::string, ProblemSpec> problems;
  Json source;  // the parsed document, for canonical re-emission
};

// Parse a document; every named entity is validated on load. Failures throw
// ValidationError with the offending field path.
InstanceDocument parse_document(const std::string& text);
// Canonical re-emission (sorted keys, two-space indent, trailing newline).
std::string emit_document(const InstanceDocument& doc);

struct RunResult {
  Json report;
  int exit_code = 0;  // 0 verdict-true/success, 1 verdict-false, 2 error
};
// Dispatch a CLI command against a document. Options: problem, method,
// presheaf, functor, internal, element, seed, cap.
RunResult run_command(const InstanceDocument& doc, const std::string& command,
                      const std::map<std::string, std::string>& opts);

// Deterministic generated instance document (the gen command).
std::string generate_document(std::uint64_t seed, std::size_t cap, CosmosTag cosmos);

std::string render_text(const Json& report);

}  // namespace vcat
