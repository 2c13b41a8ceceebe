// Batch command-line front end over instance documents.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vcat/document.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw vcat::ValidationError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int emit_report(const vcat::RunResult& result, const std::string& format) {
  if (format == "text")
    std::cout << vcat::render_text(result.report);
  else
    std::cout << result.report.dump(2) << "\n";
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite enriched/internal category toolkit"};
  app.require_subcommand(1);

  std::string file, report_format = "json", problem, method = "all";
  std::string presheaf, functor, internal_name, element, fixtures_dir, cosmos = "finset";
  std::uint64_t seed = 0;
  std::size_t cap = 4;

  auto add_common = [&](CLI::App* cmd, bool needs_file = true) {
    if (needs_file) cmd->add_option("file", file, "instance document")->required();
    cmd->add_option("--report", report_format, "json|text");
  };

  CLI::App* validate = app.add_subcommand("validate", "validate every named entity");
  add_common(validate);

  CLI::App* grothc = app.add_subcommand("groth", "internal category of elements of a presheaf");
  add_common(grothc);
  grothc->add_option("--presheaf", presheaf, "presheaf name")->required();

  CLI::App* fibration = app.add_subcommand("fibration", "discrete (op)fibration certificates");
  add_common(fibration);
  fibration->add_option("--functor", functor, "internal functor name")->required();

  CLI::App* fiber = app.add_subcommand("fiber", "fibers of a groth projection");
  add_common(fiber);
  fiber->add_option("--presheaf", presheaf, "presheaf name")->required();

  CLI::App* terminal = app.add_subcommand("terminal", "internal and V-terminal checks");
  add_common(terminal);
  terminal->add_option("--problem", problem, "terminal problem name");
  terminal->add_option("--internal", internal_name, "internal category name");
  terminal->add_option("--element", element, "element label");

  CLI::App* rep = app.add_subcommand("representable", "representability deciders");
  add_common(rep);
  rep->add_option("--problem", problem, "problem name")->required();
  rep->add_option("--method", method, "direct|elements|shifted|und-tensors|all");

  CLI::App* wl = app.add_subcommand("weighted-limit", "weighted-limit deciders");
  add_common(wl);
  wl->add_option("--problem", problem, "problem name")->required();
  wl->add_option("--method", method, "direct|elements|shifted|conical|und-tensors|all");

  CLI::App* tensor = app.add_subcommand("tensor", "tensor existence and bridge reports");
  add_common(tensor);
  tensor->add_option("--problem", problem, "problem name")->required();

  CLI::App* check = app.add_subcommand("check", "run a named problem by its kind");
  add_common(check);
  check->add_option("--problem", problem, "problem name")->required();
  check->add_option("--method", method, "decision route");
  check->add_flag("--search", "ignored; searching problems declare it in the document");

  CLI::App* roundtrip = app.add_subcommand("roundtrip", "parse/emit stability check");
  add_common(roundtrip);

  CLI::App* gen = app.add_subcommand("gen", "emit a generated instance document");
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--cap", cap, "cell cap");
  gen->add_option("--cosmos", cosmos, "finset|fincat");
  gen->add_option("--fixtures", fixtures_dir, "write into this directory instead of stdout");
  gen->add_option("--report", report_format, "json|text");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      std::string text = vcat::generate_document(
          seed, cap, cosmos == "fincat" ? vcat::CosmosTag::fincat : vcat::CosmosTag::finset);
      if (fixtures_dir.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(fixtures_dir + "/gen-" + std::to_string(seed) + ".json",
                          std::ios::binary);
        out << text;
      }
      return 0;
    }

    std::string text = slurp(file);
    vcat::InstanceDocument doc = vcat::parse_document(text);

    if (roundtrip->parsed()) {
      std::string again = vcat::emit_document(doc);
      bool stable = again == text;
      vcat::RunResult r;
      r.report["command"] = "roundtrip";
      r.report["stable"] = stable;
      r.exit_code = stable ? 0 : 1;
      return emit_report(r, report_format);
    }

    std::map<std::string, std::string> opts;
    if (!problem.empty()) opts["problem"] = problem;
    if (!method.empty()) opts["method"] = method;
    if (!presheaf.empty()) opts["presheaf"] = presheaf;
    if (!functor.empty()) opts["functor"] = functor;
    if (!internal_name.empty()) opts["internal"] = internal_name;
    if (!element.empty()) opts["element"] = element;

    std::string command;
    for (const auto* sub : {validate, grothc, fibration, fiber, terminal, rep, wl, tensor})
      if (sub->parsed()) command = sub->get_name();
    if (check->parsed()) {
      auto it = doc.problems.find(problem);
      if (it == doc.problems.end()) throw vcat::ValidationError("unknown problem '" + problem + "'");
      if (it->second.kind == "representability")
        command = "representable";
      else if (it->second.kind == "weighted-limit")
        command = "weighted-limit";
      else if (it->second.kind == "terminal")
        command = "terminal";
      else
        command = "tensor";
    }

    return emit_report(vcat::run_command(doc, command, opts), report_format);
  } catch (const vcat::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
