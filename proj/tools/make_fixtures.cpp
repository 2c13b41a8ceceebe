// Regenerates the shipped fixture documents and CLI golden files.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "vcat/document.hpp"

using namespace vcat;

namespace {

struct DocBuilder {
  CosmosTag tag;
  Json objects = Json::object();
  Json maps = Json::object();
  std::map<std::string, std::string> obj_names;
  std::size_t oc = 0, mc = 0;

  Json object_payload(const Obj& o) {
    Json j = Json::object();
    if (o.is_finset()) {
      j["elements"] = o.elements();
      return j;
    }
    const FinCatData& c = o.cat();
    j["objects"] = c.objects;
    Json ms = Json::array();
    for (const auto& m : c.morphisms)
      ms.push_back(Json{{"name", m.name}, {"src", m.src}, {"tgt", m.tgt}});
    j["morphisms"] = ms;
    Json ids = Json::object();
    for (const auto& [ob, i] : c.identity) ids[ob] = i;
    j["identities"] = ids;
    Json comp = Json::object();
    for (const auto& [fg, h] : c.comp) comp[fg.first + ";" + fg.second] = h;
    j["composition"] = comp;
    return j;
  }

  std::string add_obj(const Obj& o, const std::string& hint = "") {
    Json payload = object_payload(o);
    std::string key = payload.dump();
    auto it = obj_names.find(key);
    if (it != obj_names.end()) return it->second;
    std::string name = hint.empty() ? "X" + std::to_string(oc++) : hint;
    obj_names[key] = name;
    objects[name] = payload;
    return name;
  }

  std::string add_map(const Map& m, const std::string& hint = "") {
    Json body;
    body["dom"] = add_obj(m.dom);
    body["cod"] = add_obj(m.cod);
    if (tag == CosmosTag::finset) {
      body["on"] = m.on;
    } else {
      body["on_objects"] = m.on;
      body["on_morphisms"] = m.on_mor;
    }
    std::string name = hint.empty() ? "m" + std::to_string(mc++) : hint;
    maps[name] = body;
    return name;
  }

  Json vcategory(const VCategory& c) {
    Json cat;
    cat["objects"] = c.objects;
    Json hom = Json::object(), comp = Json::object(), idm = Json::object();
    for (const auto& [ab, h] : c.hom) hom[ab.first + "," + ab.second] = add_obj(h);
    for (const auto& [abc, m] : c.comp)
      comp[std::get<0>(abc) + "," + std::get<1>(abc) + "," + std::get<2>(abc)] = add_map(m);
    for (const auto& [a, m] : c.ident) idm[a] = add_map(m);
    cat["hom"] = hom;
    cat["comp"] = comp;
    cat["id"] = idm;
    return cat;
  }

  Json presheaf(const VPresheaf& f, const std::string& base_name) {
    Json pre;
    pre["base"] = base_name;
    Json on = Json::object(), ev = Json::object();
    for (const auto& [a, v] : f.onobj) on[a] = add_obj(v);
    for (const auto& [ab, m] : f.ev) ev[ab.first + "," + ab.second] = add_map(m);
    pre["on"] = on;
    pre["ev"] = ev;
    return pre;
  }

  Json functor_to_v(const VFunctorToV& w, const std::string& source_name) {
    Json f;
    f["kind"] = "to-v";
    f["source"] = source_name;
    Json on = Json::object(), ev = Json::object();
    for (const auto& [i, v] : w.onobj) on[i] = add_obj(v);
    for (const auto& [ij, m] : w.ev) ev[ij.first + "," + ij.second] = add_map(m);
    f["on"] = on;
    f["ev"] = ev;
    return f;
  }

  Json functor_cc(const VFunctorCC& g, const std::string& source_name,
                  const std::string& target_name) {
    Json f;
    f["source"] = source_name;
    f["target"] = target_name;
    f["on_objects"] = g.onobj;
    Json hom = Json::object();
    for (const auto& [ab, m] : g.hom_map) hom[ab.first + "," + ab.second] = add_map(m);
    f["hom"] = hom;
    return f;
  }
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  std::cout << "wrote " << path.string() << " (" << text.size() << " bytes)\n";
}

std::string build_p1() {
  testkit::FixtureP1 p1 = testkit::fixture_p1();
  DocBuilder b;
  b.tag = CosmosTag::finset;
  Json j;
  j["cosmos"] = "finset";
  Json vcats = Json::object();
  vcats["C"] = b.vcategory(p1.category);
  Json pres = Json::object();
  pres["F0"] = b.presheaf(p1.f0, "C");
  pres["F1"] = b.presheaf(p1.f1, "C");
  j["vcategories"] = vcats;
  j["presheaves"] = pres;
  Json problems = Json::object();
  problems["repF0at1"] = Json{{"kind", "representability"},
                              {"presheaf", "F0"},
                              {"object", "1"},
                              {"element", "id1"}};
  problems["repF1"] = Json{{"kind", "representability"}, {"presheaf", "F1"}, {"search", true}};
  j["problems"] = problems;
  j["objects"] = b.objects;
  j["maps"] = b.maps;
  return j.dump(2) + "\n";
}

std::string build_p2() {
  testkit::FixtureP2 p2 = testkit::fixture_p2();
  DocBuilder b;
  b.tag = CosmosTag::fincat;
  Json j;
  j["cosmos"] = "fincat";
  std::string xname = b.add_obj(p2.dcat.a0, "X");
  Json internal = Json::object();
  internal["D"] = Json{{"cst", xname}};
  j["internal"] = internal;
  Json problems = Json::object();
  problems["terminalP2"] = Json{{"kind", "terminal"}, {"internal", "D"}, {"element", "p"}};
  problems["bridgeP2"] = Json{{"kind", "tensor-bridge"}, {"internal", "D"}, {"element", "p"}};
  j["problems"] = problems;
  j["objects"] = b.objects;
  j["maps"] = b.maps;
  return j.dump(2) + "\n";
}

std::string build_p3() {
  testkit::FixtureP3 p3 = testkit::fixture_p3();
  DocBuilder b;
  b.tag = CosmosTag::finset;
  Json j;
  j["cosmos"] = "finset";
  Json vcats = Json::object();
  vcats["C"] = b.vcategory(p3.chain);
  vcats["I"] = b.vcategory(p3.shape);
  j["vcategories"] = vcats;
  Json vfs = Json::object();
  vfs["W"] = b.functor_to_v(p3.weight, "I");
  vfs["G"] = b.functor_cc(p3.diagram, "I", "C");
  j["vfunctors"] = vfs;
  // the diagonal cone at x: the constant map from the weight into C(x,x)
  Map lam = compose(bang(p3.weight.at("0")), p3.chain.ident_at("x"));
  std::string lamname = b.add_map(lam, "lamx");
  Json problems = Json::object();
  problems["wlX"] = Json{{"kind", "weighted-limit"},
                         {"weight", "W"},
                         {"diagram", "G"},
                         {"candidate", "x"},
                         {"lambda", Json{{"0", lamname}}}};
  problems["wlTop"] = Json{{"kind", "weighted-limit"},
                           {"weight", "W"},
                           {"diagram", "G"},
                           {"candidate", "top"}};
  j["problems"] = problems;
  j["objects"] = b.objects;
  j["maps"] = b.maps;
  return j.dump(2) + "\n";
}

std::string run_to_text(const InstanceDocument& doc, const std::string& command,
                        const std::map<std::string, std::string>& opts, const std::string& fmt) {
  RunResult r = run_command(doc, command, opts);
  if (fmt == "text") return render_text(r.report);
  return r.report.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::filesystem::path fixtures = argc > 1 ? argv[1] : "fixtures";
  std::filesystem::path golden = argc > 2 ? argv[2] : "tests/golden";
  std::filesystem::create_directories(fixtures);
  std::filesystem::create_directories(golden);

  std::string p1 = build_p1();
  std::string p2 = build_p2();
  std::string p3 = build_p3();
  write_file(fixtures / "P1.json", p1);
  write_file(fixtures / "P2.json", p2);
  write_file(fixtures / "P3.json", p3);

  InstanceDocument d1 = parse_document(p1);
  InstanceDocument d2 = parse_document(p2);
  InstanceDocument d3 = parse_document(p3);

  write_file(golden / "P1_rep_f0.golden",
             run_to_text(d1, "representable", {{"problem", "repF0at1"}, {"method", "all"}}, "json"));
  write_file(golden / "P1_rep_f1_search.golden",
             run_to_text(d1, "representable", {{"problem", "repF1"}}, "json"));
  write_file(golden / "P1_groth_f1.golden",
             run_to_text(d1, "groth", {{"presheaf", "F1"}}, "json"));
  write_file(golden / "P1_fiber_f0.golden", run_to_text(d1, "fiber", {{"presheaf", "F0"}}, "text"));
  write_file(golden / "P2_terminal.golden",
             run_to_text(d2, "terminal", {{"problem", "terminalP2"}}, "json"));
  write_file(golden / "P2_bridge.golden",
             run_to_text(d2, "tensor", {{"problem", "bridgeP2"}}, "text"));
  write_file(golden / "P3_wl_x.golden",
             run_to_text(d3, "weighted-limit", {{"problem", "wlX"}, {"method", "all"}}, "json"));
  write_file(golden / "P3_wl_top.golden",
             run_to_text(d3, "weighted-limit", {{"problem", "wlTop"}, {"method", "all"}}, "text"));
  return 0;
}
