#include "vcat/document.hpp"

#include <algorithm>
#include <sstream>

namespace vcat {

namespace {

std::pair<Label, Label> split_pair_key(const std::string& key, const std::string& where) {
  auto comma = key.find(',');
  if (comma == std::string::npos)
    throw ValidationError(where + ": key '" + key + "' is not of the form 'A,B'");
  return {key.substr(0, comma), key.substr(comma + 1)};
}

std::tuple<Label, Label, Label> split_triple_key(const std::string& key, const std::string& where) {
  auto c1 = key.find(',');
  auto c2 = key.find(',', c1 == std::string::npos ? 0 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw ValidationError(where + ": key '" + key + "' is not of the form 'A,B,C'");
  return {key.substr(0, c1), key.substr(c1 + 1, c2 - c1 - 1), key.substr(c2 + 1)};
}

std::pair<Label, Label> split_semicolon_key(const std::string& key, const std::string& where) {
  auto semi = key.find(';');
  if (semi == std::string::npos)
    throw ValidationError(where + ": key '" + key + "' is not of the form 'f;g'");
  return {key.substr(0, semi), key.substr(semi + 1)};
}

Obj parse_object(const Json& j, CosmosTag tag, const std::string& where) {
  if (tag == CosmosTag::finset) {
    if (!j.contains("elements")) throw ValidationError(where + ": missing 'elements'");
    std::vector<Label> elems;
    for (const auto& e : j.at("elements")) elems.push_back(e.get<std::string>());
    Obj o = Obj::finset(elems);
    o.validate();
    return o;
  }
  FinCatData c;
  for (const auto& o : j.at("objects")) c.objects.push_back(o.get<std::string>());
  if (j.contains("morphisms"))
    for (const auto& m : j.at("morphisms"))
      c.morphisms.push_back({m.at("name").get<std::string>(), m.at("src").get<std::string>(),
                             m.at("tgt").get<std::string>()});
  if (j.contains("identities"))
    for (const auto& [o, i] : j.at("identities").items()) c.identity[o] = i.get<std::string>();
  if (j.contains("composition"))
    for (const auto& [k, v] : j.at("composition").items())
      c.comp[split_semicolon_key(k, where)] = v.get<std::string>();
  Obj o = Obj::fincat(c);
  o.validate();
  return o;
}

Json object_to_json(const Obj& o) {
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

const Obj& ref_object(const InstanceDocument& doc, const std::string& name,
                      const std::string& where) {
  auto it = doc.objects.find(name);
  if (it == doc.objects.end()) throw ValidationError(where + ": unresolved object '" + name + "'");
  return it->second;
}

const Map& ref_map(const InstanceDocument& doc, const std::string& name, const std::string& where) {
  auto it = doc.maps.find(name);
  if (it == doc.maps.end()) throw ValidationError(where + ": unresolved map '" + name + "'");
  return it->second;
}

Map parse_map(const InstanceDocument& doc, const Json& j, const std::string& where) {
  Map m;
  m.dom = ref_object(doc, j.at("dom").get<std::string>(), where);
  m.cod = ref_object(doc, j.at("cod").get<std::string>(), where);
  if (doc.cosmos == CosmosTag::finset) {
    for (const auto& [k, v] : j.at("on").items()) m.on[k] = v.get<std::string>();
  } else {
    for (const auto& [k, v] : j.at("on_objects").items()) m.on[k] = v.get<std::string>();
    for (const auto& [k, v] : j.at("on_morphisms").items()) m.on_mor[k] = v.get<std::string>();
  }
  try {
    m.validate();
  } catch (const Error& e) {
    throw ValidationError(where + ": " + e.what());
  }
  return m;
}

}  // namespace

InstanceDocument parse_document(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("parse error: ") + e.what());
  }
  InstanceDocument doc;
  std::string cosmos = j.value("cosmos", "finset");
  if (cosmos == "finset")
    doc.cosmos = CosmosTag::finset;
  else if (cosmos == "fincat")
    doc.cosmos = CosmosTag::fincat;
  else
    throw ValidationError("cosmos: unknown instance '" + cosmos + "'");

  if (j.contains("objects"))
    for (const auto& [name, body] : j.at("objects").items()) {
      doc.object_names.push_back(name);
      doc.objects.emplace(name, parse_object(body, doc.cosmos, "objects." + name));
    }
  if (j.contains("maps"))
    for (const auto& [name, body] : j.at("maps").items()) {
      doc.map_names.push_back(name);
      doc.maps.emplace(name, parse_map(doc, body, "maps." + name));
    }
  if (j.contains("vcategories"))
    for (const auto& [name, body] : j.at("vcategories").items()) {
      const std::string where = "vcategories." + name;
      VCategory c;
      c.cosmos = doc.cosmos;
      for (const auto& o : body.at("objects")) c.objects.push_back(o.get<std::string>());
      for (const auto& [k, v] : body.at("hom").items())
        c.hom[split_pair_key(k, where)] = ref_object(doc, v.get<std::string>(), where);
      for (const auto& [k, v] : body.at("comp").items())
        c.comp[split_triple_key(k, where)] = ref_map(doc, v.get<std::string>(), where);
      for (const auto& [k, v] : body.at("id").items())
        c.ident[k] = ref_map(doc, v.get<std::string>(), where);
      ValidationReport r = validate_vcategory(c);
      if (!r.ok()) throw ValidationError(where + ": " + r.failures[0]);
      doc.vcategory_names.push_back(name);
      doc.vcategories.emplace(name, std::move(c));
    }
  if (j.contains("presheaves"))
    for (const auto& [name, body] : j.at("presheaves").items()) {
      const std::string where = "presheaves." + name;
      VPresheaf f;
      auto it = doc.vcategories.find(body.at("base").get<std::string>());
      if (it == doc.vcategories.end()) throw ValidationError(where + ": unresolved base");
      f.base = it->second;
      for (const auto& [k, v] : body.at("on").items())
        f.onobj[k] = ref_object(doc, v.get<std::string>(), where);
      for (const auto& [k, v] : body.at("ev").items())
        f.ev[split_pair_key(k, where)] = ref_map(doc, v.get<std::string>(), where);
      ValidationReport r = validate_presheaf(f);
      if (!r.ok()) throw ValidationError(where + ": " + r.failures[0]);
      doc.presheaf_names.push_back(name);
      doc.presheaves.emplace(name, std::move(f));
    }
  if (j.contains("vfunctors"))
    for (const auto& [name, body] : j.at("vfunctors").items()) {
      const std::string where = "vfunctors." + name;
      auto src = doc.vcategories.find(body.at("source").get<std::string>());
      if (src == doc.vcategories.end()) throw ValidationError(where + ": unresolved source");
      if (body.value("kind", "") == "to-v") {
        VFunctorToV f;
        f.source = src->second;
        for (const auto& [k, v] : body.at("on").items())
          f.onobj[k] = ref_object(doc, v.get<std::string>(), where);
        for (const auto& [k, v] : body.at("ev").items())
          f.ev[split_pair_key(k, where)] = ref_map(doc, v.get<std::string>(), where);
        ValidationReport r = validate_vfunctor_to_v(f);
        if (!r.ok()) throw ValidationError(where + ": " + r.failures[0]);
        doc.vfunctor_names.push_back(name);
        doc.vfunctors_to_v.emplace(name, std::move(f));
      } else {
        auto tgt = doc.vcategories.find(body.at("target").get<std::string>());
        if (tgt == doc.vcategories.end()) throw ValidationError(where + ": unresolved target");
        VFunctorCC f;
        f.source = src->second;
        f.target = tgt->second;
        for (const auto& [k, v] : body.at("on_objects").items()) f.onobj[k] = v.get<std::string>();
        for (const auto& [k, v] : body.at("hom").items())
          f.hom_map[split_pair_key(k, where)] = ref_map(doc, v.get<std::string>(), where);
        ValidationReport r = validate_vfunctor_cc(f);
        if (!r.ok()) throw ValidationError(where + ": " + r.failures[0]);
        doc.vfunctor_names.push_back(name);
        doc.vfunctors_cc.emplace(name, std::move(f));
      }
    }
  if (j.contains("vnats"))
    for (const auto& [name, body] : j.at("vnats").items()) {
      const std::string where = "vnats." + name;
      std::string sref = body.at("source").get<std::string>();
      std::string tref = body.at("target").get<std::string>();
      auto sit = doc.presheaves.find(sref);
      auto tit = doc.presheaves.find(tref);
      if (sit == doc.presheaves.end() || tit == doc.presheaves.end())
        throw ValidationError(where + ": unresolved presheaf reference");
      VNat a;
      for (const auto& [k, v] : body.at("components").items())
        a.component[k] = ref_map(doc, v.get<std::string>(), where);
      ValidationReport r = validate_vnat(sit->second, tit->second, a);
      if (!r.ok()) throw ValidationError(where + ": " + r.failures[0]);
      doc.vnat_names.push_back(name);
      doc.vnats.emplace(name, std::move(a));
      doc.vnat_bounds[name] = {sref, tref};
    }
  if (j.contains("internal"))
    for (const auto& [name, body] : j.at("internal").items()) {
      const std::string where = "internal." + name;
      if (body.contains("functor")) {
        const Json& f = body.at("functor");
        auto sit = doc.internal_cats.find(f.at("src").get<std::string>());
        auto tit = doc.internal_cats.find(f.at("tgt").get<std::string>());
        if (sit == doc.internal_cats.end() || tit == doc.internal_cats.end())
          throw ValidationError(where + ": unresolved internal category");
        InternalFunctor h{sit->second, tit->second, ref_map(doc, f.at("h0").get<std::string>(), where),
                          ref_map(doc, f.at("h1").get<std::string>(), where)};
        ValidationReport r = validate_internal_functor(h);
        if (!r.ok()) throw ValidationError(where + ": " + r.failures[0]);
        doc.internal_names.push_back(name);
        doc.internal_functors.emplace(name, std::move(h));
        continue;
      }
      InternalCategory a;
      if (body.contains("cst")) {
        a = cst(ref_object(doc, body.at("cst").get<std::string>(), where));
      } else if (body.contains("int")) {
        auto it = doc.vcategories.find(body.at("int").get<std::string>());
        if (it == doc.vcategories.end()) throw ValidationError(where + ": unresolved category");
        Internalization ic = internalize(it->second);
        a = ic.cat;
        doc.internalizations.emplace(name, std::move(ic));
      } else {
        const Obj& a0 = ref_object(doc, body.at("A0").get<std::string>(), where);
        const Obj& a1 = ref_object(doc, body.at("A1").get<std::string>(), where);
        Map s = ref_map(doc, body.at("s").get<std::string>(), where);
        Map t = ref_map(doc, body.at("t").get<std::string>(), where);
        Map i = ref_map(doc, body.at("i").get<std::string>(), where);
        std::map<std::pair<Label, Label>, Label> ctable, ctable_mor;
        if (body.contains("composition"))
          for (const auto& [k, v] : body.at("composition").items())
            ctable[split_semicolon_key(k, where)] = v.get<std::string>();
        if (body.contains("composition_morphisms"))
          for (const auto& [k, v] : body.at("composition_morphisms").items())
            ctable_mor[split_semicolon_key(k, where)] = v.get<std::string>();
        a = assemble_internal(a0, a1, s, t, i, [&](const Pull& k) {
          Map c;
          c.dom = k.obj;
          c.cod = a1;
          for (const auto& [fg, h] : ctable) c.on[pair_label(fg.first, fg.second)] = h;
          for (const auto& [fg, h] : ctable_mor) c.on_mor[pair_label(fg.first, fg.second)] = h;
          try {
            c.validate();
          } catch (const Error& e) {
            throw ValidationError(where + ": composition table: " + e.what());
          }
          return c;
        });
      }
      ValidationReport r = validate_internal(a);
      if (!r.ok()) throw ValidationError(where + ": " + r.failures[0]);
      doc.internal_names.push_back(name);
      doc.internal_cats.emplace(name, std::move(a));
    }
  if (j.contains("problems"))
    for (const auto& [name, body] : j.at("problems").items()) {
      ProblemSpec p;
      p.kind = body.at("kind").get<std::string>();
      for (const auto& [k, v] : body.items()) {
        if (k == "kind" || k == "lambda" || k == "search") continue;
        p.refs[k] = v.get<std::string>();
      }
      if (body.contains("lambda"))
        for (const auto& [k, v] : body.at("lambda").items()) p.lambda[k] = v.get<std::string>();
      p.search = body.value("search", false);
      doc.problem_names.push_back(name);
      doc.problems.emplace(name, std::move(p));
    }
  doc.source = j;
  return doc;
}

std::string emit_document(const InstanceDocument& doc) {
  // canonical form: objects with sorted keys, two-space indent
  return doc.source.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// command dispatch

namespace {

std::string verdict_str(Verdict v) {
  switch (v) {
    case Verdict::True:
      return "true";
    case Verdict::False:
      return "false";
    default:
      return "not-applicable";
  }
}

const ProblemSpec& need_problem(const InstanceDocument& doc,
                                const std::map<std::string, std::string>& opts,
                                const std::string& kind) {
  auto it = opts.find("problem");
  if (it == opts.end()) throw ValidationError("missing --problem");
  auto pit = doc.problems.find(it->second);
  if (pit == doc.problems.end()) throw ValidationError("unknown problem '" + it->second + "'");
  if (pit->second.kind != kind && !(kind == "tensor" && pit->second.kind == "tensor-bridge"))
    throw ValidationError("problem '" + it->second + "' has kind '" + pit->second.kind + "'");
  return pit->second;
}

const std::string& need_ref(const ProblemSpec& p, const std::string& key) {
  auto it = p.refs.find(key);
  if (it == p.refs.end()) throw ValidationError("problem misses reference '" + key + "'");
  return it->second;
}

WeightedLimitProblem build_weighted_problem(const InstanceDocument& doc, const ProblemSpec& p) {
  WeightedLimitProblem out;
  auto wit = doc.vfunctors_to_v.find(need_ref(p, "weight"));
  if (wit == doc.vfunctors_to_v.end()) throw ValidationError("unresolved weight");
  auto git = doc.vfunctors_cc.find(need_ref(p, "diagram"));
  if (git == doc.vfunctors_cc.end()) throw ValidationError("unresolved diagram");
  out.weight = wit->second;
  out.diagram = git->second;
  out.c = out.diagram.target;
  out.candidate = need_ref(p, "candidate");
  if (!p.lambda.empty()) {
    CovVNat lam;
    for (const auto& [i, mref] : p.lambda) {
      auto mit = doc.maps.find(mref);
      if (mit == doc.maps.end()) throw ValidationError("unresolved lambda component '" + mref + "'");
      lam.component[i] = mit->second;
    }
    out.lambda = lam;
  }
  ValidationReport r = validate_weighted_problem(out);
  if (!r.ok()) throw ValidationError("weighted-limit problem invalid: " + r.failures[0]);
  return out;
}

Json run_validate(const InstanceDocument& doc) {
  // entities were validated on load; re-run and report per entity
  Json entities = Json::object();
  for (const auto& [name, c] : doc.vcategories)
    entities["vcategories." + name] = validate_vcategory(c).ok() ? "ok" : "invalid";
  for (const auto& [name, f] : doc.presheaves)
    entities["presheaves." + name] = validate_presheaf(f).ok() ? "ok" : "invalid";
  for (const auto& [name, f] : doc.vfunctors_to_v)
    entities["vfunctors." + name] = validate_vfunctor_to_v(f).ok() ? "ok" : "invalid";
  for (const auto& [name, f] : doc.vfunctors_cc)
    entities["vfunctors." + name] = validate_vfunctor_cc(f).ok() ? "ok" : "invalid";
  for (const auto& [name, a] : doc.internal_cats)
    entities["internal." + name] = validate_internal(a).ok() ? "ok" : "invalid";
  for (const auto& [name, h] : doc.internal_functors)
    entities["internal." + name] = validate_internal_functor(h).ok() ? "ok" : "invalid";
  Json report;
  report["command"] = "validate";
  report["entities"] = entities;
  report["ok"] = true;
  return report;
}

}  // namespace

RunResult run_command(const InstanceDocument& doc, const std::string& command,
                      const std::map<std::string, std::string>& opts) {
  RunResult out;
  auto opt = [&](const std::string& k) -> std::string {
    auto it = opts.find(k);
    return it == opts.end() ? std::string() : it->second;
  };
  const std::string method = opt("method").empty() ? "all" : opt("method");

  if (command == "validate") {
    out.report = run_validate(doc);
    return out;
  }

  if (command == "groth") {
    std::string pname = opt("presheaf");
    auto it = doc.presheaves.find(pname);
    if (it == doc.presheaves.end()) throw ValidationError("unknown presheaf '" + pname + "'");
    GrothResult gr = groth(it->second.base, it->second);
    FibrationPacket pk = analyze_groth_packet(gr);
    out.report["command"] = "groth";
    out.report["presheaf"] = pname;
    out.report["level0_cells"] = gr.total.a0.cell_count();
    out.report["level1_cells"] = gr.total.a1.cell_count();
    out.report["fibration_certificate"] = pk.certificate;
    out.exit_code = pk.certificate ? 0 : 1;
    return out;
  }

  if (command == "fibration") {
    std::string fname = opt("functor");
    auto it = doc.internal_functors.find(fname);
    if (it == doc.internal_functors.end())
      throw ValidationError("unknown internal functor '" + fname + "'");
    FibrationPacket pk = is_discrete_fibration(it->second);
    FibrationPacket op = is_discrete_opfibration(it->second);
    out.report["command"] = "fibration";
    out.report["functor"] = fname;
    out.report["discrete_fibration"] = pk.certificate;
    out.report["discrete_opfibration"] = op.certificate;
    out.exit_code = pk.certificate ? 0 : 1;
    return out;
  }

  if (command == "fiber") {
    std::string pname = opt("presheaf");
    auto it = doc.presheaves.find(pname);
    if (it == doc.presheaves.end()) throw ValidationError("unknown presheaf '" + pname + "'");
    GrothResult gr = groth(it->second.base, it->second);
    FibrationPacket pk = analyze_groth_packet(gr);
    Json fibers = Json::object();
    for (const auto& [a, fib] : pk.fibers) {
      Json rec;
      rec["cells"] = fib.cell_count();
      rec["labels"] = fib.is_finset() ? Json(fib.elements()) : Json(fib.cat().objects);
      fibers[a] = rec;
    }
    out.report["command"] = "fiber";
    out.report["presheaf"] = pname;
    out.report["fibers"] = fibers;
    return out;
  }

  if (command == "terminal") {
    std::string iname = opt("internal");
    std::string elt = opt("element");
    if (iname.empty() || elt.empty()) {
      const ProblemSpec& p = need_problem(doc, opts, "terminal");
      iname = need_ref(p, "internal");
      elt = need_ref(p, "element");
    }
    auto it = doc.internal_cats.find(iname);
    if (it == doc.internal_cats.end()) throw ValidationError("unknown internal category '" + iname + "'");
    Map pt = global_element(it->second.a0, elt);
    bool internal_t = is_internal_terminal(it->second, {it->second, pt});
    bool und_t = is_v_terminal(underlying(it->second), elt);
    out.report["command"] = "terminal";
    out.report["internal"] = iname;
    out.report["element"] = elt;
    out.report["internal_terminal"] = internal_t;
    out.report["v_terminal_underlying"] = und_t;
    out.exit_code = internal_t ? 0 : 1;
    return out;
  }

  if (command == "representable" || (command == "check" && opt("problem").size())) {
    const ProblemSpec& p = need_problem(doc, opts, "representability");
    auto fit = doc.presheaves.find(need_ref(p, "presheaf"));
    if (fit == doc.presheaves.end()) throw ValidationError("unresolved presheaf");
    const VPresheaf& f = fit->second;
    out.report["command"] = "representable";
    out.report["problem"] = opt("problem");
    if (p.search) {
      auto reps = find_representations(f);
      Json arr = Json::array();
      for (const auto& r : reps)
        arr.push_back(Json{{"object", r.object}, {"element", point_label(r.point)}});
      out.report["representations"] = arr;
      out.report["verdict"] = reps.empty() ? "no representation" : "representable";
      out.exit_code = reps.empty() ? 1 : 0;
      return out;
    }
    const std::string cobj = need_ref(p, "object");
    Map x = global_element(f.at(cobj), need_ref(p, "element"));
    Json methods = Json::object();
    Verdict direct = Verdict::NotApplicable;
    auto run_method = [&](const std::string& name, auto&& fn) {
      if (method != "all" && method != name) return;
      Verdict v;
      try {
        v = fn() ? Verdict::True : Verdict::False;
      } catch (const HypothesisError&) {
        v = Verdict::NotApplicable;
      }
      methods[name] = verdict_str(v);
      if (direct == Verdict::NotApplicable || name == "direct") direct = v;
    };
    run_method("direct", [&] { return is_representable_direct(f, cobj, x); });
    run_method("elements", [&] { return is_representable_via_elements(f, cobj, x); });
    run_method("shifted", [&] { return is_representable_via_shifted(f, cobj, x); });
    run_method("und-tensors", [&] { return is_representable_via_und_tensors(f, cobj, x); });
    out.report["methods"] = methods;
    out.report["verdict"] = verdict_str(direct);
    out.exit_code = direct == Verdict::True ? 0 : (direct == Verdict::False ? 1 : 2);
    return out;
  }

  if (command == "weighted-limit") {
    const ProblemSpec& p = need_problem(doc, opts, "weighted-limit");
    WeightedLimitProblem wp = build_weighted_problem(doc, p);
    Json methods = Json::object();
    Verdict overall = Verdict::NotApplicable;
    auto run_method = [&](const std::string& name, auto&& fn) {
      if (method != "all" && method != name) return;
      Verdict v;
      try {
        v = fn() ? Verdict::True : Verdict::False;
      } catch (const HypothesisError&) {
        v = Verdict::NotApplicable;
      }
      methods[name] = verdict_str(v);
      if (overall == Verdict::NotApplicable || name == "direct") overall = v;
    };
    run_method("direct", [&] { return is_weighted_limit_direct(wp); });
    run_method("elements", [&] { return is_weighted_limit_elements(wp); });
    run_method("shifted", [&] { return is_weighted_limit_shifted(wp); });
    run_method("conical", [&] { return is_weighted_limit_conical(wp); });
    run_method("und-tensors", [&] { return is_weighted_limit_und_tensors(wp); });
    out.report["command"] = "weighted-limit";
    out.report["problem"] = opt("problem");
    out.report["methods"] = methods;
    out.report["verdict"] = verdict_str(overall);
    out.exit_code = overall == Verdict::True ? 0 : (overall == Verdict::False ? 1 : 2);
    return out;
  }

  if (command == "tensor") {
    const ProblemSpec& p = need_problem(doc, opts, "tensor");
    out.report["command"] = "tensor";
    out.report["problem"] = opt("problem");
    if (p.kind == "tensor-bridge") {
      auto it = doc.internal_cats.find(need_ref(p, "internal"));
      if (it == doc.internal_cats.end()) throw ValidationError("unresolved internal category");
      Map pt = global_element(it->second.a0, need_ref(p, "element"));
      TensorBridgeReport r = tensor_bridge_terminal(it->second, {it->second, pt});
      out.report["hypotheses_hold"] = r.hypotheses_hold;
      out.report["internal_terminal"] = r.internal_terminal;
      out.report["und_v_terminal"] = r.und_v_terminal;
      out.report["shifted"] = r.shifted_per_probe;
      out.report["divergence"] = r.divergence;
      out.report["divergence_under_hypotheses"] = r.divergence_under_hypotheses;
      out.exit_code = r.divergence_under_hypotheses ? 1 : 0;
      return out;
    }
    auto it = doc.vcategories.find(need_ref(p, "vcategory"));
    if (it == doc.vcategories.end()) throw ValidationError("unresolved category");
    Json probes = Json::array();
    bool all = true;
    std::size_t probe_index = 0;
    for (const auto& probe : generators(doc.cosmos).probes) {
      Json rec;
      rec["probe"] = "generator" + std::to_string(probe_index++);
      auto w = has_v_tensors(it->second, probe);
      if (!w.has_value()) {
        rec["tensors"] = "none";
        all = false;
      } else {
        Json tens = Json::object();
        for (const auto& [c, tw] : *w) tens[c] = tw.tensor_object;
        rec["tensors"] = tens;
      }
      probes.push_back(rec);
    }
    out.report["probes"] = probes;
    out.report["verdict"] = all ? "true" : "false";
    out.exit_code = all ? 0 : 1;
    return out;
  }

  throw ValidationError("unknown command '" + command + "'");
}

std::string generate_document(std::uint64_t seed, std::size_t cap, CosmosTag cosmos) {
  testkit::Rng rng(seed);
  testkit::GenConfig cfg;
  cfg.seed = seed;
  cfg.cosmos = cosmos;
  cfg.max_cells = cap;
  VCategory c0 = testkit::gen_vcategory(rng, cfg);
  VPresheaf f0 = testkit::gen_presheaf(rng, cfg, c0);

  // object labels appear inside compound document keys, so rename them to a
  // comma-free alphabet
  std::map<Label, Label> rename;
  for (std::size_t k = 0; k < c0.objects.size(); ++k) rename[c0.objects[k]] = "o" + std::to_string(k);
  VCategory c;
  c.cosmos = c0.cosmos;
  for (const auto& o : c0.objects) c.objects.push_back(rename.at(o));
  for (const auto& [ab, h] : c0.hom) c.hom[{rename.at(ab.first), rename.at(ab.second)}] = h;
  for (const auto& [abc, m] : c0.comp)
    c.comp[{rename.at(std::get<0>(abc)), rename.at(std::get<1>(abc)), rename.at(std::get<2>(abc))}] = m;
  for (const auto& [a, m] : c0.ident) c.ident[rename.at(a)] = m;
  VPresheaf f;
  f.base = c;
  for (const auto& [a, v] : f0.onobj) f.onobj[rename.at(a)] = v;
  for (const auto& [ab, m] : f0.ev) f.ev[{rename.at(ab.first), rename.at(ab.second)}] = m;

  Json j;
  j["cosmos"] = cosmos == CosmosTag::finset ? "finset" : "fincat";
  Json objects = Json::object();
  Json maps = Json::object();
  std::map<std::string, std::string> obj_name;  // by serialized payload
  std::size_t obj_counter = 0, map_counter = 0;
  auto name_object = [&](const Obj& o) {
    std::string key = object_to_json(o).dump();
    auto it = obj_name.find(key);
    if (it != obj_name.end()) return it->second;
    std::string name = "X" + std::to_string(obj_counter++);
    obj_name[key] = name;
    objects[name] = object_to_json(o);
    return name;
  };
  auto name_map = [&](const Map& m) {
    Json body;
    body["dom"] = name_object(m.dom);
    body["cod"] = name_object(m.cod);
    if (cosmos == CosmosTag::finset) {
      body["on"] = m.on;
    } else {
      body["on_objects"] = m.on;
      body["on_morphisms"] = m.on_mor;
    }
    std::string name = "m" + std::to_string(map_counter++);
    maps[name] = body;
    return name;
  };

  Json cat;
  cat["objects"] = c.objects;
  Json hom = Json::object(), comp = Json::object(), idm = Json::object();
  for (const auto& [ab, h] : c.hom) hom[ab.first + "," + ab.second] = name_object(h);
  for (const auto& [abc, m] : c.comp)
    comp[std::get<0>(abc) + "," + std::get<1>(abc) + "," + std::get<2>(abc)] = name_map(m);
  for (const auto& [a, m] : c.ident) idm[a] = name_map(m);
  cat["hom"] = hom;
  cat["comp"] = comp;
  cat["id"] = idm;

  Json pre;
  pre["base"] = "C";
  Json on = Json::object(), ev = Json::object();
  for (const auto& [a, v] : f.onobj) on[a] = name_object(v);
  for (const auto& [ab, m] : f.ev) ev[ab.first + "," + ab.second] = name_map(m);
  pre["on"] = on;
  pre["ev"] = ev;

  j["objects"] = objects;
  j["maps"] = maps;
  j["vcategories"] = Json{{"C", cat}};
  j["presheaves"] = Json{{"F", pre}};
  Json problems = Json::object();
  problems["repF"] = Json{{"kind", "representability"}, {"presheaf", "F"}, {"search", true}};
  j["problems"] = problems;
  return j.dump(2) + "\n";
}

std::string render_text(const Json& report) {
  std::ostringstream os;
  std::function<void(const Json&, const std::string&)> walk = [&](const Json& j,
                                                                  const std::string& path) {
    if (j.is_object()) {
      for (const auto& [k, v] : j.items()) walk(v, path.empty() ? k : path + "." + k);
    } else if (j.is_array()) {
      std::size_t idx = 0;
      for (const auto& v : j) walk(v, path + "[" + std::to_string(idx++) + "]");
      if (j.empty()) os << path << " = []\n";
    } else {
      os << path << " = " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
  };
  walk(report, "");
  return os.str();
}

}  // namespace vcat
