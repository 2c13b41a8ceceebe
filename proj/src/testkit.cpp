#include "vcat/testkit.hpp"

#include <algorithm>

namespace vcat::testkit {

namespace {

Map table_map(const Obj& dom, const Obj& cod, std::map<Label, Label> on) {
  Map m;
  m.dom = dom;
  m.cod = cod;
  m.on = std::move(on);
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// fixtures

FixtureP1 fixture_p1() {
  FixtureP1 out;
  VCategory c;
  c.cosmos = CosmosTag::finset;
  c.objects = {"0", "1"};
  Obj h00 = Obj::finset({"id0"});
  Obj h01 = Obj::finset({"f"});
  Obj h11 = Obj::finset({"id1"});
  Obj h10 = Obj::finset({});
  c.hom = {{{"0", "0"}, h00}, {{"0", "1"}, h01}, {{"1", "0"}, h10}, {{"1", "1"}, h11}};
  c.ident["0"] = table_map(terminal(CosmosTag::finset), h00, {{"*", "id0"}});
  c.ident["1"] = table_map(terminal(CosmosTag::finset), h11, {{"*", "id1"}});
  for (const auto& a : c.objects)
    for (const auto& b : c.objects)
      for (const auto& d : c.objects) {
        Prod pr = product(c.hom_at(a, b), c.hom_at(b, d));
        Map m;
        m.dom = pr.obj;
        m.cod = c.hom_at(a, d);
        for (const auto& p : pr.obj.elements()) {
          Label g = pr.p0(p), h = pr.p1(p);
          // unit laws force every composite in the walking arrow
          m.on[p] = (g == "id0" || g == "id1") ? h : (h == "id1" ? g : h);
        }
        c.comp[{a, b, d}] = std::move(m);
      }
  out.category = c;
  out.f0 = representable(c, "1");

  VPresheaf f1;
  f1.base = c;
  Obj v0 = Obj::finset({"c"});
  Obj v1 = Obj::finset({"a", "b"});
  f1.onobj = {{"0", v0}, {"1", v1}};
  {
    Prod pr = product(h00, v0);
    f1.ev[{"0", "0"}] = table_map(pr.obj, v0, {{pair_label("id0", "c"), "c"}});
  }
  {
    Prod pr = product(h01, v1);
    f1.ev[{"0", "1"}] =
        table_map(pr.obj, v0, {{pair_label("f", "a"), "c"}, {pair_label("f", "b"), "c"}});
  }
  {
    Prod pr = product(h10, v0);
    f1.ev[{"1", "0"}] = table_map(pr.obj, v1, {});
  }
  {
    Prod pr = product(h11, v1);
    f1.ev[{"1", "1"}] =
        table_map(pr.obj, v1, {{pair_label("id1", "a"), "a"}, {pair_label("id1", "b"), "b"}});
  }
  out.f1 = f1;
  return out;
}

FixtureP2 fixture_p2() {
  FixtureP2 out;
  FinCatData x;
  x.objects = {"p"};
  x.morphisms = {{"idp", "p", "p"}, {"v", "p", "p"}};
  x.identity["p"] = "idp";
  x.comp[{"idp", "idp"}] = "idp";
  x.comp[{"idp", "v"}] = "v";
  x.comp[{"v", "idp"}] = "v";
  x.comp[{"v", "v"}] = "v";
  Obj xo = Obj::fincat(x);
  out.dcat = cst(xo);
  out.object = global_element(xo, "p");
  return out;
}

FixtureP3 fixture_p3() {
  FixtureP3 out;
  std::vector<Label> objs = {"bot", "x", "top"};
  auto rank = [](const Label& a) { return a == "bot" ? 0 : (a == "x" ? 1 : 2); };
  out.chain = poset_vcat(CosmosTag::finset, objs,
                         [rank](const Label& a, const Label& b) { return rank(a) <= rank(b); });
  out.shape = unit_vcat(CosmosTag::finset);
  out.weight.source = out.shape;
  Obj w0 = Obj::finset({"w0", "w1"});
  out.weight.onobj["0"] = w0;
  out.weight.ev[{"0", "0"}] = product(w0, terminal(CosmosTag::finset)).p0;
  out.diagram.source = out.shape;
  out.diagram.target = out.chain;
  out.diagram.onobj["0"] = "x";
  out.diagram.hom_map[{"0", "0"}] = identity(terminal(CosmosTag::finset));
  return out;
}

// ---------------------------------------------------------------------------
// generators

Obj gen_object(Rng& rng, const GenConfig& cfg) {
  std::size_t n = rng.below(cfg.max_cells + 1);
  if (cfg.cosmos == CosmosTag::finset) {
    std::vector<Label> elems;
    for (std::size_t k = 0; k < n; ++k) elems.push_back("e" + std::to_string(k));
    return Obj::finset(elems);
  }
  if (n >= 2 && rng.coin()) return generators(CosmosTag::fincat).probes[0];
  FinCatData c;
  for (std::size_t k = 0; k < n; ++k) {
    Label o = "d" + std::to_string(k);
    c.objects.push_back(o);
    c.morphisms.push_back({"id" + o, o, o});
    c.identity[o] = "id" + o;
    c.comp[{"id" + o, "id" + o}] = "id" + o;
  }
  return Obj::fincat(c);
}

namespace {

VCategory gen_poset(Rng& rng, const GenConfig& cfg, CosmosTag tag) {
  std::size_t n = 1 + rng.below(cfg.max_objects);
  std::vector<Label> objs;
  for (std::size_t k = 0; k < n; ++k) objs.push_back("P" + std::to_string(k));
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) leq[i][i] = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) leq[i][j] = rng.coin();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (leq[i][k] && leq[k][j]) leq[i][j] = true;
  auto index = [objs](const Label& a) {
    return static_cast<std::size_t>(std::find(objs.begin(), objs.end(), a) - objs.begin());
  };
  return poset_vcat(tag, objs,
                    [leq, index](const Label& a, const Label& b) { return leq[index(a)][index(b)]; });
}

// two objects with an n-element bridging hom; composition forced by units
VCategory gen_fat_bridge(Rng& rng, const GenConfig& cfg) {
  VCategory c;
  c.cosmos = CosmosTag::finset;
  c.objects = {"L", "R"};
  std::size_t n = 1 + rng.below(std::max<std::size_t>(1, cfg.max_cells - 1));
  std::vector<Label> bridge;
  for (std::size_t k = 0; k < n; ++k) bridge.push_back("b" + std::to_string(k));
  Obj hLL = Obj::finset({"idL"});
  Obj hRR = Obj::finset({"idR"});
  Obj hLR = Obj::finset(bridge);
  Obj hRL = Obj::finset({});
  c.hom = {{{"L", "L"}, hLL}, {{"L", "R"}, hLR}, {{"R", "L"}, hRL}, {{"R", "R"}, hRR}};
  c.ident["L"] = table_map(terminal(CosmosTag::finset), hLL, {{"*", "idL"}});
  c.ident["R"] = table_map(terminal(CosmosTag::finset), hRR, {{"*", "idR"}});
  for (const auto& a : c.objects)
    for (const auto& b : c.objects)
      for (const auto& d : c.objects) {
        Prod pr = product(c.hom_at(a, b), c.hom_at(b, d));
        Map m;
        m.dom = pr.obj;
        m.cod = c.hom_at(a, d);
        for (const auto& p : pr.obj.elements()) {
          Label g = pr.p0(p), h = pr.p1(p);
          m.on[p] = (g == "idL" || g == "idR") ? h : g;
        }
        c.comp[{a, b, d}] = std::move(m);
      }
  return c;
}

Obj discrete_of(const Obj& s) {
  FinCatData d;
  for (const auto& e : s.elements()) {
    d.objects.push_back(e);
    d.morphisms.push_back({"id:" + e, e, e});
    d.identity[e] = "id:" + e;
    d.comp[{"id:" + e, "id:" + e}] = "id:" + e;
  }
  return Obj::fincat(d);
}

}  // namespace

VCategory discrete_enrich(const VCategory& c) {
  if (c.cosmos != CosmosTag::finset)
    throw Error("discrete_enrich expects a finset-enriched category");
  VCategory out;
  out.cosmos = CosmosTag::fincat;
  out.objects = c.objects;
  for (const auto& [ab, h] : c.hom) out.hom[ab] = discrete_of(h);
  for (const auto& [a, ia] : c.ident) {
    const Obj& h = out.hom.at({a, a});
    Label e = ia("*");
    Map m;
    m.dom = terminal(CosmosTag::fincat);
    m.cod = h;
    m.on["*"] = e;
    m.on_mor["id*"] = "id:" + e;
    out.ident[a] = std::move(m);
  }
  for (const auto& [abc, cm] : c.comp) {
    auto [a, b, d] = abc;
    Prod pr = product(out.hom.at({a, b}), out.hom.at({b, d}));
    Map m;
    m.dom = pr.obj;
    m.cod = out.hom.at({a, d});
    for (const auto& o : pr.obj.cat().objects) m.on[o] = cm(o);
    for (const auto& r : pr.obj.cat().morphisms) m.on_mor[r.name] = "id:" + cm(r.src);
    out.comp[abc] = std::move(m);
  }
  return out;
}

VPresheaf discrete_enrich_presheaf(const VCategory& cat2, const VPresheaf& f) {
  VPresheaf out;
  out.base = cat2;
  for (const auto& [a, v] : f.onobj) out.onobj[a] = discrete_of(v);
  for (const auto& [ab, e] : f.ev) {
    Prod pr = product(cat2.hom_at(ab.first, ab.second), out.onobj.at(ab.second));
    Map m;
    m.dom = pr.obj;
    m.cod = out.onobj.at(ab.first);
    for (const auto& o : pr.obj.cat().objects) m.on[o] = e(o);
    for (const auto& r : pr.obj.cat().morphisms) m.on_mor[r.name] = "id:" + e(r.src);
    out.ev[ab] = std::move(m);
  }
  return out;
}

VCategory gen_vcategory(Rng& rng, const GenConfig& cfg) {
  if (cfg.cosmos == CosmosTag::fincat) {
    GenConfig sub = cfg;
    sub.cosmos = CosmosTag::finset;
    return discrete_enrich(gen_vcategory(rng, sub));
  }
  switch (rng.below(4)) {
    case 0:
    case 1:
      return gen_poset(rng, cfg, cfg.cosmos);
    case 2:
      return gen_fat_bridge(rng, cfg);
    default: {
      GenConfig sub = cfg;
      sub.max_objects = 2;
      sub.max_cells = std::max<std::size_t>(2, cfg.max_cells / 2);
      VCategory a = rng.coin() ? gen_poset(rng, sub, cfg.cosmos) : gen_fat_bridge(rng, sub);
      VCategory b = gen_poset(rng, sub, cfg.cosmos);
      VCategory p = product_vcat(a, b);
      if (p.objects.size() > cfg.max_objects) return a;
      return p;
    }
  }
}

VPresheaf gen_presheaf(Rng& rng, const GenConfig& cfg, const VCategory& c) {
  if (c.cosmos == CosmosTag::fincat) {
    // locally discrete base: lift a finset presheaf on the flattened category
    VCategory flat;
    flat.cosmos = CosmosTag::finset;
    flat.objects = c.objects;
    for (const auto& [ab, h] : c.hom) flat.hom[ab] = Obj::finset(h.cat().objects);
    for (const auto& [a, ia] : c.ident)
      flat.ident[a] = table_map(terminal(CosmosTag::finset), flat.hom.at({a, a}), {{"*", ia("*")}});
    for (const auto& [abc, cm] : c.comp) {
      auto [a, b, d] = abc;
      Prod pr = product(flat.hom.at({a, b}), flat.hom.at({b, d}));
      Map m;
      m.dom = pr.obj;
      m.cod = flat.hom.at({a, d});
      for (const auto& p : pr.obj.elements()) m.on[p] = cm(p);
      flat.comp[abc] = std::move(m);
    }
    GenConfig sub = cfg;
    sub.cosmos = CosmosTag::finset;
    return discrete_enrich_presheaf(c, gen_presheaf(rng, sub, flat));
  }
  switch (rng.below(5)) {
    case 0: {
      std::size_t n = rng.below(cfg.max_cells + 1);
      std::vector<Label> elems;
      for (std::size_t k = 0; k < n; ++k) elems.push_back("k" + std::to_string(k));
      return constant_presheaf(c, Obj::finset(elems));
    }
    case 1:
    case 2:
      return representable(c, c.objects[rng.below(c.objects.size())]);
    case 3: {
      VPresheaf f = gen_presheaf(rng, cfg, c);
      VPresheaf g = representable(c, c.objects[rng.below(c.objects.size())]);
      return product_presheaf(f, g);
    }
    default: {
      if (rng.coin()) {
        Label target = c.objects[rng.below(c.objects.size())];
        VFunctorCC k;
        k.source = c;
        k.target = c;
        for (const auto& a : c.objects) k.onobj[a] = target;
        for (const auto& a : c.objects)
          for (const auto& b : c.objects)
            k.hom_map[{a, b}] = compose(bang(c.hom_at(a, b)), c.ident_at(target));
        return restrict_presheaf(k, gen_presheaf(rng, cfg, c));
      }
      return gen_presheaf(rng, cfg, c);
    }
  }
}

VFunctorCC gen_vfunctor(Rng& rng, const GenConfig& cfg, const VCategory& src) {
  (void)cfg;
  VFunctorCC k;
  k.source = src;
  k.target = src;
  if (rng.coin()) {
    for (const auto& a : src.objects) k.onobj[a] = a;
    for (const auto& a : src.objects)
      for (const auto& b : src.objects) k.hom_map[{a, b}] = identity(src.hom_at(a, b));
    return k;
  }
  Label target = src.objects[rng.below(src.objects.size())];
  for (const auto& a : src.objects) k.onobj[a] = target;
  for (const auto& a : src.objects)
    for (const auto& b : src.objects)
      k.hom_map[{a, b}] = compose(bang(src.hom_at(a, b)), src.ident_at(target));
  return k;
}

InternalCategory gen_internal(Rng& rng, const GenConfig& cfg) {
  if (rng.coin()) return internalize(gen_vcategory(rng, cfg)).cat;
  return cst(gen_object(rng, cfg));
}

namespace {

// an isomorphic rename (and reshuffle) of every cell of an internal category
InternalFunctor relabel_iso(Rng& rng, const InternalCategory& a) {
  auto renamed = [&rng](const Obj& x, const std::string& prefix) -> std::pair<Obj, Map> {
    if (x.is_finset()) {
      std::vector<Label> fresh;
      for (std::size_t k = 0; k < x.elements().size(); ++k)
        fresh.push_back(prefix + std::to_string(k));
      for (std::size_t k = fresh.size(); k > 1; --k) std::swap(fresh[k - 1], fresh[rng.below(k)]);
      Obj y = Obj::finset(fresh);
      Map iso;
      iso.dom = x;
      iso.cod = y;
      for (std::size_t k = 0; k < fresh.size(); ++k) iso.on[x.elements()[k]] = fresh[k];
      return {y, iso};
    }
    const FinCatData& c = x.cat();
    std::map<Label, Label> ro, rm;
    FinCatData d;
    for (std::size_t k = 0; k < c.objects.size(); ++k)
      ro[c.objects[k]] = prefix + "o" + std::to_string(k);
    for (std::size_t k = 0; k < c.morphisms.size(); ++k)
      rm[c.morphisms[k].name] = prefix + "m" + std::to_string(k);
    for (const auto& o : c.objects) d.objects.push_back(ro.at(o));
    for (const auto& m : c.morphisms)
      d.morphisms.push_back({rm.at(m.name), ro.at(m.src), ro.at(m.tgt)});
    for (const auto& [o, i] : c.identity) d.identity[ro.at(o)] = rm.at(i);
    for (const auto& [fg, h] : c.comp) d.comp[{rm.at(fg.first), rm.at(fg.second)}] = rm.at(h);
    Obj y = Obj::fincat(d);
    Map iso;
    iso.dom = x;
    iso.cod = y;
    iso.on = ro;
    iso.on_mor = rm;
    return {y, iso};
  };
  auto [b0, iso0] = renamed(a.a0, "r");
  auto [b1, iso1] = renamed(a.a1, "q");
  Map inv0 = invert(iso0);
  Map inv1 = invert(iso1);
  InternalCategory b = assemble_internal(
      b0, b1, compose(inv1, compose(a.s, iso0)), compose(inv1, compose(a.t, iso0)),
      compose(inv0, compose(a.i, iso1)), [&](const Pull& k) {
        Map toka = a.composable.induce(compose(k.p0, inv1), compose(k.p1, inv1));
        return compose(toka, compose(a.c, iso1));
      });
  return {a, b, iso0, iso1};
}

}  // namespace

GenFibration gen_fibration(Rng& rng, const GenConfig& cfg, const Internalization& base,
                           const VPresheaf& f) {
  (void)cfg;
  GenFibration out;
  out.base = base;
  out.seed = f;
  GrothResult gr = groth(base, f);
  if (rng.coin()) {
    out.packet = analyze_groth_packet(gr);
    return out;
  }
  InternalFunctor iso = relabel_iso(rng, gr.total);
  InternalFunctor p = internal_compose(internal_invert(iso), gr.projection);
  out.packet = is_discrete_fibration(p, base);
  return out;
}

GenWeightedProblem gen_weighted_problem(Rng& rng, const GenConfig& cfg) {
  GenWeightedProblem out;
  GenConfig small = cfg;
  small.max_objects = std::min<std::size_t>(cfg.max_objects, 3);
  out.c = gen_vcategory(rng, small);
  const CosmosTag tag = out.c.cosmos;
  const bool arrow_shape = rng.coin();
  out.shape = arrow_shape ? arrow_vcat(tag) : unit_vcat(tag);

  out.diagram.source = out.shape;
  out.diagram.target = out.c;
  if (arrow_shape) {
    for (int attempt = 0; attempt < 40 && out.diagram.onobj.empty(); ++attempt) {
      Label g0 = out.c.objects[rng.below(out.c.objects.size())];
      Label g1 = out.c.objects[rng.below(out.c.objects.size())];
      const Obj& h = out.c.hom_at(g0, g1);
      auto cells = global_elements(h);
      if (cells.empty()) continue;
      out.diagram.onobj = {{"0", g0}, {"1", g1}};
      Map pick = cells[rng.below(cells.size())];
      out.diagram.hom_map[{"0", "0"}] = out.c.ident_at(g0);
      out.diagram.hom_map[{"1", "1"}] = out.c.ident_at(g1);
      out.diagram.hom_map[{"0", "1"}] = pick;
      Map empty;
      empty.dom = initial(tag);
      empty.cod = out.c.hom_at(g1, g0);
      out.diagram.hom_map[{"1", "0"}] = std::move(empty);
    }
    if (out.diagram.onobj.empty()) {
      Label g = out.c.objects[rng.below(out.c.objects.size())];
      out.diagram.onobj = {{"0", g}, {"1", g}};
      out.diagram.hom_map[{"0", "0"}] = out.c.ident_at(g);
      out.diagram.hom_map[{"1", "1"}] = out.c.ident_at(g);
      out.diagram.hom_map[{"0", "1"}] = out.c.ident_at(g);
      Map empty;
      empty.dom = initial(tag);
      empty.cod = out.c.hom_at(g, g);
      out.diagram.hom_map[{"1", "0"}] = std::move(empty);
    }
  } else {
    Label g = out.c.objects[rng.below(out.c.objects.size())];
    out.diagram.onobj = {{"0", g}};
    out.diagram.hom_map[{"0", "0"}] = out.c.ident_at(g);
  }

  out.weight.source = out.shape;
  auto small_obj = [&](std::size_t maxn, const std::string& prefix) {
    std::size_t n = rng.below(maxn + 1);
    if (tag == CosmosTag::finset) {
      std::vector<Label> e;
      for (std::size_t k = 0; k < n; ++k) e.push_back(prefix + std::to_string(k));
      return Obj::finset(e);
    }
    FinCatData d;
    for (std::size_t k = 0; k < n; ++k) {
      Label o = prefix + std::to_string(k);
      d.objects.push_back(o);
      d.morphisms.push_back({"id:" + o, o, o});
      d.identity[o] = "id:" + o;
      d.comp[{"id:" + o, "id:" + o}] = "id:" + o;
    }
    return Obj::fincat(d);
  };
  Obj w0 = small_obj(arrow_shape ? 1 : 2, "u");
  out.weight.onobj["0"] = w0;
  out.weight.ev[{"0", "0"}] = product(w0, terminal(tag)).p0;
  if (arrow_shape) {
    Obj w1 = small_obj(2, "v");
    if (enumerate_maps(w0, w1).empty()) w1 = w0;  // guarantee a connecting map exists
    out.weight.onobj["1"] = w1;
    out.weight.ev[{"1", "1"}] = product(w1, terminal(tag)).p0;
    auto maps = enumerate_maps(w0, w1);
    Map conn = maps[rng.below(maps.size())];
    Prod pr = product(w0, out.shape.hom_at("0", "1"));
    out.weight.ev[{"0", "1"}] = compose(pr.p0, conn);
    Prod pr10 = product(w1, out.shape.hom_at("1", "0"));
    Map empty;
    empty.dom = pr10.obj;
    empty.cod = w0;
    out.weight.ev[{"1", "0"}] = std::move(empty);
  }
  return out;
}

// ---------------------------------------------------------------------------
// oracles

std::size_t oracle_nat_enum(const VFunctorToV& f, const VFunctorToV& g) {
  const VCategory& src = f.source;
  std::vector<std::vector<Map>> candidates;
  for (const auto& i : src.objects) candidates.push_back(enumerate_maps(f.at(i), g.at(i)));
  std::size_t count = 0;
  std::vector<const Map*> pick(src.objects.size());
  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (k == src.objects.size()) {
      for (std::size_t i = 0; i < src.objects.size(); ++i)
        for (std::size_t j = 0; j < src.objects.size(); ++j) {
          Map lhs = compose(f.ev_at(src.objects[i], src.objects[j]), *pick[j]);
          Map rhs = compose(times(*pick[i], identity(src.hom_at(src.objects[i], src.objects[j]))),
                            g.ev_at(src.objects[i], src.objects[j]));
          if (!map_equal(lhs, rhs)) return;
        }
      ++count;
      return;
    }
    for (const auto& cand : candidates[k]) {
      pick[k] = &cand;
      go(k + 1);
    }
  };
  go(0);
  return count;
}

std::size_t oracle_functor_enum(const InternalCategory& i, const InternalCategory& a) {
  std::vector<Map> h0s = enumerate_maps(i.a0, a.a0);
  std::vector<Map> h1s = enumerate_maps(i.a1, a.a1);
  std::size_t count = 0;
  for (const auto& h0 : h0s)
    for (const auto& h1 : h1s) {
      if (!map_equal(compose(h1, a.s), compose(i.s, h0))) continue;
      if (!map_equal(compose(h1, a.t), compose(i.t, h0))) continue;
      if (!map_equal(compose(i.i, h1), compose(h0, a.i))) continue;
      bool ok = true;
      try {
        Map q = a.composable.induce(compose(i.composable.p0, h1), compose(i.composable.p1, h1));
        ok = map_equal(compose(i.c, h1), compose(q, a.c));
      } catch (const Error&) {
        ok = false;
      }
      if (ok) ++count;
    }
  return count;
}

IsoOfSlicesReport oracle_isoofslices(const VFunctorToV& w, const VFunctorCC& g, const Label& a,
                                     const Obj& x) {
  IsoOfSlicesReport out;
  const VCategory& shape = w.source;
  const VCategory& c = g.target;
  VFunctorToV homf = hom_functor(c, a, g);

  // the representable action factors through the diagram's hom maps
  out.edge_maps_equal = true;
  for (const auto& j : shape.objects)
    for (const auto& k : shape.objects) {
      Map lhs = homf.ev_at(j, k);
      Map rhs = compose(times(identity(c.hom_at(a, g.at(j))), g.hom_at(j, k)),
                        c.comp_at(a, g.at(j), g.at(k)));
      if (!map_equal(lhs, rhs)) out.edge_maps_equal = false;
    }

  std::map<std::pair<Label, Label>, NProd> doms;
  std::vector<std::pair<Label, Label>> pairs;
  std::vector<std::vector<Map>> candidates;
  for (const auto& i : shape.objects)
    for (const auto& j : shape.objects) {
      NProd t = nary_product({w.at(i), shape.hom_at(i, j), x});
      doms.emplace(std::make_pair(i, j), t);
      pairs.push_back({i, j});
      candidates.push_back(enumerate_maps(t.obj, c.hom_at(a, g.at(j))));
    }

  auto check_family = [&](const std::map<std::pair<Label, Label>, const Map*>& fam,
                          bool internal_side) {
    for (const auto& i : shape.objects)
      for (const auto& j : shape.objects)
        for (const auto& k : shape.objects) {
          NProd t4 = nary_product({w.at(i), shape.hom_at(i, j), shape.hom_at(j, k), x});
          NProd dik = doms.at({i, k});
          Prod hh = product(shape.hom_at(i, j), shape.hom_at(j, k));
          Map middle =
              compose(dik.tuple({t4.proj[0],
                                 compose(hh.pair(t4.proj[1], t4.proj[2]), shape.comp_at(i, j, k)),
                                 t4.proj[3]}),
                      *fam.at({i, k}));
          NProd djk = doms.at({j, k});
          Prod wi = product(w.at(i), shape.hom_at(i, j));
          Map upper =
              compose(djk.tuple({compose(wi.pair(t4.proj[0], t4.proj[1]), w.ev_at(i, j)),
                                 t4.proj[2], t4.proj[3]}),
                      *fam.at({j, k}));
          if (!map_equal(middle, upper)) return false;
          NProd dij = doms.at({i, j});
          Map evij = compose(dij.tuple({t4.proj[0], t4.proj[1], t4.proj[3]}), *fam.at({i, j}));
          Map lower;
          if (!internal_side) {
            Prod pr = product(c.hom_at(a, g.at(j)), shape.hom_at(j, k));
            lower = compose(pr.pair(evij, t4.proj[2]), homf.ev_at(j, k));
          } else {
            Prod pr = product(c.hom_at(a, g.at(j)), c.hom_at(g.at(j), g.at(k)));
            lower = compose(pr.pair(evij, compose(t4.proj[2], g.hom_at(j, k))),
                            c.comp_at(a, g.at(j), g.at(k)));
          }
          if (!map_equal(middle, lower)) return false;
        }
    return true;
  };

  std::vector<std::string> kept_enriched, kept_internal;
  std::map<std::pair<Label, Label>, const Map*> fam;
  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (k == pairs.size()) {
      std::string key;
      for (const auto& p : pairs) {
        for (const auto& [cell, v] : fam.at(p)->on) key += cell + ">" + v + ";";
        key += "|";
      }
      if (check_family(fam, false)) {
        ++out.side_enriched;
        kept_enriched.push_back(key);
      }
      if (check_family(fam, true)) {
        ++out.side_internal;
        kept_internal.push_back(key);
      }
      return;
    }
    for (const auto& cand : candidates[k]) {
      fam[pairs[k]] = &cand;
      go(k + 1);
    }
  };
  go(0);
  out.families_equal = kept_enriched == kept_internal;
  return out;
}

}  // namespace vcat::testkit
