#include "vcat/internal.hpp"

#include <algorithm>

namespace vcat {

namespace {

std::vector<Label> object_cells(const Obj& x) {
  if (x.is_finset()) return x.elements();
  return x.cat().objects;
}

// the equalizer carving Und A(p,q) out of A1
Equa und_hom_equa(const InternalCategory& a, const Label& p, const Label& q) {
  Prod pr = product(a.a0, a.a0);
  Map st = pr.pair(a.s, a.t);
  Map pt = pr.pair(global_element(a.a0, p), global_element(a.a0, q));
  return equalizer(st, compose(bang(a.a1), pt));
}

}  // namespace

// ---------------------------------------------------------------------------
// basics

bool InternalCategory::operator==(const InternalCategory& o) const {
  return a0 == o.a0 && a1 == o.a1 && s == o.s && t == o.t && i == o.i && c == o.c;
}

InternalCategory assemble_internal(const Obj& a0, const Obj& a1, const Map& s, const Map& t,
                                   const Map& i, const std::function<Map(const Pull&)>& make_c) {
  InternalCategory a;
  a.a0 = a0;
  a.a1 = a1;
  a.s = s;
  a.t = t;
  a.i = i;
  a.composable = pullback(t, s);
  a.c = make_c(a.composable);
  return a;
}

bool InternalFunctor::operator==(const InternalFunctor& o) const {
  return src == o.src && tgt == o.tgt && h0 == o.h0 && h1 == o.h1;
}

InternalFunctor internal_identity(const InternalCategory& a) {
  return {a, a, identity(a.a0), identity(a.a1)};
}

InternalFunctor internal_compose(const InternalFunctor& f, const InternalFunctor& g) {
  if (!(f.tgt == g.src)) throw Error("internal_compose: boundary mismatch");
  return {f.src, g.tgt, compose(f.h0, g.h0), compose(f.h1, g.h1)};
}

bool internal_functor_is_iso(const InternalFunctor& f) { return is_iso(f.h0) && is_iso(f.h1); }

InternalFunctor internal_invert(const InternalFunctor& f) {
  return {f.tgt, f.src, invert(f.h0), invert(f.h1)};
}

InternalFunctor element_functor(const InternalElement& e) {
  InternalCategory pt = cst(terminal(e.carrier.cosmos()));
  return {pt, e.carrier, e.point, compose(e.point, e.carrier.i)};
}

ValidationReport validate_internal(const InternalCategory& a) {
  ValidationReport r;
  if (!(a.s.dom == a.a1) || !(a.s.cod == a.a0)) r.add("source map has wrong boundary");
  if (!(a.t.dom == a.a1) || !(a.t.cod == a.a0)) r.add("target map has wrong boundary");
  if (!(a.i.dom == a.a0) || !(a.i.cod == a.a1)) r.add("identity map has wrong boundary");
  if (!(a.c.dom == a.composable.obj) || !(a.c.cod == a.a1))
    r.add("composition map has wrong boundary");
  if (!r.ok()) return r;

  if (!map_equal(compose(a.i, a.s), identity(a.a0)))
    r.add("s . i differs from the identity: " + diff_witness(compose(a.i, a.s), identity(a.a0)));
  if (!map_equal(compose(a.i, a.t), identity(a.a0)))
    r.add("t . i differs from the identity: " + diff_witness(compose(a.i, a.t), identity(a.a0)));
  const Pull& k = a.composable;
  if (!map_equal(compose(a.c, a.s), compose(k.p0, a.s)))
    r.add("source of a composite differs from the source of the first factor");
  if (!map_equal(compose(a.c, a.t), compose(k.p1, a.t)))
    r.add("target of a composite differs from the target of the second factor");
  if (!r.ok()) return r;

  Map left = k.induce(compose(a.s, a.i), identity(a.a1));
  if (!map_equal(compose(left, a.c), identity(a.a1)))
    r.add("left unitality fails: " + diff_witness(compose(left, a.c), identity(a.a1)));
  Map right = k.induce(identity(a.a1), compose(a.t, a.i));
  if (!map_equal(compose(right, a.c), identity(a.a1)))
    r.add("right unitality fails: " + diff_witness(compose(right, a.c), identity(a.a1)));

  Pull k2 = pullback(compose(k.p1, a.t), a.s);
  Map first_pair = k.induce(compose(k2.p0, a.c), k2.p1);
  Map path1 = compose(first_pair, a.c);
  Map inner = k.induce(compose(k2.p0, k.p1), k2.p1);
  Map second_pair = k.induce(compose(k2.p0, k.p0), compose(inner, a.c));
  Map path2 = compose(second_pair, a.c);
  if (!map_equal(path1, path2)) r.add("associativity fails: " + diff_witness(path1, path2));
  return r;
}

ValidationReport validate_internal_functor(const InternalFunctor& h) {
  ValidationReport r;
  if (!(h.h0.dom == h.src.a0) || !(h.h0.cod == h.tgt.a0)) r.add("level 0 has wrong boundary");
  if (!(h.h1.dom == h.src.a1) || !(h.h1.cod == h.tgt.a1)) r.add("level 1 has wrong boundary");
  if (!r.ok()) return r;
  if (!map_equal(compose(h.h1, h.tgt.s), compose(h.src.s, h.h0)))
    r.add("source square fails: " + diff_witness(compose(h.h1, h.tgt.s), compose(h.src.s, h.h0)));
  if (!map_equal(compose(h.h1, h.tgt.t), compose(h.src.t, h.h0)))
    r.add("target square fails: " + diff_witness(compose(h.h1, h.tgt.t), compose(h.src.t, h.h0)));
  if (!map_equal(compose(h.src.i, h.h1), compose(h.h0, h.tgt.i)))
    r.add("identity square fails: " + diff_witness(compose(h.src.i, h.h1), compose(h.h0, h.tgt.i)));
  if (!r.ok()) return r;
  Map q = h.tgt.composable.induce(compose(h.src.composable.p0, h.h1),
                                  compose(h.src.composable.p1, h.h1));
  if (!map_equal(compose(h.src.c, h.h1), compose(q, h.tgt.c)))
    r.add("composition square fails: " + diff_witness(compose(h.src.c, h.h1), compose(q, h.tgt.c)));
  return r;
}

// ---------------------------------------------------------------------------
// pullbacks in Cat(V), products

InternalPullback pullback_internal(const InternalFunctor& h, const InternalFunctor& k) {
  if (!(h.tgt == k.tgt)) throw Error("pullback_internal: cospan legs have different targets");
  Pull l0 = pullback(h.h0, k.h0);
  Pull l1 = pullback(h.h1, k.h1);
  Map s = l0.induce(compose(l1.p0, h.src.s), compose(l1.p1, k.src.s));
  Map t = l0.induce(compose(l1.p0, h.src.t), compose(l1.p1, k.src.t));
  Map i = l1.induce(compose(l0.p0, h.src.i), compose(l0.p1, k.src.i));
  InternalCategory p = assemble_internal(l0.obj, l1.obj, s, t, i, [&](const Pull& kp) {
    Map ua = h.src.composable.induce(compose(kp.p0, l1.p0), compose(kp.p1, l1.p0));
    Map ub = k.src.composable.induce(compose(kp.p0, l1.p1), compose(kp.p1, l1.p1));
    return l1.induce(compose(ua, h.src.c), compose(ub, k.src.c));
  });
  InternalPullback out;
  out.cat = p;
  out.p0 = {p, h.src, l0.p0, l1.p0};
  out.p1 = {p, k.src, l0.p1, l1.p1};
  return out;
}

InternalProduct internal_product(const InternalCategory& x, const InternalCategory& y) {
  Prod l0 = product(x.a0, y.a0);
  Prod l1 = product(x.a1, y.a1);
  Map s = l0.pair(compose(l1.p0, x.s), compose(l1.p1, y.s));
  Map t = l0.pair(compose(l1.p0, x.t), compose(l1.p1, y.t));
  Map i = l1.pair(compose(l0.p0, x.i), compose(l0.p1, y.i));
  InternalCategory p = assemble_internal(l0.obj, l1.obj, s, t, i, [&](const Pull& kp) {
    Map ux = x.composable.induce(compose(kp.p0, l1.p0), compose(kp.p1, l1.p0));
    Map uy = y.composable.induce(compose(kp.p0, l1.p1), compose(kp.p1, l1.p1));
    return l1.pair(compose(ux, x.c), compose(uy, y.c));
  });
  InternalProduct out;
  out.cat = p;
  out.p0 = {p, x, l0.p0, l1.p0};
  out.p1 = {p, y, l0.p1, l1.p1};
  out.level0 = l0;
  out.level1 = l1;
  return out;
}

// ---------------------------------------------------------------------------
// cst, Int, Und

InternalCategory cst(const Obj& x) {
  Map id = identity(x);
  return assemble_internal(x, x, id, id, id, [&](const Pull& k) { return k.p0; });
}

InternalFunctor cst_map(const Map& f) { return {cst(f.dom), cst(f.cod), f, f}; }

bool is_constant_internal(const InternalCategory& a) {
  return a.a0 == a.a1 && map_equal(a.s, identity(a.a0)) && map_equal(a.t, identity(a.a0)) &&
         map_equal(a.i, identity(a.a0));
}

Map Internalization::object_point(const Label& a) const { return level0.injection(a); }

Label Internalization::hom_cell(const Label& a, const Label& b, const Label& m) const {
  return level1.injection(pair_label(a, b))(m);
}

Internalization internalize(const VCategory& c) {
  Internalization out;
  out.base = c;
  const CosmosTag tag = c.cosmos;

  std::vector<std::pair<Label, Obj>> fam0;
  for (const auto& a : c.objects) fam0.push_back({a, terminal(tag)});
  out.level0 = coproduct(fam0, tag);

  std::vector<std::pair<Label, Obj>> fam1;
  for (const auto& a : c.objects)
    for (const auto& b : c.objects) fam1.push_back({pair_label(a, b), c.hom_at(a, b)});
  out.level1 = coproduct(fam1, tag);

  std::map<Label, Label> alpha_s, alpha_t, alpha_i;
  std::map<Label, Map> comp_s, comp_t, comp_i;
  for (const auto& a : c.objects)
    for (const auto& b : c.objects) {
      alpha_s[pair_label(a, b)] = a;
      alpha_t[pair_label(a, b)] = b;
      comp_s[pair_label(a, b)] = bang(c.hom_at(a, b));
      comp_t[pair_label(a, b)] = bang(c.hom_at(a, b));
    }
  for (const auto& a : c.objects) {
    alpha_i[a] = pair_label(a, a);
    comp_i[a] = c.ident_at(a);
  }
  Map s = indexed_coproduct_map(out.level1, out.level0, alpha_s, comp_s);
  Map t = indexed_coproduct_map(out.level1, out.level0, alpha_t, comp_t);
  Map i = indexed_coproduct_map(out.level0, out.level1, alpha_i, comp_i);

  out.cat = assemble_internal(out.level0.total, out.level1.total, s, t, i, [&](const Pull& k) {
    if (c.objects.empty()) {
      Map m;
      m.dom = k.obj;
      m.cod = out.level1.total;
      return m;
    }
    // mediate through the triple-indexed coproduct of composable hom pairs
    std::vector<std::pair<Label, Obj>> fam2;
    std::vector<Map> into_k, then_c;
    for (const auto& a : c.objects)
      for (const auto& b : c.objects)
        for (const auto& d : c.objects) {
          Prod pr = product(c.hom_at(a, b), c.hom_at(b, d));
          fam2.push_back({tuple_label({a, b, d}), pr.obj});
          into_k.push_back(k.induce(compose(pr.p0, out.level1.injection(pair_label(a, b))),
                                    compose(pr.p1, out.level1.injection(pair_label(b, d)))));
          then_c.push_back(compose(c.comp_at(a, b, d), out.level1.injection(pair_label(a, d))));
        }
    TaggedCoproduct z = coproduct(fam2, tag);
    Map w = z.copair(into_k);
    if (!is_iso(w)) throw Error("internalize: composable-pairs comparison is not an isomorphism");
    return compose(invert(w), z.copair(then_c));
  });
  return out;
}

InternalFunctor int_functor(const VFunctorCC& f, const Internalization& src,
                            const Internalization& dst) {
  std::map<Label, Label> a0, a1;
  std::map<Label, Map> c0, c1;
  for (const auto& a : src.base.objects) {
    a0[a] = f.at(a);
    c0[a] = identity(terminal(src.base.cosmos));
  }
  for (const auto& a : src.base.objects)
    for (const auto& b : src.base.objects) {
      a1[pair_label(a, b)] = pair_label(f.at(a), f.at(b));
      c1[pair_label(a, b)] = f.hom_at(a, b);
    }
  Map h0 = indexed_coproduct_map(src.level0, dst.level0, a0, c0);
  Map h1 = indexed_coproduct_map(src.level1, dst.level1, a1, c1);
  return {src.cat, dst.cat, h0, h1};
}

VCategory underlying(const InternalCategory& a) {
  VCategory c;
  c.cosmos = a.cosmos();
  for (const auto& p : object_cells(a.a0)) c.objects.push_back(p);
  for (const auto& p : c.objects)
    for (const auto& q : c.objects) c.hom[{p, q}] = und_hom_equa(a, p, q).obj;
  for (const auto& p : c.objects) {
    Equa e = und_hom_equa(a, p, p);
    c.ident[p] = e.induce(compose(global_element(a.a0, p), a.i));
  }
  for (const auto& p : c.objects)
    for (const auto& q : c.objects)
      for (const auto& r : c.objects) {
        Equa epq = und_hom_equa(a, p, q);
        Equa eqr = und_hom_equa(a, q, r);
        Equa epr = und_hom_equa(a, p, r);
        Prod dom = product(epq.obj, eqr.obj);
        Map u = a.composable.induce(compose(dom.p0, epq.incl), compose(dom.p1, eqr.incl));
        c.comp[{p, q, r}] = epr.induce(compose(u, a.c));
      }
  return c;
}

VFunctorCC underlying_functor(const InternalFunctor& h) {
  VFunctorCC f;
  f.source = underlying(h.src);
  f.target = underlying(h.tgt);
  for (const auto& p : f.source.objects) f.onobj[p] = h.h0(p);
  for (const auto& p : f.source.objects)
    for (const auto& q : f.source.objects) {
      Equa esrc = und_hom_equa(h.src, p, q);
      Equa etgt = und_hom_equa(h.tgt, h.h0(p), h.h0(q));
      f.hom_map[{p, q}] = etgt.induce(compose(esrc.incl, h.h1));
    }
  return f;
}

VFunctorCC transpose_to_enriched(const InternalFunctor& h, const Internalization& src) {
  if (!(h.src == src.cat)) throw Error("transpose: functor does not start at the internalization");
  VFunctorCC f;
  f.source = src.base;
  f.target = underlying(h.tgt);
  for (const auto& a : src.base.objects)
    f.onobj[a] = point_label(compose(src.object_point(a), h.h0));
  for (const auto& a : src.base.objects)
    for (const auto& b : src.base.objects) {
      Equa e = und_hom_equa(h.tgt, f.onobj.at(a), f.onobj.at(b));
      f.hom_map[{a, b}] = e.induce(compose(src.level1.injection(pair_label(a, b)), h.h1));
    }
  return f;
}

InternalFunctor transpose_to_internal(const VFunctorCC& f, const Internalization& src,
                                      const InternalCategory& a) {
  if (src.base.objects.empty()) {
    Map h0, h1;
    h0.dom = src.level0.total;
    h0.cod = a.a0;
    h1.dom = src.level1.total;
    h1.cod = a.a1;
    return {src.cat, a, h0, h1};
  }
  std::vector<Map> comps0, comps1;
  for (const auto& x : src.base.objects) comps0.push_back(global_element(a.a0, f.at(x)));
  for (const auto& x : src.base.objects)
    for (const auto& y : src.base.objects) {
      Equa e = und_hom_equa(a, f.at(x), f.at(y));
      comps1.push_back(compose(f.hom_at(x, y), e.incl));
    }
  return {src.cat, a, src.level0.copair(comps0), src.level1.copair(comps1)};
}

// ---------------------------------------------------------------------------
// internal hom

namespace {

Label safe_key(const std::function<Label()>& f, const Label& side, const Label& cell) {
  try {
    return f();
  } catch (const Error&) {
    return "!" + side + ":" + cell;
  }
}

}  // namespace

InternalHom internal_hom(const InternalCategory& icat, const InternalCategory& a) {
  if (icat.cosmos() != a.cosmos()) throw Error("internal_hom: cosmos mismatch");
  auto h = std::make_shared<InternalHom>();
  h->base = icat;
  h->target = a;
  h->x00 = exponential(icat.a0, a.a0);
  h->x11 = exponential(icat.a1, a.a1);
  h->x01 = exponential(icat.a0, a.a1);

  const bool fincat = !icat.a0.is_finset();
  const InternalCategory* ic = &h->base;
  const InternalCategory* ac = &h->target;

  // E0: pairs (h0, h1) satisfying the four internal-functor equations
  std::vector<SubproductConstraint> cons0;
  {
    SubproductConstraint src;
    src.i = 0;
    src.j = 1;
    src.fi = [h, ic](const Label& l) {
      return exponential_element_label(compose(ic->s, h->x00.fn_of.at(l)));
    };
    src.fj = [h, ac](const Label& l) {
      return exponential_element_label(compose(h->x11.fn_of.at(l), ac->s));
    };
    SubproductConstraint tgt;
    tgt.i = 0;
    tgt.j = 1;
    tgt.fi = [h, ic](const Label& l) {
      return exponential_element_label(compose(ic->t, h->x00.fn_of.at(l)));
    };
    tgt.fj = [h, ac](const Label& l) {
      return exponential_element_label(compose(h->x11.fn_of.at(l), ac->t));
    };
    SubproductConstraint idc;
    idc.i = 0;
    idc.j = 1;
    idc.fi = [h, ac](const Label& l) {
      return exponential_element_label(compose(h->x00.fn_of.at(l), ac->i));
    };
    idc.fj = [h, ic](const Label& l) {
      return exponential_element_label(compose(ic->i, h->x11.fn_of.at(l)));
    };
    SubproductConstraint cmp;
    cmp.i = 1;
    cmp.j = 1;
    // the two composites out of the composable-pairs object, evaluated
    // pointwise so no mediator is materialized per candidate
    auto kcells = std::make_shared<std::vector<Label>>(
        ic->composable.obj.is_finset() ? ic->composable.obj.elements()
                                       : ic->composable.obj.cat().objects);
    cmp.fi = [h, ic, kcells](const Label& l) {
      try {
        const Map& h1 = h->x11.fn_of.at(l);
        std::vector<Label> vals;
        vals.reserve(kcells->size());
        for (const auto& k : *kcells) vals.push_back(h1(ic->c(k)));
        return fn_label(vals);
      } catch (const Error&) {
        return Label("!L:" + l);
      }
    };
    cmp.fj = [h, ic, ac, kcells](const Label& l) {
      try {
        const Map& h1 = h->x11.fn_of.at(l);
        std::vector<Label> vals;
        vals.reserve(kcells->size());
        for (const auto& k : *kcells)
          vals.push_back(ac->c(pair_label(h1(ic->composable.p0(k)), h1(ic->composable.p1(k)))));
        return fn_label(vals);
      } catch (const Error&) {
        return Label("!R:" + l);
      }
    };
    if (fincat) {
      src.fi_mor = [h, ic](const Label& l) {
        const auto& comps = h->x00.nat_components.at(l);
        std::map<Label, Label> nat;
        for (const auto& m : ic->a1.cat().objects) nat[m] = comps.at(ic->s(m));
        const MorRec& rec = h->x00.obj.cat().mor(l);
        return exponential_nat_label(compose(ic->s, h->x00.fn_of.at(rec.src)),
                                     compose(ic->s, h->x00.fn_of.at(rec.tgt)), nat);
      };
      src.fj_mor = [h, ac](const Label& l) {
        const auto& comps = h->x11.nat_components.at(l);
        std::map<Label, Label> nat;
        for (const auto& [m, v] : comps) nat[m] = ac->s.mor(v);
        const MorRec& rec = h->x11.obj.cat().mor(l);
        return exponential_nat_label(compose(h->x11.fn_of.at(rec.src), ac->s),
                                     compose(h->x11.fn_of.at(rec.tgt), ac->s), nat);
      };
      tgt.fi_mor = [h, ic](const Label& l) {
        const auto& comps = h->x00.nat_components.at(l);
        std::map<Label, Label> nat;
        for (const auto& m : ic->a1.cat().objects) nat[m] = comps.at(ic->t(m));
        const MorRec& rec = h->x00.obj.cat().mor(l);
        return exponential_nat_label(compose(ic->t, h->x00.fn_of.at(rec.src)),
                                     compose(ic->t, h->x00.fn_of.at(rec.tgt)), nat);
      };
      tgt.fj_mor = [h, ac](const Label& l) {
        const auto& comps = h->x11.nat_components.at(l);
        std::map<Label, Label> nat;
        for (const auto& [m, v] : comps) nat[m] = ac->t.mor(v);
        const MorRec& rec = h->x11.obj.cat().mor(l);
        return exponential_nat_label(compose(h->x11.fn_of.at(rec.src), ac->t),
                                     compose(h->x11.fn_of.at(rec.tgt), ac->t), nat);
      };
      idc.fi_mor = [h, ac](const Label& l) {
        const auto& comps = h->x00.nat_components.at(l);
        std::map<Label, Label> nat;
        for (const auto& [x, v] : comps) nat[x] = ac->i.mor(v);
        const MorRec& rec = h->x00.obj.cat().mor(l);
        return exponential_nat_label(compose(h->x00.fn_of.at(rec.src), ac->i),
                                     compose(h->x00.fn_of.at(rec.tgt), ac->i), nat);
      };
      idc.fj_mor = [h, ic](const Label& l) {
        const auto& comps = h->x11.nat_components.at(l);
        std::map<Label, Label> nat;
        for (const auto& x : ic->a0.cat().objects) nat[x] = comps.at(ic->i(x));
        const MorRec& rec = h->x11.obj.cat().mor(l);
        return exponential_nat_label(compose(ic->i, h->x11.fn_of.at(rec.src)),
                                     compose(ic->i, h->x11.fn_of.at(rec.tgt)), nat);
      };
      cmp.fi_mor = [h, ic](const Label& l) {
        return safe_key(
            [&]() {
              const auto& comps = h->x11.nat_components.at(l);
              std::map<Label, Label> nat;
              for (const auto& k : ic->composable.obj.cat().objects) nat[k] = comps.at(ic->c(k));
              const MorRec& rec = h->x11.obj.cat().mor(l);
              return exponential_nat_label(compose(ic->c, h->x11.fn_of.at(rec.src)),
                                           compose(ic->c, h->x11.fn_of.at(rec.tgt)), nat);
            },
            "Lm", l);
      };
      cmp.fj_mor = [h, ic, ac](const Label& l) {
        return safe_key(
            [&]() {
              const auto& comps = h->x11.nat_components.at(l);
              const MorRec& rec = h->x11.obj.cat().mor(l);
              const Map& h1s = h->x11.fn_of.at(rec.src);
              const Map& h1t = h->x11.fn_of.at(rec.tgt);
              Map us = ac->composable.induce(compose(ic->composable.p0, h1s),
                                             compose(ic->composable.p1, h1s));
              Map ut = ac->composable.induce(compose(ic->composable.p0, h1t),
                                             compose(ic->composable.p1, h1t));
              std::map<Label, Label> nat;
              for (const auto& k : ic->composable.obj.cat().objects) {
                Label m0 = ic->composable.p0(k);
                Label m1 = ic->composable.p1(k);
                nat[k] = ac->c.mor(pair_label(comps.at(m0), comps.at(m1)));
              }
              return exponential_nat_label(compose(us, ac->c), compose(ut, ac->c), nat);
            },
            "Rm", l);
      };
    }
    cons0 = {src, tgt, idc, cmp};
  }
  h->sp0 = constrained_subproduct({h->x00.obj, h->x11.obj}, cons0);

  // E1: triples (H, K, alpha) with boundary and internal-naturality equations
  std::vector<SubproductConstraint> cons1;
  {
    SubproductConstraint bs;
    bs.i = 0;
    bs.j = 2;
    bs.fi = [h](const Label& he) { return h->e0_h0()(he); };
    bs.fj = [h, ac](const Label& al) {
      return exponential_element_label(compose(h->x01.fn_of.at(al), ac->s));
    };
    SubproductConstraint bt;
    bt.i = 1;
    bt.j = 2;
    bt.fi = [h](const Label& ke) { return h->e0_h0()(ke); };
    bt.fj = [h, ac](const Label& al) {
      return exponential_element_label(compose(h->x01.fn_of.at(al), ac->t));
    };
    if (fincat) {
      bs.fi_mor = [h](const Label& he) { return h->e0_h0().mor(he); };
      bs.fj_mor = [h, ac](const Label& al) {
        const auto& comps = h->x01.nat_components.at(al);
        std::map<Label, Label> nat;
        for (const auto& [x, v] : comps) nat[x] = ac->s.mor(v);
        const MorRec& rec = h->x01.obj.cat().mor(al);
        return exponential_nat_label(compose(h->x01.fn_of.at(rec.src), ac->s),
                                     compose(h->x01.fn_of.at(rec.tgt), ac->s), nat);
      };
      bt.fi_mor = [h](const Label& ke) { return h->e0_h0().mor(ke); };
      bt.fj_mor = [h, ac](const Label& al) {
        const auto& comps = h->x01.nat_components.at(al);
        std::map<Label, Label> nat;
        for (const auto& [x, v] : comps) nat[x] = ac->t.mor(v);
        const MorRec& rec = h->x01.obj.cat().mor(al);
        return exponential_nat_label(compose(h->x01.fn_of.at(rec.src), ac->t),
                                     compose(h->x01.fn_of.at(rec.tgt), ac->t), nat);
      };
    }
    cons1 = {bs, bt};
  }
  auto nat_filter = [h, ic, ac](const std::vector<Label>& tup) {
    const Map& h1 = h->x11.fn_of.at(h->e0_h1()(tup[0]));
    const Map& k1 = h->x11.fn_of.at(h->e0_h1()(tup[1]));
    const Map& al = h->x01.fn_of.at(tup[2]);
    try {
      const auto cells = ic->a1.is_finset() ? ic->a1.elements() : ic->a1.cat().objects;
      for (const auto& m : cells) {
        if (ac->c(pair_label(h1(m), al(ic->t(m)))) != ac->c(pair_label(al(ic->s(m)), k1(m))))
          return false;
      }
      if (!ic->a1.is_finset()) {
        for (const auto& mr : ic->a1.cat().morphisms) {
          if (ac->c.mor(pair_label(h1.mor(mr.name), al.mor(ic->t.mor(mr.name)))) !=
              ac->c.mor(pair_label(al.mor(ic->s.mor(mr.name)), k1.mor(mr.name))))
            return false;
        }
      }
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  std::function<bool(const std::vector<Label>&)> nat_filter_mor;
  if (fincat) {
    nat_filter_mor = [h, ic, ac](const std::vector<Label>& tup) {
      try {
        const auto& nh1 = h->x11.nat_components.at(h->e0_h1().mor(tup[0]));
        const auto& nk1 = h->x11.nat_components.at(h->e0_h1().mor(tup[1]));
        const auto& nal = h->x01.nat_components.at(tup[2]);
        for (const auto& m : ic->a1.cat().objects) {
          Label lhs = ac->c.mor(pair_label(nh1.at(m), nal.at(ic->t(m))));
          Label rhs = ac->c.mor(pair_label(nal.at(ic->s(m)), nk1.at(m)));
          if (lhs != rhs) return false;
        }
        return true;
      } catch (const Error&) {
        return false;
      }
    };
  }
  h->sp1 = constrained_subproduct({h->sp0.obj, h->sp0.obj, h->x01.obj}, cons1, nat_filter,
                                  nat_filter_mor);

  // structure maps of [[I,A]]
  Map w = compose(h->e0_h0(), postcompose(icat.a0, a.i));
  Map icomp = h->sp1.factor_in({identity(h->sp0.obj), identity(h->sp0.obj), w});
  h->cat = assemble_internal(
      h->sp0.obj, h->sp1.obj, h->e1_src(), h->e1_tgt(), icomp, [&](const Pull& k) {
        Map qa = compose(k.p0, h->e1_alpha());
        Map qb = compose(k.p1, h->e1_alpha());
        Prod p = product(icat.a0, k.obj);
        Prod pea = product(icat.a0, h->x01.obj);
        Map v0 = compose(pea.pair(p.p0, compose(p.p1, qa)), h->x01.eval());
        Map v1 = compose(pea.pair(p.p0, compose(p.p1, qb)), h->x01.eval());
        Map u = a.composable.induce(v0, v1);
        Map pointwise = curry(compose(u, a.c), icat.a0, k.obj);
        return h->sp1.factor_in(
            {compose(k.p0, h->e1_src()), compose(k.p1, h->e1_tgt()), pointwise});
      });
  return *h;
}

Map InternalHom::functor_point(const InternalFunctor& f) const {
  Label l = pair_label(x00.encode(f.h0), x11.encode(f.h1));
  return global_element(sp0.obj, l);
}

InternalFunctor InternalHom::point_functor(const Map& pt) const {
  Label l = point_label(pt);
  return {base, target, x00.decode(e0_h0()(l)), x11.decode(e0_h1()(l))};
}

InternalFunctor InternalHom::evaluate_at(const InternalElement& e) const {
  Map l0 = compose(e0_h0(), eval_at(x00, e.point));
  Map l1 = compose(e1_alpha(), eval_at(x01, e.point));
  return {cat, target, l0, l1};
}

Internalization walking_arrow_internal(CosmosTag tag) { return internalize(arrow_vcat(tag)); }

InternalHom arrow_hom(const InternalCategory& a) {
  return internal_hom(walking_arrow_internal(a.cosmos()).cat, a);
}

InternalHom hom_cst(const Obj& x, const InternalCategory& a) { return internal_hom(cst(x), a); }

Map arrow_hom_level0_iso(const InternalCategory& a, const InternalHom& h) {
  Internalization two = walking_arrow_internal(a.cosmos());
  Distribution d0 = distribute_left(two.level0, a.a1);
  std::vector<Map> comps0;
  for (const auto& tag : d0.parts.tags) {
    Prod pr = product(two.level0.summand(tag), a.a1);
    comps0.push_back(compose(pr.p1, tag == "0" ? a.s : a.t));
  }
  Map u0 = compose(invert(d0.iso), d0.parts.copair(comps0));
  Distribution d1 = distribute_left(two.level1, a.a1);
  std::vector<Map> comps1;
  for (const auto& tag : d1.parts.tags) {
    Prod pr = product(two.level1.summand(tag), a.a1);
    if (tag == pair_label("0", "0")) {
      comps1.push_back(compose(pr.p1, compose(a.s, a.i)));
    } else if (tag == pair_label("0", "1")) {
      comps1.push_back(pr.p1);
    } else if (tag == pair_label("1", "1")) {
      comps1.push_back(compose(pr.p1, compose(a.t, a.i)));
    } else {
      Map empty;
      empty.dom = pr.obj;
      empty.cod = a.a1;
      comps1.push_back(std::move(empty));
    }
  }
  Map u1 = compose(invert(d1.iso), d1.parts.copair(comps1));
  return h.sp0.factor_in({curry(u0, two.level0.total, a.a1), curry(u1, two.level1.total, a.a1)});
}

Map hom_cst_level0_iso(const Obj& x, const InternalCategory& a, const InternalHom& h) {
  return h.sp0.factor_in({identity(h.x00.obj), postcompose(x, a.i)});
}

Map hom_cst_level1_iso(const Obj& x, const InternalCategory& a, const InternalHom& h) {
  Map lvl0 = hom_cst_level0_iso(x, a, h);
  Map to_e0_src = compose(postcompose(x, a.s), lvl0);
  Map to_e0_tgt = compose(postcompose(x, a.t), lvl0);
  return h.sp1.factor_in({to_e0_src, to_e0_tgt, identity(h.x01.obj)});
}

InternalFunctor diagonal_functor(const InternalCategory& a, const InternalHom& h) {
  const InternalCategory& icat = h.base;
  Prod p00 = product(icat.a0, a.a0);
  Prod p10 = product(icat.a1, a.a0);
  Map c0 = curry(p00.p1, icat.a0, a.a0);
  Map c1 = curry(compose(p10.p1, a.i), icat.a1, a.a0);
  Map h0 = h.sp0.factor_in({c0, c1});
  Prod p01 = product(icat.a0, a.a1);
  Map calpha = curry(p01.p1, icat.a0, a.a1);
  Map h1 = h.sp1.factor_in({compose(a.s, h0), compose(a.t, h0), calpha});
  return {a, h.cat, h0, h1};
}

// ---------------------------------------------------------------------------
// commas, slices

InternalComma internal_comma(const InternalFunctor& f, const InternalFunctor& g) {
  if (!(f.tgt == g.tgt)) throw Error("internal_comma: functors have different targets");
  const InternalCategory& z = f.tgt;
  InternalComma out;
  out.arrow = arrow_hom(z);
  Internalization two = walking_arrow_internal(z.cosmos());
  Map pt0 = two.object_point("0");
  Map pt1 = two.object_point("1");

  Map ev00 = compose(out.arrow.e0_h0(), eval_at(out.arrow.x00, pt0));
  Map ev01 = compose(out.arrow.e0_h0(), eval_at(out.arrow.x00, pt1));
  Map ev10 = compose(out.arrow.e1_alpha(), eval_at(out.arrow.x01, pt0));
  Map ev11 = compose(out.arrow.e1_alpha(), eval_at(out.arrow.x01, pt1));

  InternalProduct xy = internal_product(f.src, g.src);
  Prod z00 = product(z.a0, z.a0);
  Prod z11 = product(z.a1, z.a1);
  Map bdry0 = z00.pair(ev00, ev01);
  Map bdry1 = z11.pair(ev10, ev11);
  Map fg0 = z00.pair(compose(xy.level0.p0, f.h0), compose(xy.level0.p1, g.h0));
  Map fg1 = z11.pair(compose(xy.level1.p0, f.h1), compose(xy.level1.p1, g.h1));

  out.level0 = pullback(bdry0, fg0);
  out.level1 = pullback(bdry1, fg1);
  const Pull& l0 = out.level0;
  const Pull& l1 = out.level1;

  Map s = l0.induce(compose(l1.p0, out.arrow.cat.s), compose(l1.p1, xy.cat.s));
  Map t = l0.induce(compose(l1.p0, out.arrow.cat.t), compose(l1.p1, xy.cat.t));
  Map i = l1.induce(compose(l0.p0, out.arrow.cat.i), compose(l0.p1, xy.cat.i));
  out.cat = assemble_internal(l0.obj, l1.obj, s, t, i, [&](const Pull& k) {
    Map ua = out.arrow.cat.composable.induce(compose(k.p0, l1.p0), compose(k.p1, l1.p0));
    Map uxy = xy.cat.composable.induce(compose(k.p0, l1.p1), compose(k.p1, l1.p1));
    return l1.induce(compose(ua, out.arrow.cat.c), compose(uxy, xy.cat.c));
  });
  out.proj_x = {out.cat, f.src, compose(l0.p1, xy.level0.p0), compose(l1.p1, xy.level1.p0)};
  out.proj_y = {out.cat, g.src, compose(l0.p1, xy.level0.p1), compose(l1.p1, xy.level1.p1)};
  out.leg_arrow0 = l0.p0;
  out.leg_arrow1 = l1.p0;
  out.z_iso = arrow_hom_level0_iso(z, out.arrow);
  return out;
}

Map InternalComma::comma_element(const Map& x_pt, const Map& y_pt, const Map& z_arrow) const {
  Map e0pt = compose(z_arrow, z_iso);
  Prod xy0 = product(proj_x.tgt.a0, proj_y.tgt.a0);
  return level0.induce(e0pt, xy0.pair(x_pt, y_pt));
}

SliceResult slice(const InternalCategory& a, const InternalElement& t) {
  SliceResult out;
  out.raw = internal_comma(internal_identity(a), element_functor(t));
  out.cat = out.raw.cat;
  out.projection = out.raw.proj_x;
  return out;
}

SliceResult coslice(const InternalCategory& a, const InternalElement& t) {
  SliceResult out;
  out.raw = internal_comma(element_functor(t), internal_identity(a));
  out.cat = out.raw.cat;
  out.projection = out.raw.proj_y;
  return out;
}

SliceResult comma(const InternalFunctor& h, const InternalElement& b_elt) {
  SliceResult out;
  out.raw = internal_comma(h, element_functor(b_elt));
  out.cat = out.raw.cat;
  out.projection = out.raw.proj_x;
  return out;
}

SliceResult cocomma(const InternalFunctor& h, const InternalElement& b_elt) {
  SliceResult out;
  out.raw = internal_comma(element_functor(b_elt), h);
  out.cat = out.raw.cat;
  out.projection = out.raw.proj_y;
  return out;
}

Map slice_identity_element(const SliceResult& s, const InternalElement& t) {
  Map y_pt = global_element(terminal(t.carrier.cosmos()), "*");
  return s.raw.comma_element(t.point, y_pt, compose(t.point, t.carrier.i));
}

// ---------------------------------------------------------------------------
// discrete fibrations

FibrationPacket is_discrete_fibration(const InternalFunctor& p) {
  FibrationPacket out;
  out.p = p;
  out.square = pullback(p.tgt.t, p.h0);
  out.comparison = out.square.induce(p.h1, p.src.t);
  out.certificate = is_iso(out.comparison);
  return out;
}

FibrationPacket is_discrete_fibration(const InternalFunctor& p, const Internalization& target) {
  if (!(p.tgt == target.cat))
    throw Error("fibration analysis: target is not the given internalization");
  FibrationPacket out = is_discrete_fibration(p);
  if (!out.certificate) return out;
  const VCategory& c = target.base;
  Map minv = invert(out.comparison);
  for (const auto& a : c.objects) {
    Pull fb = pullback(p.h0, target.object_point(a));
    out.fibers[a] = fb.obj;
    out.fiber_legs[a] = fb.p0;
  }
  for (const auto& a : c.objects)
    for (const auto& b : c.objects) {
      Prod dom = product(c.hom_at(a, b), out.fibers.at(b));
      Map to_b1 = compose(dom.p0, target.level1.injection(pair_label(a, b)));
      Map to_a0 = compose(dom.p1, out.fiber_legs.at(b));
      Map q = out.square.induce(to_b1, to_a0);
      Map a1cell = compose(q, minv);
      out.actions[{a, b}] = factor_through_mono(compose(a1cell, p.src.s), out.fiber_legs.at(a));
    }
  return out;
}

FibrationPacket is_discrete_opfibration(const InternalFunctor& p) {
  FibrationPacket out;
  out.p = p;
  out.square = pullback(p.tgt.s, p.h0);
  out.comparison = out.square.induce(p.h1, p.src.s);
  out.certificate = is_iso(out.comparison);
  return out;
}

// ---------------------------------------------------------------------------
// terminal objects, cones, limits

bool is_internal_terminal(const InternalCategory& a, const InternalElement& t) {
  // level-0 criterion for the slice projection
  Pull into = pullback(a.t, t.point);
  return is_iso(compose(into.p0, a.s));
}

bool is_internal_initial(const InternalCategory& a, const InternalElement& t) {
  Pull outof = pullback(a.s, t.point);
  return is_iso(compose(outof.p0, a.t));
}

bool is_v_terminal(const VCategory& c, const Label& t) {
  if (!c.has_object(t)) throw LookupError("is_v_terminal: unknown object " + t);
  for (const auto& a : c.objects)
    if (!is_iso(bang(c.hom_at(a, t)))) return false;
  return true;
}

ConeCategory cone_category(const InternalFunctor& g) {
  ConeCategory out;
  out.hom = internal_hom(g.src, g.tgt);
  out.diag = diagonal_functor(g.tgt, out.hom);
  out.g_point = out.hom.functor_point(g);
  InternalElement ge{out.hom.cat, out.g_point};
  out.comma = internal_comma(out.diag, element_functor(ge));
  out.projection = out.comma.proj_x;
  return out;
}

ConeCategory cocone_category(const InternalFunctor& g) {
  ConeCategory out;
  out.hom = internal_hom(g.src, g.tgt);
  out.diag = diagonal_functor(g.tgt, out.hom);
  out.g_point = out.hom.functor_point(g);
  InternalElement ge{out.hom.cat, out.g_point};
  out.comma = internal_comma(element_functor(ge), out.diag);
  out.projection = out.comma.proj_y;
  return out;
}

namespace {

// the element of [[I,A]]_1 given by a transformation kappa between named
// functor points
Map transformation_point(const InternalHom& h, const Map& src_pt, const Map& tgt_pt,
                         const Map& kappa) {
  Map name = global_element(h.x01.obj, h.x01.encode(kappa));
  return h.sp1.factor_in({src_pt, tgt_pt, name});
}

InternalFunctor constant_functor_at(const InternalCategory& i, const InternalCategory& a,
                                    const Map& apex) {
  return {i, a, compose(bang(i.a0), apex), compose(bang(i.a1), compose(apex, a.i))};
}

}  // namespace

bool is_internal_limit(const InternalFunctor& g, const Map& apex, const Map& kappa) {
  ConeCategory cc = cone_category(g);
  InternalFunctor delta_l = constant_functor_at(g.src, g.tgt, apex);
  Map cone_arrow = transformation_point(cc.hom, cc.hom.functor_point(delta_l), cc.g_point, kappa);
  Map pt = cc.comma.comma_element(apex, global_element(terminal(g.tgt.cosmos()), "*"), cone_arrow);
  return is_internal_terminal(cc.comma.cat, {cc.comma.cat, pt});
}

bool is_internal_colimit(const InternalFunctor& g, const Map& apex, const Map& kappa) {
  ConeCategory cc = cocone_category(g);
  InternalFunctor delta_l = constant_functor_at(g.src, g.tgt, apex);
  Map cone_arrow = transformation_point(cc.hom, cc.g_point, cc.hom.functor_point(delta_l), kappa);
  Map pt = cc.comma.comma_element(global_element(terminal(g.tgt.cosmos()), "*"), apex, cone_arrow);
  return is_internal_initial(cc.comma.cat, {cc.comma.cat, pt});
}

std::optional<ColimitWitness> compute_internal_colimit(const InternalFunctor& g) {
  if (!is_constant_internal(g.src))
    throw ValidationError("compute_internal_colimit: shape is not constant");
  ConeCategory cc = cocone_category(g);
  for (const auto& pt : global_elements(cc.comma.cat.a0)) {
    if (is_internal_initial(cc.comma.cat, {cc.comma.cat, pt})) {
      ColimitWitness w;
      w.apex = compose(pt, cc.projection.h0);
      Map b1pt = compose(pt, compose(cc.comma.leg_arrow0, invert(cc.comma.z_iso)));
      Map alpha_name = compose(b1pt, cc.hom.e1_alpha());
      w.kappa = cc.hom.x01.decode(point_label(alpha_name));
      return w;
    }
  }
  return std::nullopt;
}

}  // namespace vcat
