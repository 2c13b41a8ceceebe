#include "vcat/groth.hpp"

namespace vcat {

namespace {

// FA -> C(A,A) x FA inserting the identity on the left
Map insert_ident_left(const Obj& fa, const Map& ia) {
  Prod p = product(ia.cod, fa);
  return p.pair(compose(bang(fa), ia), identity(fa));
}

}  // namespace

GrothResult groth(const Internalization& base, const VPresheaf& f) {
  const VCategory& c = base.base;
  if (!(f.base == c)) throw ValidationError("groth: presheaf is not based on the given category");
  GrothResult out;
  out.base = base;
  const CosmosTag tag = c.cosmos;

  std::vector<std::pair<Label, Obj>> fam0;
  for (const auto& a : c.objects) fam0.push_back({a, f.at(a)});
  out.level0 = coproduct(fam0, tag);

  std::vector<std::pair<Label, Obj>> fam1;
  std::map<Label, Prod> summand_prod;
  for (const auto& a : c.objects)
    for (const auto& b : c.objects) {
      Prod pr = product(c.hom_at(a, b), f.at(b));
      summand_prod.emplace(pair_label(a, b), pr);
      fam1.push_back({pair_label(a, b), pr.obj});
    }
  out.level1 = coproduct(fam1, tag);

  std::map<Label, Label> alpha_s, alpha_t, alpha_i;
  std::map<Label, Map> comp_s, comp_t, comp_i;
  for (const auto& a : c.objects)
    for (const auto& b : c.objects) {
      const Label ab = pair_label(a, b);
      alpha_s[ab] = a;
      alpha_t[ab] = b;
      comp_s[ab] = f.ev_at(a, b);
      comp_t[ab] = summand_prod.at(ab).p1;
    }
  for (const auto& a : c.objects) {
    alpha_i[a] = pair_label(a, a);
    comp_i[a] = insert_ident_left(f.at(a), c.ident_at(a));
  }
  Map s = indexed_coproduct_map(out.level1, out.level0, alpha_s, comp_s);
  Map t = indexed_coproduct_map(out.level1, out.level0, alpha_t, comp_t);
  Map i = indexed_coproduct_map(out.level0, out.level1, alpha_i, comp_i);

  out.total = assemble_internal(out.level0.total, out.level1.total, s, t, i, [&](const Pull& k) {
    if (c.objects.empty()) {
      Map m;
      m.dom = k.obj;
      m.cod = out.level1.total;
      return m;
    }
    std::vector<std::pair<Label, Obj>> fam2;
    std::vector<Map> into_k, then_c;
    for (const auto& a : c.objects)
      for (const auto& b : c.objects)
        for (const auto& d : c.objects) {
          NProd tr = nary_product({c.hom_at(a, b), c.hom_at(b, d), f.at(d)});
          fam2.push_back({tuple_label({a, b, d}), tr.obj});
          Prod bd = product(c.hom_at(b, d), f.at(d));
          Map second =
              compose(bd.pair(tr.proj[1], tr.proj[2]), out.level1.injection(pair_label(b, d)));
          Prod ab_fb = product(c.hom_at(a, b), f.at(b));
          Map first = compose(
              ab_fb.pair(tr.proj[0], compose(bd.pair(tr.proj[1], tr.proj[2]), f.ev_at(b, d))),
              out.level1.injection(pair_label(a, b)));
          into_k.push_back(k.induce(first, second));
          Prod frontc = product(c.hom_at(a, b), c.hom_at(b, d));
          Prod ad_fd = product(c.hom_at(a, d), f.at(d));
          then_c.push_back(compose(
              ad_fd.pair(compose(frontc.pair(tr.proj[0], tr.proj[1]), c.comp_at(a, b, d)),
                         tr.proj[2]),
              out.level1.injection(pair_label(a, d))));
        }
    TaggedCoproduct z = coproduct(fam2, tag);
    Map w = z.copair(into_k);
    if (!is_iso(w)) throw Error("groth: composable-pairs comparison is not an isomorphism");
    return compose(invert(w), z.copair(then_c));
  });

  std::map<Label, Label> pid0, pid1;
  std::map<Label, Map> pc0, pc1;
  for (const auto& a : c.objects) {
    pid0[a] = a;
    pc0[a] = bang(f.at(a));
  }
  for (const auto& a : c.objects)
    for (const auto& b : c.objects) {
      const Label ab = pair_label(a, b);
      pid1[ab] = ab;
      pc1[ab] = summand_prod.at(ab).p0;
    }
  Map h0 = indexed_coproduct_map(out.level0, base.level0, pid0, pc0);
  Map h1 = indexed_coproduct_map(out.level1, base.level1, pid1, pc1);
  out.projection = {out.total, base.cat, h0, h1};
  return out;
}

GrothResult groth(const VCategory& c, const VPresheaf& f) { return groth(internalize(c), f); }

GrothNatResult groth_nat(const VPresheaf& f, const VPresheaf& g, const VNat& alpha) {
  GrothNatResult out;
  Internalization base = internalize(f.base);
  out.src = groth(base, f);
  out.dst = groth(base, g);
  const VCategory& c = f.base;
  std::map<Label, Label> id0, id1;
  std::map<Label, Map> c0, c1;
  for (const auto& a : c.objects) {
    id0[a] = a;
    c0[a] = alpha.at(a);
  }
  for (const auto& a : c.objects)
    for (const auto& b : c.objects) {
      const Label ab = pair_label(a, b);
      id1[ab] = ab;
      c1[ab] = times(identity(c.hom_at(a, b)), alpha.at(b));
    }
  Map h0 = indexed_coproduct_map(out.src.level0, out.dst.level0, id0, c0);
  Map h1 = indexed_coproduct_map(out.src.level1, out.dst.level1, id1, c1);
  out.functor = {out.src.total, out.dst.total, h0, h1};
  return out;
}

GrothCovResult groth_cov(const VFunctorToV& w) {
  const VCategory& c = w.source;
  GrothCovResult out;
  out.base = internalize(c);
  const CosmosTag tag = c.cosmos;

  std::vector<std::pair<Label, Obj>> fam0;
  for (const auto& i : c.objects) fam0.push_back({i, w.at(i)});
  out.level0 = coproduct(fam0, tag);

  std::vector<std::pair<Label, Obj>> fam1;
  std::map<Label, Prod> summand_prod;
  for (const auto& i : c.objects)
    for (const auto& j : c.objects) {
      Prod pr = product(w.at(i), c.hom_at(i, j));
      summand_prod.emplace(pair_label(i, j), pr);
      fam1.push_back({pair_label(i, j), pr.obj});
    }
  out.level1 = coproduct(fam1, tag);

  std::map<Label, Label> alpha_s, alpha_t, alpha_i;
  std::map<Label, Map> comp_s, comp_t, comp_i;
  for (const auto& i : c.objects)
    for (const auto& j : c.objects) {
      const Label ij = pair_label(i, j);
      alpha_s[ij] = i;
      alpha_t[ij] = j;
      comp_s[ij] = summand_prod.at(ij).p0;
      comp_t[ij] = w.ev_at(i, j);
    }
  for (const auto& i : c.objects) {
    alpha_i[i] = pair_label(i, i);
    Prod pr = product(w.at(i), c.hom_at(i, i));
    comp_i[i] = pr.pair(identity(w.at(i)), compose(bang(w.at(i)), c.ident_at(i)));
  }
  Map s = indexed_coproduct_map(out.level1, out.level0, alpha_s, comp_s);
  Map t = indexed_coproduct_map(out.level1, out.level0, alpha_t, comp_t);
  Map i = indexed_coproduct_map(out.level0, out.level1, alpha_i, comp_i);

  out.total = assemble_internal(out.level0.total, out.level1.total, s, t, i, [&](const Pull& k) {
    if (c.objects.empty()) {
      Map m;
      m.dom = k.obj;
      m.cod = out.level1.total;
      return m;
    }
    std::vector<std::pair<Label, Obj>> fam2;
    std::vector<Map> into_k, then_c;
    for (const auto& a : c.objects)
      for (const auto& b : c.objects)
        for (const auto& d : c.objects) {
          NProd tr = nary_product({w.at(a), c.hom_at(a, b), c.hom_at(b, d)});
          fam2.push_back({tuple_label({a, b, d}), tr.obj});
          Prod wi_ab = product(w.at(a), c.hom_at(a, b));
          Map first = compose(wi_ab.pair(tr.proj[0], tr.proj[1]),
                              out.level1.injection(pair_label(a, b)));
          Prod wj_bd = product(w.at(b), c.hom_at(b, d));
          Map second = compose(
              wj_bd.pair(compose(wi_ab.pair(tr.proj[0], tr.proj[1]), w.ev_at(a, b)), tr.proj[2]),
              out.level1.injection(pair_label(b, d)));
          into_k.push_back(k.induce(first, second));
          Prod back = product(c.hom_at(a, b), c.hom_at(b, d));
          Prod wi_ad = product(w.at(a), c.hom_at(a, d));
          then_c.push_back(compose(
              wi_ad.pair(tr.proj[0],
                         compose(back.pair(tr.proj[1], tr.proj[2]), c.comp_at(a, b, d))),
              out.level1.injection(pair_label(a, d))));
        }
    TaggedCoproduct z = coproduct(fam2, tag);
    Map v = z.copair(into_k);
    if (!is_iso(v)) throw Error("groth_cov: composable-pairs comparison is not an isomorphism");
    return compose(invert(v), z.copair(then_c));
  });

  std::map<Label, Label> pid0, pid1;
  std::map<Label, Map> pc0, pc1;
  for (const auto& i2 : c.objects) {
    pid0[i2] = i2;
    pc0[i2] = bang(w.at(i2));
  }
  for (const auto& i2 : c.objects)
    for (const auto& j : c.objects) {
      const Label ij = pair_label(i2, j);
      pid1[ij] = ij;
      pc1[ij] = summand_prod.at(ij).p1;
    }
  Map h0 = indexed_coproduct_map(out.level0, out.base.level0, pid0, pc0);
  Map h1 = indexed_coproduct_map(out.level1, out.base.level1, pid1, pc1);
  out.projection = {out.total, out.base.cat, h0, h1};
  out.opfibration_certificate = is_discrete_opfibration(out.projection).certificate;
  return out;
}

ChangeOfBaseResult change_of_base(const VFunctorCC& f, const VPresheaf& g) {
  if (!(g.base == f.target)) throw ValidationError("change_of_base: presheaf base mismatch");
  ChangeOfBaseResult out;
  VPresheaf gf = restrict_presheaf(f, g);
  out.src = groth(f.source, gf);
  out.dst = groth(f.target, g);
  out.int_f = int_functor(f, out.src.base, out.dst.base);

  const VCategory& c = f.source;
  std::map<Label, Label> a0, a1;
  std::map<Label, Map> c0, c1;
  for (const auto& a : c.objects) {
    a0[a] = f.at(a);
    c0[a] = identity(g.at(f.at(a)));
  }
  for (const auto& a : c.objects)
    for (const auto& b : c.objects) {
      a1[pair_label(a, b)] = pair_label(f.at(a), f.at(b));
      c1[pair_label(a, b)] = times(f.hom_at(a, b), identity(g.at(f.at(b))));
    }
  Map h0 = indexed_coproduct_map(out.src.level0, out.dst.level0, a0, c0);
  Map h1 = indexed_coproduct_map(out.src.level1, out.dst.level1, a1, c1);
  out.functor = {out.src.total, out.dst.total, h0, h1};

  out.square_commutes = map_equal(compose(out.functor.h0, out.dst.projection.h0),
                                  compose(out.src.projection.h0, out.int_f.h0)) &&
                        map_equal(compose(out.functor.h1, out.dst.projection.h1),
                                  compose(out.src.projection.h1, out.int_f.h1));
  Pull pb0 = pullback(out.int_f.h0, out.dst.projection.h0);
  Pull pb1 = pullback(out.int_f.h1, out.dst.projection.h1);
  Map m0 = pb0.induce(out.src.projection.h0, out.functor.h0);
  Map m1 = pb1.induce(out.src.projection.h1, out.functor.h1);
  out.pullback_certificate = is_iso(m0) && is_iso(m1);
  return out;
}

namespace {

// action extraction once fibers and their legs are fixed
void extract_actions(FibrationPacket& out, const Internalization& target) {
  const VCategory& c = target.base;
  Map minv = invert(out.comparison);
  for (const auto& a : c.objects)
    for (const auto& b : c.objects) {
      Prod dom = product(c.hom_at(a, b), out.fibers.at(b));
      Map to_b1 = compose(dom.p0, target.level1.injection(pair_label(a, b)));
      Map to_a0 = compose(dom.p1, out.fiber_legs.at(b));
      Map q = out.square.induce(to_b1, to_a0);
      Map a1cell = compose(q, minv);
      out.actions[{a, b}] =
          factor_through_mono(compose(a1cell, out.p.src.s), out.fiber_legs.at(a));
    }
}

}  // namespace

FibrationPacket analyze_groth_packet(const GrothResult& gr) {
  FibrationPacket out = is_discrete_fibration(gr.projection);
  if (!out.certificate) return out;
  for (std::size_t k = 0; k < gr.level0.tags.size(); ++k) {
    out.fibers[gr.level0.tags[k]] = gr.level0.summands[k];
    out.fiber_legs[gr.level0.tags[k]] = gr.level0.inj[k];
  }
  extract_actions(out, gr.base);
  return out;
}

VPresheaf inverse_fib(const FibrationPacket& packet, const Internalization& target) {
  if (!packet.certificate)
    throw HypothesisError("inverse_fib: a certified internal discrete fibration is required");
  VPresheaf f;
  f.base = target.base;
  for (const auto& [a, fib] : packet.fibers) f.onobj[a] = fib;
  for (const auto& [ab, act] : packet.actions) f.ev[ab] = act;
  if (f.onobj.size() != target.base.objects.size())
    throw HypothesisError("inverse_fib: packet carries no fiber data");
  return f;
}

VNat inverse_fib_mor(const InternalFunctor& h, const FibrationPacket& p, const FibrationPacket& q) {
  VNat out;
  for (const auto& [a, fib] : p.fibers)
    out.component[a] = factor_through_mono(compose(p.fiber_legs.at(a), h.h0), q.fiber_legs.at(a));
  return out;
}

EtaResult unit_eta(const VPresheaf& f) {
  EtaResult out;
  out.gr = groth(f.base, f);
  out.packet = analyze_groth_packet(out.gr);
  out.phi = inverse_fib(out.packet, out.gr.base);
  out.iso_certificate = true;
  for (const auto& a : f.base.objects) {
    Map comp = factor_through_mono(out.packet.fiber_legs.at(a), out.gr.level0.injection(a));
    if (!is_iso(comp)) out.iso_certificate = false;
    out.nat.component[a] = std::move(comp);
  }
  return out;
}

EpsilonResult counit_epsilon(const FibrationPacket& packet, const Internalization& target) {
  EpsilonResult out;
  VPresheaf phi = inverse_fib(packet, target);
  out.gphi = groth(target, phi);
  const VCategory& c = target.base;

  std::vector<Map> comps0;
  for (const auto& a : c.objects) comps0.push_back(packet.fiber_legs.at(a));
  Map h0 = out.gphi.level0.copair(comps0);

  Map minv = invert(packet.comparison);
  std::vector<Map> comps1;
  for (const auto& a : c.objects)
    for (const auto& b : c.objects) {
      Prod dom = product(c.hom_at(a, b), packet.fibers.at(b));
      Map to_b1 = compose(dom.p0, target.level1.injection(pair_label(a, b)));
      Map to_a0 = compose(dom.p1, packet.fiber_legs.at(b));
      comps1.push_back(compose(packet.square.induce(to_b1, to_a0), minv));
    }
  Map h1 = out.gphi.level1.copair(comps1);
  out.functor = {out.gphi.total, packet.p.src, h0, h1};
  out.iso_certificate = internal_functor_is_iso(out.functor);
  return out;
}

PsiResult psi(const Internalization& base, const Label& c) {
  const VCategory& cc = base.base;
  if (!cc.has_object(c)) throw LookupError("psi: unknown object " + c);
  PsiResult out;
  out.object = c;
  out.elements = groth(base, representable(cc, c));
  InternalElement celt{base.cat, base.object_point(c)};
  out.slice_cat = slice(base.cat, celt);

  // level 0: hom cells read as arrows of Int C into c
  std::vector<Map> u_comps;
  for (const auto& a : cc.objects) u_comps.push_back(base.level1.injection(pair_label(a, c)));
  Map u = out.elements.level0.copair(u_comps);
  Prod xy0 = product(base.cat.a0, terminal(cc.cosmos));
  Map h0 = out.slice_cat.raw.level0.induce(compose(u, out.slice_cat.raw.z_iso),
                                           xy0.pair(compose(u, base.cat.s), bang(u.dom)));

  // level 1: the element (g, f) over (A,B) becomes the triangle g;f -> f
  std::vector<Map> src_comps, tgt_comps, g_comps;
  for (const auto& a : cc.objects)
    for (const auto& b : cc.objects) {
      Prod pr = product(cc.hom_at(a, b), cc.hom_at(b, c));
      src_comps.push_back(compose(cc.comp_at(a, b, c), base.level1.injection(pair_label(a, c))));
      tgt_comps.push_back(compose(pr.p1, base.level1.injection(pair_label(b, c))));
      g_comps.push_back(compose(pr.p0, base.level1.injection(pair_label(a, b))));
    }
  Map src_arrow = compose(out.elements.level1.copair(src_comps), out.slice_cat.raw.z_iso);
  Map tgt_arrow = compose(out.elements.level1.copair(tgt_comps), out.slice_cat.raw.z_iso);
  Map g_cell = out.elements.level1.copair(g_comps);
  const Obj& dom1 = out.elements.total.a1;

  // alpha: 2_0 x dom1 -> (Int C)_1 by cases: 0 |-> g, 1 |-> i_c
  Internalization two = walking_arrow_internal(cc.cosmos);
  Distribution d = distribute_left(two.level0, dom1);
  Map icell = compose(cc.ident_at(c), base.level1.injection(pair_label(c, c)));
  std::vector<Map> alpha_comps;
  for (const auto& tag : d.parts.tags) {
    Prod pr = product(two.level0.summand(tag), dom1);
    if (tag == "0") {
      alpha_comps.push_back(compose(pr.p1, g_cell));
    } else {
      alpha_comps.push_back(compose(bang(pr.obj), icell));
    }
  }
  Map alpha_raw = compose(invert(d.iso), d.parts.copair(alpha_comps));
  Map alpha_curried = curry(alpha_raw, two.level0.total, dom1);
  Map e1part = out.slice_cat.raw.arrow.sp1.factor_in({src_arrow, tgt_arrow, alpha_curried});
  Prod xy1 = product(base.cat.a1, terminal(cc.cosmos));
  Map h1 = out.slice_cat.raw.level1.induce(e1part, xy1.pair(g_cell, bang(dom1)));

  out.functor = {out.elements.total, out.slice_cat.cat, h0, h1};
  out.iso_certificate = internal_functor_is_iso(out.functor);
  return out;
}

InternalFunctor slice_functor_from_element(const PsiResult& psi_r, const GrothResult& fgr,
                                           const VPresheaf& f, const Map& x) {
  VNat ax = yoneda_nat(f, psi_r.object, x);
  GrothNatResult gn = groth_nat(representable(f.base, psi_r.object), f, ax);
  if (!(gn.dst.total == fgr.total))
    throw Error("slice_functor_from_element: element category mismatch");
  return internal_compose(internal_invert(psi_r.functor), gn.functor);
}

}  // namespace vcat
