#include "vcat/limits.hpp"

#include <algorithm>

namespace vcat {

namespace {

// the element of (groth F)_0 over (c, x)
Map element_point(const GrothResult& gr, const Label& c, const Map& x) {
  return compose(x, gr.level0.injection(c));
}

// the shifted element of [[cst X, A]]_0 at an element of A
Map shifted_point(const InternalHom& h, const Obj& probe, const InternalCategory& a,
                  const Map& pt) {
  Map h0 = compose(bang(probe), pt);
  Label l = pair_label(h.x00.encode(h0), h.x11.encode(compose(h0, a.i)));
  return global_element(h.cat.a0, l);
}

bool shifted_v_terminal(const InternalCategory& a, const Map& pt, const Obj& probe) {
  InternalHom h = hom_cst(probe, a);
  Map sp = shifted_point(h, probe, a, pt);
  return is_v_terminal(underlying(h.cat), point_label(sp));
}

}  // namespace

// ---------------------------------------------------------------------------
// representability routes

bool is_representable_direct(const VPresheaf& f, const Label& c, const Map& x) {
  return is_representable_by(f, c, x);
}

bool is_representable_via_elements(const VPresheaf& f, const Label& c, const Map& x) {
  GrothResult gr = groth(f.base, f);
  return is_internal_terminal(gr.total, {gr.total, element_point(gr, c, x)});
}

bool is_representable_via_shifted(const VPresheaf& f, const Label& c, const Map& x) {
  GrothResult gr = groth(f.base, f);
  Map pt = element_point(gr, c, x);
  for (const auto& probe : generators(f.base.cosmos).probes)
    if (!shifted_v_terminal(gr.total, pt, probe)) return false;
  return true;
}

bool is_representable_via_und_tensors(const VPresheaf& f, const Label& c, const Map& x) {
  for (const auto& probe : generators(f.base.cosmos).probes) {
    if (!has_v_tensors(f.base, probe).has_value())
      throw HypothesisError("und-tensors route: the base category lacks tensors by a probe");
    if (!presheaf_preserves_tensors(f, probe))
      throw HypothesisError("und-tensors route: the presheaf does not preserve probe tensors");
  }
  GrothResult gr = groth(f.base, f);
  VCategory und = underlying(gr.total);
  return is_v_terminal(und, point_label(element_point(gr, c, x)));
}

// ---------------------------------------------------------------------------
// tensors

bool is_v_tensor(const VCategory& c, const Label& cobj, const Obj& x, const Label& candidate,
                 const Map& gamma) {
  if (!(gamma.dom == x) || !(gamma.cod == c.hom_at(cobj, candidate)))
    throw ValidationError("is_v_tensor: unit has wrong boundary");
  for (const auto& a : c.objects) {
    Map v = compose(times(gamma, identity(c.hom_at(candidate, a))), c.comp_at(cobj, candidate, a));
    Map comparison = curry(v, x, c.hom_at(candidate, a));
    if (!is_iso(comparison)) return false;
  }
  return true;
}

std::optional<std::map<Label, TensorWitness>> has_v_tensors(const VCategory& c, const Obj& x) {
  std::map<Label, TensorWitness> out;
  for (const auto& cobj : c.objects) {
    bool found = false;
    for (const auto& cand : c.objects) {
      for (const auto& gamma : enumerate_maps(x, c.hom_at(cobj, cand))) {
        if (is_v_tensor(c, cobj, x, cand, gamma)) {
          out[cobj] = {cobj, cand, gamma};
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) return std::nullopt;
  }
  return out;
}

bool presheaf_preserves_tensors(const VPresheaf& f, const Obj& x) {
  auto witnesses = has_v_tensors(f.base, x);
  if (!witnesses.has_value())
    throw HypothesisError("presheaf_preserves_tensors: the base category lacks tensors");
  for (const auto& cobj : f.base.objects) {
    const TensorWitness& w = witnesses->at(cobj);
    Expo e = exponential(x, f.at(cobj));
    bool found = false;
    for (const auto& phi : enumerate_isos(e.obj, f.at(w.tensor_object))) {
      Map lhs = compose(times(w.unit, phi), f.ev_at(cobj, w.tensor_object));
      if (map_equal(lhs, e.eval())) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

InternalTensorReport has_internal_tensors(const InternalCategory& a, const Obj& x) {
  InternalTensorReport out;
  InternalCategory shape = cst(x);
  for (const auto& g : enumerate_maps(x, a.a0)) {
    InternalFunctor gf{shape, a, g, compose(g, a.i)};
    auto w = compute_internal_colimit(gf);
    if (!w.has_value()) {
      out.all_exist = false;
      return out;
    }
    out.witnesses.push_back({g, *w});
  }
  return out;
}

InternalTensorReport has_c_internal_tensors(const FibrationPacket& packet, const Obj& x) {
  InternalTensorReport out;
  const InternalCategory& a = packet.p.src;
  InternalCategory shape = cst(x);
  for (const auto& [cobj, fib] : packet.fibers) {
    for (const auto& gp : enumerate_maps(x, fib)) {
      Map g = compose(gp, packet.fiber_legs.at(cobj));
      InternalFunctor gf{shape, a, g, compose(g, a.i)};
      auto w = compute_internal_colimit(gf);
      if (!w.has_value()) {
        out.all_exist = false;
        return out;
      }
      out.witnesses.push_back({g, *w});
    }
  }
  return out;
}

GrothTensorWitness groth_tensor_witness(const VPresheaf& f, const Label& cobj, const Obj& x,
                                        const Map& g) {
  auto witnesses = has_v_tensors(f.base, x);
  if (!witnesses.has_value())
    throw HypothesisError("groth_tensor_witness: the base category lacks tensors");
  if (!presheaf_preserves_tensors(f, x))
    throw HypothesisError("groth_tensor_witness: the presheaf does not preserve tensors");
  const TensorWitness& w = witnesses->at(cobj);
  const Label tens = w.tensor_object;

  // find the preservation isomorphism for this object
  Expo e = exponential(x, f.at(cobj));
  Map phi;
  bool found = false;
  for (const auto& cand : enumerate_isos(e.obj, f.at(tens))) {
    if (map_equal(compose(times(w.unit, cand), f.ev_at(cobj, tens)), e.eval())) {
      phi = cand;
      found = true;
      break;
    }
  }
  if (!found) throw HypothesisError("groth_tensor_witness: no preservation isomorphism");

  GrothResult gr = groth(f.base, f);
  Map gname = global_element(e.obj, e.encode(g));
  Map phig = compose(gname, phi);  // * -> F(c (x) X)
  GrothTensorWitness out;
  out.apex = compose(phig, gr.level0.injection(tens));
  Prod pr = product(f.base.hom_at(cobj, tens), f.at(tens));
  Map u = pr.pair(w.unit, compose(bang(x), phig));
  out.kappa = compose(u, gr.level1.injection(pair_label(cobj, tens)));
  InternalFunctor gf{cst(x), gr.total, compose(g, gr.level0.injection(cobj)),
                     compose(compose(g, gr.level0.injection(cobj)), gr.total.i)};
  out.colimit_certificate = is_internal_colimit(gf, out.apex, out.kappa);
  return out;
}

namespace {

TensorBridgeReport bridge_report(const InternalCategory& a, const Map& pt, bool tensors_exist) {
  TensorBridgeReport out;
  out.hypotheses_hold = tensors_exist;
  out.internal_terminal = is_internal_terminal(a, {a, pt});
  out.und_v_terminal = is_v_terminal(underlying(a), point_label(pt));
  for (const auto& probe : generators(a.cosmos()).probes)
    out.shifted_per_probe.push_back(shifted_v_terminal(a, pt, probe));
  out.divergence = out.internal_terminal != out.und_v_terminal;
  out.divergence_under_hypotheses = out.divergence && out.hypotheses_hold;
  return out;
}

}  // namespace

TensorBridgeReport tensor_bridge_terminal(const InternalCategory& a, const InternalElement& t) {
  bool tensors = true;
  for (const auto& probe : generators(a.cosmos()).probes)
    tensors = tensors && has_internal_tensors(a, probe).all_exist;
  return bridge_report(a, t.point, tensors);
}

TensorBridgeReport tensor_bridge_terminal(const FibrationPacket& packet, const Label& cobj,
                                          const Map& x) {
  bool tensors = true;
  for (const auto& probe : generators(packet.p.src.cosmos()).probes)
    tensors = tensors && has_c_internal_tensors(packet, probe).all_exist;
  Map pt = compose(x, packet.fiber_legs.at(cobj));
  return bridge_report(packet.p.src, pt, tensors);
}

// ---------------------------------------------------------------------------
// weighted limits

ValidationReport validate_weighted_problem(const WeightedLimitProblem& p) {
  ValidationReport r;
  if (!(p.diagram.source == p.weight.source)) r.add("weight and diagram have different shapes");
  if (!(p.diagram.target == p.c)) r.add("diagram does not land in the stated category");
  if (!p.c.has_object(p.candidate)) r.add("unknown candidate object");
  if (!r.ok()) return r;
  if (p.lambda.has_value()) {
    VFunctorToV homf = hom_functor(p.c, p.candidate, p.diagram);
    ValidationReport nat = validate_cov_vnat(p.weight, homf, *p.lambda);
    for (auto& fmsg : nat.failures) r.add("lambda: " + fmsg);
  }
  return r;
}

Map cone_element(const End& el, const CovVNat& lambda) {
  std::vector<Map> names;
  for (const auto& i : el.index)
    names.push_back(global_element(el.expo(i).obj, el.expo(i).encode(lambda.at(i))));
  return el.factor_in_from(terminal(el.obj.tag()), names);
}

CovVNat element_cone(const End& el, const Label& elt) {
  CovVNat out;
  for (std::size_t k = 0; k < el.index.size(); ++k)
    out.component[el.index[k]] = el.factor[k].decode(el.comp[k](elt));
  return out;
}

WeightedConeInternal weighted_cone_internal(const VFunctorToV& w, const VFunctorCC& g,
                                            bool run_crosscheck) {
  WeightedConeInternal out;
  out.cones = weighted_cone_presheaf(w, g);
  out.gr = groth(g.target, out.cones.presheaf);
  if (!run_crosscheck) return out;
  out.crosscheck_ran = true;

  // the finite full sub-V-category of (V^I)^op on the cone functors and the
  // weight, with hom-objects computed by ends
  const VCategory& c = g.target;
  VCategory d;
  d.cosmos = c.cosmos;
  std::map<Label, VFunctorToV> of;
  for (const auto& a : c.objects) {
    d.objects.push_back("h:" + a);
    of.emplace("h:" + a, hom_functor(c, a, g));
  }
  d.objects.push_back("w");
  of.emplace("w", w);

  std::map<std::pair<Label, Label>, End> ends;
  for (const auto& o1 : d.objects)
    for (const auto& o2 : d.objects) {
      End e = functor_hom(of.at(o2), of.at(o1));  // opposite orientation
      d.hom[{o1, o2}] = e.obj;
      ends.emplace(std::make_pair(o1, o2), std::move(e));
    }
  for (const auto& o : d.objects) {
    const End& e = ends.at({o, o});
    std::vector<Map> names;
    for (const auto& i : e.index)
      names.push_back(global_element(e.expo(i).obj, e.expo(i).encode(identity(of.at(o).at(i)))));
    d.ident[o] = e.factor_in_from(terminal(d.cosmos), names);
  }
  for (const auto& o1 : d.objects)
    for (const auto& o2 : d.objects)
      for (const auto& o3 : d.objects) {
        const End& e12 = ends.at({o1, o2});
        const End& e23 = ends.at({o2, o3});
        const End& e13 = ends.at({o1, o3});
        Prod dom = product(e12.obj, e23.obj);
        std::vector<Map> comps;
        for (const auto& i : e13.index) {
          const Obj& f3 = of.at(o3).at(i);
          Prod t = product(f3, dom.obj);
          Prod ev23dom = product(f3, e23.expo(i).obj);
          Map u1 = compose(ev23dom.pair(t.p0, compose(t.p1, compose(dom.p1, e23.proj(i)))),
                           e23.expo(i).eval());
          Prod ev12dom = product(of.at(o2).at(i), e12.expo(i).obj);
          Map u2 = compose(ev12dom.pair(u1, compose(t.p1, compose(dom.p0, e12.proj(i)))),
                           e12.expo(i).eval());
          comps.push_back(curry(u2, f3, dom.obj));
        }
        d.comp[{o1, o2, o3}] = e13.factor_in_from(dom.obj, comps);
      }

  // the V-functor C -> D sending A to its cone functor
  VFunctorCC k;
  k.source = c;
  k.target = d;
  for (const auto& a : c.objects) k.onobj[a] = "h:" + a;
  for (const auto& a : c.objects)
    for (const auto& b : c.objects) {
      const End& e = ends.at({std::string("h:") + a, std::string("h:") + b});
      std::vector<Map> comps;
      for (const auto& i : e.index) {
        const Obj& fb = of.at("h:" + b).at(i);
        Prod t = product(fb, c.hom_at(a, b));
        Prod swapped = product(c.hom_at(a, b), fb);
        comps.push_back(
            curry(compose(swapped.pair(t.p1, t.p0), c.comp_at(a, b, g.at(i))), fb, c.hom_at(a, b)));
      }
      k.hom_map[{a, b}] = e.factor_in_from(c.hom_at(a, b), comps);
    }

  Internalization ic = out.gr.base;
  Internalization idd = internalize(d);
  InternalFunctor ik = int_functor(k, ic, idd);
  InternalElement welt{idd.cat, idd.object_point("w")};
  SliceResult cm = comma(ik, welt);

  // compare fibers over Int C
  FibrationPacket pk = is_discrete_fibration(cm.projection, ic);
  if (!pk.certificate) return out;
  bool ok = true;
  VNat comparison;
  for (const auto& a : c.objects) {
    Map chase = compose(pk.fiber_legs.at(a),
                        compose(cm.raw.leg_arrow0, invert(cm.raw.z_iso)));
    Map into_end;
    try {
      into_end = factor_through_mono(chase, idd.level1.injection(pair_label("h:" + a, "w")));
    } catch (const Error&) {
      ok = false;
      break;
    }
    if (!is_iso(into_end)) ok = false;
    comparison.component[a] = into_end;
  }
  if (ok) {
    VPresheaf phi = inverse_fib(pk, ic);
    ok = validate_vnat(phi, out.cones.presheaf, comparison).ok();
  }
  out.crosscheck_iso = ok;
  return out;
}

namespace {

std::vector<CovVNat> candidate_cones(const WeightedLimitProblem& p, const End& el) {
  std::vector<CovVNat> out;
  if (p.lambda.has_value()) {
    out.push_back(*p.lambda);
    return out;
  }
  for (const auto& e : el.obj.is_finset() ? el.obj.elements() : el.obj.cat().objects)
    out.push_back(element_cone(el, e));
  return out;
}

}  // namespace

bool is_weighted_limit_direct(const WeightedLimitProblem& p) {
  WeightedConePresheaf cones = weighted_cone_presheaf(p.weight, p.diagram);
  const End& el = cones.ends.at(p.candidate);
  for (const auto& lam : candidate_cones(p, el)) {
    bool all = true;
    for (const auto& a : p.c.objects) {
      // lambda*: C(A,L) -> E(A), componentwise by postcomposition
      const End& ea = cones.ends.at(a);
      std::vector<Map> comps;
      for (const auto& i : ea.index) {
        const Obj& wi = p.weight.at(i);
        Prod t = product(wi, p.c.hom_at(a, p.candidate));
        Prod cp = product(p.c.hom_at(a, p.candidate), p.c.hom_at(p.candidate, p.diagram.at(i)));
        Map v = compose(cp.pair(t.p1, compose(t.p0, lam.at(i))),
                        p.c.comp_at(a, p.candidate, p.diagram.at(i)));
        comps.push_back(curry(v, wi, p.c.hom_at(a, p.candidate)));
      }
      Map lambda_star = ea.factor_in_from(p.c.hom_at(a, p.candidate), comps);
      if (!is_iso(lambda_star)) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

bool is_weighted_limit_elements(const WeightedLimitProblem& p) {
  WeightedConeInternal wc = weighted_cone_internal(p.weight, p.diagram);
  const End& el = wc.cones.ends.at(p.candidate);
  for (const auto& lam : candidate_cones(p, el)) {
    Map pt = compose(cone_element(el, lam), wc.gr.level0.injection(p.candidate));
    if (is_internal_terminal(wc.gr.total, {wc.gr.total, pt})) return true;
  }
  return false;
}

bool is_weighted_limit_shifted(const WeightedLimitProblem& p) {
  WeightedConeInternal wc = weighted_cone_internal(p.weight, p.diagram);
  const End& el = wc.cones.ends.at(p.candidate);
  for (const auto& lam : candidate_cones(p, el)) {
    Map pt = compose(cone_element(el, lam), wc.gr.level0.injection(p.candidate));
    bool all = true;
    for (const auto& probe : generators(p.c.cosmos).probes)
      all = all && shifted_v_terminal(wc.gr.total, pt, probe);
    if (all) return true;
  }
  return false;
}

bool is_weighted_limit_und_tensors(const WeightedLimitProblem& p) {
  for (const auto& probe : generators(p.c.cosmos).probes)
    if (!has_v_tensors(p.c, probe).has_value())
      throw HypothesisError("und-tensors route: the category lacks tensors by a probe");
  WeightedConeInternal wc = weighted_cone_internal(p.weight, p.diagram);
  VCategory und = underlying(wc.gr.total);
  const End& el = wc.cones.ends.at(p.candidate);
  for (const auto& lam : candidate_cones(p, el)) {
    Map pt = compose(cone_element(el, lam), wc.gr.level0.injection(p.candidate));
    if (is_v_terminal(und, point_label(pt))) return true;
  }
  return false;
}

ConeTranslation cone_translate(const WeightedLimitProblem& p) {
  ConeTranslation out;
  out.gw = groth_cov(p.weight);
  Internalization ic = internalize(p.c);
  InternalFunctor ig = int_functor(p.diagram, out.gw.base, ic);
  out.diagram_functor = internal_compose(out.gw.projection, ig);
  out.apex = ic.object_point(p.candidate);
  if (p.lambda.has_value()) {
    std::vector<Map> comps;
    for (const auto& tag : out.gw.level0.tags)
      comps.push_back(compose(p.lambda->at(tag),
                              ic.level1.injection(pair_label(p.candidate, p.diagram.at(tag)))));
    out.kappa = out.gw.level0.copair(comps);
  }
  return out;
}

bool is_weighted_limit_conical(const WeightedLimitProblem& p) {
  WeightedConePresheaf cones = weighted_cone_presheaf(p.weight, p.diagram);
  const End& el = cones.ends.at(p.candidate);
  if (candidate_cones(p, el).empty()) return false;
  GrothCovResult gw = groth_cov(p.weight);
  Internalization ic = internalize(p.c);
  InternalFunctor ig = int_functor(p.diagram, gw.base, ic);
  InternalFunctor gfun = internal_compose(gw.projection, ig);
  ConeCategory cc = cone_category(gfun);
  Map apex = ic.object_point(p.candidate);
  for (const auto& lam : candidate_cones(p, el)) {
    std::vector<Map> comps;
    for (const auto& tag : gw.level0.tags)
      comps.push_back(
          compose(lam.at(tag), ic.level1.injection(pair_label(p.candidate, p.diagram.at(tag)))));
    Map kappa = gw.level0.tags.empty() ? Map{} : gw.level0.copair(comps);
    if (gw.level0.tags.empty()) {
      kappa.dom = gw.level0.total;
      kappa.cod = ic.cat.a1;
    }
    // assemble the cone as an element of the cone category and test
    InternalFunctor delta_l{gfun.src, gfun.tgt, compose(bang(gfun.src.a0), apex),
                            compose(bang(gfun.src.a1), compose(apex, ic.cat.i))};
    Map name = global_element(cc.hom.x01.obj, cc.hom.x01.encode(kappa));
    Map cone_arrow;
    try {
      cone_arrow = cc.hom.sp1.factor_in({cc.hom.functor_point(delta_l), cc.g_point, name});
    } catch (const MediatorError&) {
      continue;  // not a valid cone
    }
    Map pt = cc.comma.comma_element(apex, global_element(terminal(p.c.cosmos), "*"), cone_arrow);
    if (is_internal_terminal(cc.comma.cat, {cc.comma.cat, pt})) return true;
  }
  return false;
}


// ---------------------------------------------------------------------------
// the shifted hom construction

VCategory ar_x(const VCategory& c, const Obj& x) {
  VCategory out;
  out.cosmos = c.cosmos;
  out.objects = c.objects;
  std::map<std::pair<Label, Label>, Expo> expos;
  for (const auto& a : c.objects)
    for (const auto& b : c.objects) {
      Expo e = exponential(x, c.hom_at(a, b));
      out.hom[{a, b}] = e.obj;
      expos.emplace(std::make_pair(a, b), std::move(e));
    }
  for (const auto& a : c.objects) {
    // the name of the constant family at the identity
    Map ia = compose(bang(x), c.ident_at(a));
    out.ident[a] = global_element(out.hom.at({a, a}), expos.at({a, a}).encode(ia));
  }
  for (const auto& a : c.objects)
    for (const auto& b : c.objects)
      for (const auto& d : c.objects) {
        const Expo& eab = expos.at({a, b});
        const Expo& ebd = expos.at({b, d});
        Prod dom = product(eab.obj, ebd.obj);
        Prod pxd = product(x, dom.obj);
        Prod evab = product(x, eab.obj);
        Prod evbd = product(x, ebd.obj);
        Map first = compose(evab.pair(pxd.p0, compose(pxd.p1, dom.p0)), eab.eval());
        Map second = compose(evbd.pair(pxd.p0, compose(pxd.p1, dom.p1)), ebd.eval());
        Prod cpair = product(c.hom_at(a, b), c.hom_at(b, d));
        Map v = compose(cpair.pair(first, second), c.comp_at(a, b, d));
        out.comp[{a, b, d}] = curry(v, x, dom.obj);
      }
  return out;
}

bool ar_x_matches_shifted(const VCategory& c, const Obj& x) {
  VCategory shifted = ar_x(c, x);
  Internalization ic = internalize(c);
  InternalHom h = hom_cst(x, ic.cat);
  VCategory und = underlying(h.cat);
  if (shifted.objects.size() != und.objects.size()) return false;

  // the canonical object correspondence: A |-> the constant functor at A
  std::map<Label, Label> obj_to;
  for (const auto& a : c.objects) {
    Map h0 = compose(bang(x), ic.object_point(a));
    Label l = pair_label(h.x00.encode(h0), h.x11.encode(compose(h0, ic.cat.i)));
    if (!und.has_object(l)) return false;
    obj_to[a] = l;
  }
  // hom comparison maps [X, C(A,B)] -> Und-hom through the level-1 shortcut
  VFunctorCC cmp;
  cmp.source = shifted;
  cmp.target = und;
  cmp.onobj = obj_to;
  Map lvl1 = hom_cst_level1_iso(x, ic.cat, h);
  for (const auto& a : c.objects)
    for (const auto& b : c.objects) {
      Map into_x01 = postcompose(x, ic.level1.injection(pair_label(a, b)));
      Map to_e1 = compose(into_x01, lvl1);
      Equa sub = equalizer(
          product(h.cat.a0, h.cat.a0).pair(h.cat.s, h.cat.t),
          compose(bang(h.cat.a1), product(h.cat.a0, h.cat.a0)
                                      .pair(global_element(h.cat.a0, obj_to.at(a)),
                                            global_element(h.cat.a0, obj_to.at(b)))));
      Map m;
      try {
        m = sub.induce(to_e1);
      } catch (const Error&) {
        return false;
      }
      if (!is_iso(m)) return false;
      cmp.hom_map[{a, b}] = std::move(m);
    }
  return validate_vfunctor_cc(cmp).ok();
}

}  // namespace vcat
