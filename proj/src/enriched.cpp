#include "vcat/enriched.hpp"

#include <algorithm>
#include <sstream>

namespace vcat {

namespace {

// X -> C(A,A) x X inserting the identity on the left
Map insert_unit_left(const Obj& x, const Map& ia) {
  Prod p = product(ia.cod, x);
  return p.pair(compose(bang(x), ia), identity(x));
}

// X -> X x C(B,B) inserting the identity on the right
Map insert_unit_right(const Obj& x, const Map& ib) {
  Prod p = product(x, ib.cod);
  return p.pair(identity(x), compose(bang(x), ib));
}

std::vector<Label> hom_object_cells(const Obj& hom) {
  if (hom.is_finset()) return hom.elements();
  return hom.cat().objects;
}

}  // namespace

// ---------------------------------------------------------------------------
// accessors

const Obj& VCategory::hom_at(const Label& a, const Label& b) const {
  auto it = hom.find({a, b});
  if (it == hom.end()) throw LookupError("no hom-object (" + a + "," + b + ")");
  return it->second;
}

const Map& VCategory::comp_at(const Label& a, const Label& b, const Label& c) const {
  auto it = comp.find({a, b, c});
  if (it == comp.end()) throw LookupError("no composition map (" + a + "," + b + "," + c + ")");
  return it->second;
}

const Map& VCategory::ident_at(const Label& a) const {
  auto it = ident.find(a);
  if (it == ident.end()) throw LookupError("no identity map at " + a);
  return it->second;
}

bool VCategory::has_object(const Label& a) const {
  return std::find(objects.begin(), objects.end(), a) != objects.end();
}

bool VCategory::operator==(const VCategory& o) const {
  return cosmos == o.cosmos && objects == o.objects && hom == o.hom && comp == o.comp &&
         ident == o.ident;
}

const Obj& VPresheaf::at(const Label& a) const {
  auto it = onobj.find(a);
  if (it == onobj.end()) throw LookupError("presheaf undefined at " + a);
  return it->second;
}

const Map& VPresheaf::ev_at(const Label& a, const Label& b) const {
  auto it = ev.find({a, b});
  if (it == ev.end()) throw LookupError("presheaf has no ev at (" + a + "," + b + ")");
  return it->second;
}

const Obj& VFunctorToV::at(const Label& i) const {
  auto it = onobj.find(i);
  if (it == onobj.end()) throw LookupError("functor undefined at " + i);
  return it->second;
}

const Map& VFunctorToV::ev_at(const Label& i, const Label& j) const {
  auto it = ev.find({i, j});
  if (it == ev.end()) throw LookupError("functor has no ev at (" + i + "," + j + ")");
  return it->second;
}

Map VFunctorToV::act(const Label& i, const Label& j, const Label& m) const {
  const Obj& wi = at(i);
  const Obj& homij = source.hom_at(i, j);
  Map pt = global_element(homij, m);
  Prod p = product(wi, homij);
  return compose(p.pair(identity(wi), compose(bang(wi), pt)), ev_at(i, j));
}

std::map<Label, Label> VFunctorToV::act2(const Label& i, const Label& j, const Label& mu) const {
  const Obj& wi = at(i);
  const Map& e = ev_at(i, j);
  std::map<Label, Label> out;
  for (const auto& x : wi.cat().objects) out[x] = e.mor(pair_label(wi.cat().id_of(x), mu));
  return out;
}

const Label& VFunctorCC::at(const Label& a) const {
  auto it = onobj.find(a);
  if (it == onobj.end()) throw LookupError("functor undefined at " + a);
  return it->second;
}

const Map& VFunctorCC::hom_at(const Label& a, const Label& b) const {
  auto it = hom_map.find({a, b});
  if (it == hom_map.end()) throw LookupError("functor has no hom map at (" + a + "," + b + ")");
  return it->second;
}

const Map& VNat::at(const Label& a) const {
  auto it = component.find(a);
  if (it == component.end()) throw LookupError("transformation has no component at " + a);
  return it->second;
}

const Map& CovVNat::at(const Label& i) const {
  auto it = component.find(i);
  if (it == component.end()) throw LookupError("transformation has no component at " + i);
  return it->second;
}

// ---------------------------------------------------------------------------
// validators

ValidationReport validate_vcategory(const VCategory& c) {
  ValidationReport r;
  for (const auto& a : c.objects)
    for (const auto& b : c.objects)
      if (!c.hom.count({a, b})) r.add("missing hom-object (" + a + "," + b + ")");
  if (!r.ok()) return r;
  for (const auto& a : c.objects) {
    auto it = c.ident.find(a);
    if (it == c.ident.end()) {
      r.add("missing identity at " + a);
      continue;
    }
    if (!(it->second.dom == terminal(c.cosmos)) || !(it->second.cod == c.hom_at(a, a)))
      r.add("identity at " + a + " has wrong boundary");
  }
  for (const auto& a : c.objects)
    for (const auto& b : c.objects)
      for (const auto& d : c.objects) {
        auto it = c.comp.find({a, b, d});
        if (it == c.comp.end()) {
          r.add("missing composition (" + a + "," + b + "," + d + ")");
          continue;
        }
        Prod p = product(c.hom_at(a, b), c.hom_at(b, d));
        if (!(it->second.dom == p.obj) || !(it->second.cod == c.hom_at(a, d)))
          r.add("composition (" + a + "," + b + "," + d + ") has wrong boundary");
      }
  if (!r.ok()) return r;

  for (const auto& a : c.objects)
    for (const auto& b : c.objects) {
      const Obj& h = c.hom_at(a, b);
      Map left = compose(insert_unit_left(h, c.ident_at(a)), c.comp_at(a, a, b));
      if (!map_equal(left, identity(h)))
        r.add("left unitality (" + a + "," + b + "): " + diff_witness(left, identity(h)));
      Map right = compose(insert_unit_right(h, c.ident_at(b)), c.comp_at(a, b, b));
      if (!map_equal(right, identity(h)))
        r.add("right unitality (" + a + "," + b + "): " + diff_witness(right, identity(h)));
    }
  for (const auto& a : c.objects)
    for (const auto& b : c.objects)
      for (const auto& d : c.objects)
        for (const auto& e : c.objects) {
          NProd triple = nary_product({c.hom_at(a, b), c.hom_at(b, d), c.hom_at(d, e)});
          Prod front = product(c.hom_at(a, b), c.hom_at(b, d));
          Prod left = product(c.hom_at(a, d), c.hom_at(d, e));
          Map path1 = compose(
              left.pair(compose(front.pair(triple.proj[0], triple.proj[1]), c.comp_at(a, b, d)),
                        triple.proj[2]),
              c.comp_at(a, d, e));
          Prod back = product(c.hom_at(b, d), c.hom_at(d, e));
          Prod right = product(c.hom_at(a, b), c.hom_at(b, e));
          Map path2 = compose(
              right.pair(triple.proj[0],
                         compose(back.pair(triple.proj[1], triple.proj[2]), c.comp_at(b, d, e))),
              c.comp_at(a, b, e));
          if (!map_equal(path1, path2))
            r.add("associativity (" + a + "," + b + "," + d + "," + e + "): " +
                  diff_witness(path1, path2));
        }
  return r;
}

ValidationReport validate_presheaf(const VPresheaf& f) {
  ValidationReport r;
  const VCategory& c = f.base;
  for (const auto& a : c.objects)
    if (!f.onobj.count(a)) r.add("missing value at " + a);
  if (!r.ok()) return r;
  for (const auto& a : c.objects)
    for (const auto& b : c.objects) {
      auto it = f.ev.find({a, b});
      if (it == f.ev.end()) {
        r.add("missing ev at (" + a + "," + b + ")");
        continue;
      }
      Prod p = product(c.hom_at(a, b), f.at(b));
      if (!(it->second.dom == p.obj) || !(it->second.cod == f.at(a)))
        r.add("ev at (" + a + "," + b + ") has wrong boundary");
    }
  if (!r.ok()) return r;

  for (const auto& a : c.objects) {
    const Obj& fa = f.at(a);
    Map law = compose(insert_unit_left(fa, c.ident_at(a)), f.ev_at(a, a));
    if (!map_equal(law, identity(fa)))
      r.add("identity compatibility (" + a + "): " + diff_witness(law, identity(fa)));
  }
  for (const auto& a : c.objects)
    for (const auto& b : c.objects)
      for (const auto& d : c.objects) {
        NProd triple = nary_product({c.hom_at(a, b), c.hom_at(b, d), f.at(d)});
        Prod front = product(c.hom_at(a, b), c.hom_at(b, d));
        Prod left = product(c.hom_at(a, d), f.at(d));
        Map path1 = compose(
            left.pair(compose(front.pair(triple.proj[0], triple.proj[1]), c.comp_at(a, b, d)),
                      triple.proj[2]),
            f.ev_at(a, d));
        Prod back = product(c.hom_at(b, d), f.at(d));
        Prod right = product(c.hom_at(a, b), f.at(b));
        Map path2 = compose(
            right.pair(triple.proj[0],
                       compose(back.pair(triple.proj[1], triple.proj[2]), f.ev_at(b, d))),
            f.ev_at(a, b));
        if (!map_equal(path1, path2))
          r.add("composition compatibility (" + a + "," + b + "," + d + "): " +
                diff_witness(path1, path2));
      }
  return r;
}

ValidationReport validate_vnat(const VPresheaf& f, const VPresheaf& g, const VNat& a) {
  ValidationReport r;
  const VCategory& c = f.base;
  for (const auto& x : c.objects) {
    auto it = a.component.find(x);
    if (it == a.component.end()) {
      r.add("missing component at " + x);
      continue;
    }
    if (!(it->second.dom == f.at(x)) || !(it->second.cod == g.at(x)))
      r.add("component at " + x + " has wrong boundary");
  }
  if (!r.ok()) return r;
  for (const auto& x : c.objects)
    for (const auto& y : c.objects) {
      Map lhs = compose(f.ev_at(x, y), a.at(x));
      Map rhs = compose(times(identity(c.hom_at(x, y)), a.at(y)), g.ev_at(x, y));
      if (!map_equal(lhs, rhs))
        r.add("naturality (" + x + "," + y + "): " + diff_witness(lhs, rhs));
    }
  return r;
}

ValidationReport validate_vfunctor_to_v(const VFunctorToV& w) {
  ValidationReport r;
  const VCategory& c = w.source;
  for (const auto& i : c.objects)
    if (!w.onobj.count(i)) r.add("missing value at " + i);
  if (!r.ok()) return r;
  for (const auto& i : c.objects)
    for (const auto& j : c.objects) {
      auto it = w.ev.find({i, j});
      if (it == w.ev.end()) {
        r.add("missing ev at (" + i + "," + j + ")");
        continue;
      }
      Prod p = product(w.at(i), c.hom_at(i, j));
      if (!(it->second.dom == p.obj) || !(it->second.cod == w.at(j)))
        r.add("ev at (" + i + "," + j + ") has wrong boundary");
    }
  if (!r.ok()) return r;

  for (const auto& i : c.objects) {
    const Obj& wi = w.at(i);
    Map law = compose(insert_unit_right(wi, c.ident_at(i)), w.ev_at(i, i));
    if (!map_equal(law, identity(wi)))
      r.add("identity compatibility (" + i + "): " + diff_witness(law, identity(wi)));
  }
  for (const auto& i : c.objects)
    for (const auto& j : c.objects)
      for (const auto& k : c.objects) {
        NProd triple = nary_product({w.at(i), c.hom_at(i, j), c.hom_at(j, k)});
        Prod front = product(w.at(i), c.hom_at(i, j));
        Prod left = product(w.at(j), c.hom_at(j, k));
        Map path1 = compose(
            left.pair(compose(front.pair(triple.proj[0], triple.proj[1]), w.ev_at(i, j)),
                      triple.proj[2]),
            w.ev_at(j, k));
        Prod back = product(c.hom_at(i, j), c.hom_at(j, k));
        Prod right = product(w.at(i), c.hom_at(i, k));
        Map path2 = compose(
            right.pair(triple.proj[0],
                       compose(back.pair(triple.proj[1], triple.proj[2]), c.comp_at(i, j, k))),
            w.ev_at(i, k));
        if (!map_equal(path1, path2))
          r.add("composition compatibility (" + i + "," + j + "," + k + "): " +
                diff_witness(path1, path2));
      }
  return r;
}

ValidationReport validate_vfunctor_cc(const VFunctorCC& k) {
  ValidationReport r;
  const VCategory& c = k.source;
  const VCategory& d = k.target;
  for (const auto& a : c.objects) {
    if (!k.onobj.count(a)) {
      r.add("missing object value at " + a);
      continue;
    }
    if (!d.has_object(k.at(a))) r.add("object value at " + a + " not in target");
  }
  if (!r.ok()) return r;
  for (const auto& a : c.objects)
    for (const auto& b : c.objects) {
      auto it = k.hom_map.find({a, b});
      if (it == k.hom_map.end()) {
        r.add("missing hom map at (" + a + "," + b + ")");
        continue;
      }
      if (!(it->second.dom == c.hom_at(a, b)) || !(it->second.cod == d.hom_at(k.at(a), k.at(b))))
        r.add("hom map at (" + a + "," + b + ") has wrong boundary");
    }
  if (!r.ok()) return r;
  for (const auto& a : c.objects) {
    Map lhs = compose(c.ident_at(a), k.hom_at(a, a));
    if (!map_equal(lhs, d.ident_at(k.at(a))))
      r.add("identity compatibility (" + a + "): " + diff_witness(lhs, d.ident_at(k.at(a))));
  }
  for (const auto& a : c.objects)
    for (const auto& b : c.objects)
      for (const auto& e : c.objects) {
        Map lhs = compose(c.comp_at(a, b, e), k.hom_at(a, e));
        Map rhs =
            compose(times(k.hom_at(a, b), k.hom_at(b, e)), d.comp_at(k.at(a), k.at(b), k.at(e)));
        if (!map_equal(lhs, rhs))
          r.add("composition compatibility (" + a + "," + b + "," + e + "): " +
                diff_witness(lhs, rhs));
      }
  return r;
}

ValidationReport validate_cov_vnat(const VFunctorToV& w, const VFunctorToV& v, const CovVNat& a) {
  ValidationReport r;
  const VCategory& c = w.source;
  for (const auto& i : c.objects) {
    auto it = a.component.find(i);
    if (it == a.component.end()) {
      r.add("missing component at " + i);
      continue;
    }
    if (!(it->second.dom == w.at(i)) || !(it->second.cod == v.at(i)))
      r.add("component at " + i + " has wrong boundary");
  }
  if (!r.ok()) return r;
  for (const auto& i : c.objects)
    for (const auto& j : c.objects) {
      Map lhs = compose(w.ev_at(i, j), a.at(j));
      Map rhs = compose(times(a.at(i), identity(c.hom_at(i, j))), v.ev_at(i, j));
      if (!map_equal(lhs, rhs))
        r.add("naturality (" + i + "," + j + "): " + diff_witness(lhs, rhs));
    }
  return r;
}

// ---------------------------------------------------------------------------
// constructions

VCategory opposite(const VCategory& c) {
  VCategory o;
  o.cosmos = c.cosmos;
  o.objects = c.objects;
  for (const auto& a : c.objects)
    for (const auto& b : c.objects) o.hom[{a, b}] = c.hom_at(b, a);
  for (const auto& a : c.objects) o.ident[a] = c.ident_at(a);
  for (const auto& a : c.objects)
    for (const auto& b : c.objects)
      for (const auto& d : c.objects) {
        Prod p = product(o.hom_at(a, b), o.hom_at(b, d));
        Prod q = product(c.hom_at(d, b), c.hom_at(b, a));
        o.comp[{a, b, d}] = compose(q.pair(p.p1, p.p0), c.comp_at(d, b, a));
      }
  return o;
}

VCategory poset_vcat(CosmosTag t, const std::vector<Label>& objects,
                     const std::function<bool(const Label&, const Label&)>& leq) {
  VCategory c;
  c.cosmos = t;
  c.objects = objects;
  for (const auto& a : objects)
    for (const auto& b : objects) c.hom[{a, b}] = leq(a, b) ? terminal(t) : initial(t);
  for (const auto& a : objects) c.ident[a] = identity(terminal(t));
  for (const auto& a : objects)
    for (const auto& b : objects)
      for (const auto& d : objects) {
        Prod p = product(c.hom_at(a, b), c.hom_at(b, d));
        if (p.obj.empty()) {
          Map m;
          m.dom = p.obj;
          m.cod = c.hom_at(a, d);
          c.comp[{a, b, d}] = std::move(m);
        } else {
          c.comp[{a, b, d}] = bang(p.obj);
        }
      }
  return c;
}

VCategory unit_vcat(CosmosTag t) {
  return poset_vcat(t, {"0"}, [](const Label&, const Label&) { return true; });
}

VCategory arrow_vcat(CosmosTag t) {
  return poset_vcat(t, {"0", "1"}, [](const Label& a, const Label& b) { return a <= b; });
}

VCategory product_vcat(const VCategory& c, const VCategory& d) {
  VCategory p;
  p.cosmos = c.cosmos;
  std::map<Label, std::pair<Label, Label>> split;
  for (const auto& a : c.objects)
    for (const auto& b : d.objects) {
      p.objects.push_back(pair_label(a, b));
      split[pair_label(a, b)] = {a, b};
    }
  for (const auto& x : p.objects)
    for (const auto& y : p.objects) {
      auto [a, b] = split.at(x);
      auto [a2, b2] = split.at(y);
      p.hom[{x, y}] = product(c.hom_at(a, a2), d.hom_at(b, b2)).obj;
    }
  for (const auto& x : p.objects) {
    auto [a, b] = split.at(x);
    Prod pr = product(c.hom_at(a, a), d.hom_at(b, b));
    p.ident[x] = pr.pair(c.ident_at(a), d.ident_at(b));
  }
  for (const auto& x : p.objects)
    for (const auto& y : p.objects)
      for (const auto& z : p.objects) {
        auto [a, b] = split.at(x);
        auto [a2, b2] = split.at(y);
        auto [a3, b3] = split.at(z);
        Prod h1 = product(c.hom_at(a, a2), d.hom_at(b, b2));
        Prod h2 = product(c.hom_at(a2, a3), d.hom_at(b2, b3));
        Prod t = product(h1.obj, h2.obj);
        Prod cc = product(c.hom_at(a, a2), c.hom_at(a2, a3));
        Prod dd = product(d.hom_at(b, b2), d.hom_at(b2, b3));
        Map cside =
            compose(cc.pair(compose(t.p0, h1.p0), compose(t.p1, h2.p0)), c.comp_at(a, a2, a3));
        Map dside =
            compose(dd.pair(compose(t.p0, h1.p1), compose(t.p1, h2.p1)), d.comp_at(b, b2, b3));
        Prod res = product(c.hom_at(a, a3), d.hom_at(b, b3));
        p.comp[{x, y, z}] = res.pair(cside, dside);
      }
  return p;
}

VPresheaf representable(const VCategory& c, const Label& obj) {
  if (!c.has_object(obj)) throw LookupError("representable: unknown object " + obj);
  VPresheaf f;
  f.base = c;
  for (const auto& a : c.objects) f.onobj[a] = c.hom_at(a, obj);
  for (const auto& a : c.objects)
    for (const auto& b : c.objects) f.ev[{a, b}] = c.comp_at(a, b, obj);
  return f;
}

VPresheaf constant_presheaf(const VCategory& c, const Obj& value) {
  VPresheaf f;
  f.base = c;
  for (const auto& a : c.objects) f.onobj[a] = value;
  for (const auto& a : c.objects)
    for (const auto& b : c.objects) f.ev[{a, b}] = product(c.hom_at(a, b), value).p1;
  return f;
}

VPresheaf product_presheaf(const VPresheaf& f, const VPresheaf& g) {
  const VCategory& c = f.base;
  VPresheaf h;
  h.base = c;
  for (const auto& a : c.objects) h.onobj[a] = product(f.at(a), g.at(a)).obj;
  for (const auto& a : c.objects)
    for (const auto& b : c.objects) {
      Prod vb = product(f.at(b), g.at(b));
      Prod dom = product(c.hom_at(a, b), vb.obj);
      Prod fdom = product(c.hom_at(a, b), f.at(b));
      Prod gdom = product(c.hom_at(a, b), g.at(b));
      Map fpart = compose(fdom.pair(dom.p0, compose(dom.p1, vb.p0)), f.ev_at(a, b));
      Map gpart = compose(gdom.pair(dom.p0, compose(dom.p1, vb.p1)), g.ev_at(a, b));
      h.ev[{a, b}] = product(f.at(a), g.at(a)).pair(fpart, gpart);
    }
  return h;
}

VPresheaf restrict_presheaf(const VFunctorCC& k, const VPresheaf& f) {
  VPresheaf h;
  h.base = k.source;
  for (const auto& a : k.source.objects) h.onobj[a] = f.at(k.at(a));
  for (const auto& a : k.source.objects)
    for (const auto& b : k.source.objects)
      h.ev[{a, b}] =
          compose(times(k.hom_at(a, b), identity(f.at(k.at(b)))), f.ev_at(k.at(a), k.at(b)));
  return h;
}

VNat yoneda_nat(const VPresheaf& f, const Label& c, const Map& x) {
  const VCategory& base = f.base;
  if (!(x.dom == terminal(base.cosmos)) || !(x.cod == f.at(c)))
    throw ValidationError("yoneda_nat: element has wrong boundary");
  VNat a;
  for (const auto& obj : base.objects) {
    const Obj& h = base.hom_at(obj, c);
    a.component[obj] = compose(insert_unit_right(h, x), f.ev_at(obj, c));
  }
  return a;
}

bool is_representable_by(const VPresheaf& f, const Label& c, const Map& x) {
  VNat a = yoneda_nat(f, c, x);
  for (const auto& [obj, m] : a.component)
    if (!is_iso(m)) return false;
  return true;
}

std::vector<EnrichedElement> find_representations(const VPresheaf& f) {
  std::vector<EnrichedElement> out;
  for (const auto& c : f.base.objects)
    for (const auto& x : global_elements(f.at(c)))
      if (is_representable_by(f, c, x)) out.push_back({c, x});
  return out;
}

// ---------------------------------------------------------------------------
// ends

Map End::factor_in(const std::vector<Map>& us) const {
  Subproduct sp;
  sp.obj = obj;
  sp.comp = comp;
  return sp.factor_in(us);
}

Map End::factor_in_from(const Obj& dom, const std::vector<Map>& us) const {
  if (!us.empty()) return factor_in(us);
  Map m = bang(dom);
  m.cod = obj;
  return m;
}

const Map& End::proj(const Label& i) const {
  for (std::size_t k = 0; k < index.size(); ++k)
    if (index[k] == i) return comp[k];
  throw LookupError("end has no projection at " + i);
}

const Expo& End::expo(const Label& i) const {
  for (std::size_t k = 0; k < index.size(); ++k)
    if (index[k] == i) return factor[k];
  throw LookupError("end has no factor at " + i);
}

End functor_hom(const VFunctorToV& f, const VFunctorToV& g) {
  if (!(f.source == g.source)) throw ValidationError("functor_hom: functors have different sources");
  const VCategory& src = f.source;
  if (src.objects.empty()) {
    End empty;
    empty.obj = terminal(src.cosmos);
    return empty;
  }
  auto end = std::make_shared<End>();
  std::vector<Obj> factors;
  for (const auto& i : src.objects) {
    end->index.push_back(i);
    Expo e = exponential(f.at(i), g.at(i));
    factors.push_back(e.obj);
    end->factor.push_back(std::move(e));
  }
  auto idx = [&](const Label& i) -> std::size_t {
    return static_cast<std::size_t>(std::find(end->index.begin(), end->index.end(), i) -
                                    end->index.begin());
  };

  auto fp = std::make_shared<VFunctorToV>(f);
  auto gp = std::make_shared<VFunctorToV>(g);

  std::vector<SubproductConstraint> cons;
  for (const auto& i : src.objects)
    for (const auto& j : src.objects) {
      const Obj& homij = src.hom_at(i, j);
      auto cellsp = std::make_shared<std::vector<Label>>(hom_object_cells(homij));
      bool has_two_cells = !homij.is_finset() && !homij.cat().morphisms.empty();
      if (cellsp->empty() && !has_two_cells) continue;

      auto fm = std::make_shared<std::map<Label, Map>>();
      auto gm = std::make_shared<std::map<Label, Map>>();
      for (const auto& m : *cellsp) {
        (*fm)[m] = f.act(i, j, m);
        (*gm)[m] = g.act(i, j, m);
      }
      const std::size_t ii = idx(i), jj = idx(j);

      SubproductConstraint c;
      c.i = ii;
      c.j = jj;
      // i-side: the family m |-> alpha_i ; G(m)
      c.fi = [gm, cellsp, end, ii](const Label& ai) {
        std::ostringstream key;
        const Map& a = end->factor[ii].fn_of.at(ai);
        for (const auto& m : *cellsp)
          key << esc(exponential_element_label(compose(a, gm->at(m)))) << ";";
        return key.str();
      };
      // j-side: the family m |-> F(m) ; alpha_j
      c.fj = [fm, cellsp, end, jj](const Label& aj) {
        std::ostringstream key;
        const Map& a = end->factor[jj].fn_of.at(aj);
        for (const auto& m : *cellsp)
          key << esc(exponential_element_label(compose(fm->at(m), a))) << ";";
        return key.str();
      };
      if (!homij.is_finset()) {
        auto homp = std::make_shared<Obj>(homij);
        const Label il = i, jl = j;
        // 2-cells of the hom-category act on both sides of the condition
        auto fi2 = [gp, homp, end, ii, il, jl](const Label& ai) {
          std::ostringstream key;
          const Map& a = end->factor[ii].fn_of.at(ai);
          for (const auto& mu : homp->cat().morphisms) {
            Map gsrc = gp->act(il, jl, mu.src);
            Map gtgt = gp->act(il, jl, mu.tgt);
            auto comp2 = gp->act2(il, jl, mu.name);
            std::map<Label, Label> nat;
            for (const auto& x : a.dom.cat().objects) nat[x] = comp2.at(a(x));
            key << esc(exponential_nat_label(compose(a, gsrc), compose(a, gtgt), nat)) << ";";
          }
          return key.str();
        };
        auto fj2 = [fp, homp, end, jj, il, jl](const Label& aj) {
          std::ostringstream key;
          const Map& a = end->factor[jj].fn_of.at(aj);
          for (const auto& mu : homp->cat().morphisms) {
            Map fsrc = fp->act(il, jl, mu.src);
            Map ftgt = fp->act(il, jl, mu.tgt);
            auto comp2 = fp->act2(il, jl, mu.name);
            std::map<Label, Label> nat;
            for (const auto& x : fsrc.dom.cat().objects) nat[x] = a.mor(comp2.at(x));
            key << esc(exponential_nat_label(compose(fsrc, a), compose(ftgt, a), nat)) << ";";
          }
          return key.str();
        };
        auto base_fi = c.fi;
        auto base_fj = c.fj;
        c.fi = [base_fi, fi2](const Label& ai) { return base_fi(ai) + "#" + fi2(ai); };
        c.fj = [base_fj, fj2](const Label& aj) { return base_fj(aj) + "#" + fj2(aj); };
        // morphism level: whiskered transformations must agree
        c.fi_mor = [gm, cellsp, end, ii](const Label& mui) {
          std::ostringstream key;
          const Expo& ei = end->factor[ii];
          const auto& comps = ei.nat_components.at(mui);
          const MorRec& rec = ei.obj.cat().mor(mui);
          const Map& asrc = ei.fn_of.at(rec.src);
          const Map& atgt = ei.fn_of.at(rec.tgt);
          for (const auto& m : *cellsp) {
            std::map<Label, Label> nat;
            for (const auto& [x, cmp] : comps) nat[x] = gm->at(m).mor(cmp);
            key << esc(exponential_nat_label(compose(asrc, gm->at(m)), compose(atgt, gm->at(m)),
                                             nat))
                << ";";
          }
          return key.str();
        };
        c.fj_mor = [fm, cellsp, end, jj](const Label& muj) {
          std::ostringstream key;
          const Expo& ej = end->factor[jj];
          const auto& comps = ej.nat_components.at(muj);
          const MorRec& rec = ej.obj.cat().mor(muj);
          const Map& asrc = ej.fn_of.at(rec.src);
          const Map& atgt = ej.fn_of.at(rec.tgt);
          for (const auto& m : *cellsp) {
            std::map<Label, Label> nat;
            const Map& fmm = fm->at(m);
            for (const auto& x : fmm.dom.cat().objects) nat[x] = comps.at(fmm(x));
            key << esc(exponential_nat_label(compose(fmm, asrc), compose(fmm, atgt), nat)) << ";";
          }
          return key.str();
        };
      }
      cons.push_back(std::move(c));
    }

  Subproduct sp = constrained_subproduct(factors, cons);
  End out = *end;
  out.obj = sp.obj;
  out.comp = sp.comp;
  return out;
}

VFunctorToV hom_functor(const VCategory& c, const Label& a, const VFunctorCC& g) {
  VFunctorToV h;
  h.source = g.source;
  for (const auto& i : g.source.objects) h.onobj[i] = c.hom_at(a, g.at(i));
  for (const auto& i : g.source.objects)
    for (const auto& j : g.source.objects) {
      Map act = times(identity(c.hom_at(a, g.at(i))), g.hom_at(i, j));
      h.ev[{i, j}] = compose(act, c.comp_at(a, g.at(i), g.at(j)));
    }
  return h;
}

WeightedConePresheaf weighted_cone_presheaf(const VFunctorToV& w, const VFunctorCC& g) {
  if (!(w.source == g.source)) throw ValidationError("weighted_cone_presheaf: shape mismatch");
  const VCategory& c = g.target;
  WeightedConePresheaf out;
  out.presheaf.base = c;
  for (const auto& a : c.objects) {
    End e = functor_hom(w, hom_functor(c, a, g));
    out.presheaf.onobj[a] = e.obj;
    out.ends.emplace(a, std::move(e));
  }
  for (const auto& a : c.objects)
    for (const auto& b : c.objects) {
      const End& eb = out.ends.at(b);
      const End& ea = out.ends.at(a);
      Prod dom = product(c.hom_at(a, b), eb.obj);
      std::vector<Map> comps;
      for (std::size_t k = 0; k < ea.index.size(); ++k) {
        const Label& i = ea.index[k];
        const Obj& wi = w.at(i);
        Prod t = product(wi, dom.obj);
        Map fpart = compose(t.p1, dom.p0);
        Map phipart = compose(t.p1, compose(dom.p1, eb.proj(i)));
        const Expo& ebi = eb.expo(i);
        Prod evdom = product(wi, ebi.obj);
        Map value = compose(evdom.pair(t.p0, phipart), ebi.eval());  // Wi x dom -> C(B,Gi)
        Prod cpair = product(c.hom_at(a, b), value.cod);
        Map r = compose(cpair.pair(fpart, value), c.comp_at(a, b, g.at(i)));
        comps.push_back(curry(r, wi, dom.obj));
      }
      out.presheaf.ev[{a, b}] = ea.factor_in_from(dom.obj, comps);
    }
  return out;
}

}  // namespace vcat
