#include "vcat/cosmos.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string_view>
#include <unordered_set>

namespace vcat {

void check_budget(std::size_t cells) {
  if (cells > kCellBudget) {
    throw CapError("enumeration budget exceeded (" + std::to_string(cells) + " cells)");
  }
}

// ---------------------------------------------------------------------------
// Label combinators

Label esc(const Label& s) {
  static const std::string specials = "\\(),:{}|";
  Label out;
  out.reserve(s.size());
  for (char c : s) {
    if (specials.find(c) != std::string::npos) out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

namespace {

// Long components of composite labels are replaced by a fixed 128-bit
// digest so label size stays bounded under nested constructions. The
// digest is a pure function of the content, so labels stay deterministic.
constexpr std::size_t kShortenThreshold = 48;

Label shorten(const Label& s) {
  if (s.size() <= kShortenThreshold) return s;
  std::uint64_t h1 = 1469598103934665603ULL;  // FNV-1a
  std::uint64_t h2 = 1099511628211ULL * 31 + 17;
  for (unsigned char c : s) {
    h1 = (h1 ^ c) * 1099511628211ULL;
    h2 = (h2 * 0x100000001b3ULL) ^ (c + 0x9e3779b97f4a7c15ULL);
    h2 ^= h2 >> 29;
  }
  char buf[48];
  std::snprintf(buf, sizeof(buf), "#%016llx%016llx~%zu", static_cast<unsigned long long>(h1),
                static_cast<unsigned long long>(h2), s.size());
  return Label(buf);
}

Label join_escaped(const std::vector<Label>& parts) {
  Label out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) out.push_back(',');
    out += esc(shorten(parts[k]));
  }
  return out;
}

}  // namespace

Label pair_label(const Label& a, const Label& b) {
  return "(" + esc(shorten(a)) + "," + esc(shorten(b)) + ")";
}

Label tuple_label(const std::vector<Label>& parts) { return "(" + join_escaped(parts) + ")"; }

Label tag_label(const Label& tag, const Label& x) { return esc(tag) + ":" + esc(shorten(x)); }

Label fn_label(const std::vector<Label>& values) { return "{" + join_escaped(values) + "}"; }

Label functor_label(const std::vector<Label>& obj_values, const std::vector<Label>& mor_values) {
  return "F{" + join_escaped(obj_values) + "|" + join_escaped(mor_values) + "}";
}

Label nat_label(const Label& src_functor, const Label& tgt_functor, const std::vector<Label>& components) {
  return "t{" + esc(shorten(src_functor)) + "|" + esc(shorten(tgt_functor)) + "|" +
         join_escaped(components) + "}";
}

// ---------------------------------------------------------------------------
// FinCatData

bool FinCatData::has_object(const Label& o) const {
  return std::find(objects.begin(), objects.end(), o) != objects.end();
}

const MorRec& FinCatData::mor(const Label& m) const {
  for (const auto& r : morphisms)
    if (r.name == m) return r;
  throw LookupError("unknown morphism '" + m + "'");
}

const Label& FinCatData::id_of(const Label& o) const {
  auto it = identity.find(o);
  if (it == identity.end()) throw LookupError("no identity for object '" + o + "'");
  return it->second;
}

const Label& FinCatData::compose2(const Label& f, const Label& g) const {
  auto it = comp.find({f, g});
  if (it == comp.end()) throw LookupError("no composite for '" + f + ";" + g + "'");
  return it->second;
}

std::vector<Label> FinCatData::hom(const Label& a, const Label& b) const {
  std::vector<Label> out;
  for (const auto& r : morphisms)
    if (r.src == a && r.tgt == b) out.push_back(r.name);
  return out;
}

bool FinCatData::operator==(const FinCatData& o) const {
  return objects == o.objects && morphisms == o.morphisms && identity == o.identity && comp == o.comp;
}

// ---------------------------------------------------------------------------
// Obj

Obj Obj::finset(std::vector<Label> elements) {
  Obj x;
  x.tag_ = CosmosTag::finset;
  x.elems_ = std::make_shared<const std::vector<Label>>(std::move(elements));
  return x;
}

Obj Obj::fincat(FinCatData data) {
  Obj x;
  x.tag_ = CosmosTag::fincat;
  x.elems_.reset();
  x.cat_ = std::make_shared<const FinCatData>(std::move(data));
  return x;
}

const std::vector<Label>& Obj::elements() const {
  if (tag_ != CosmosTag::finset) throw Error("not a finset object");
  return *elems_;
}

const FinCatData& Obj::cat() const {
  if (tag_ != CosmosTag::fincat) throw Error("not a fincat object");
  return *cat_;
}

std::size_t Obj::cell_count() const {
  if (tag_ == CosmosTag::finset) return elems_->size();
  return cat_->objects.size() + cat_->morphisms.size();
}

bool Obj::operator==(const Obj& o) const {
  if (tag_ != o.tag_) return false;
  if (tag_ == CosmosTag::finset) return elems_ == o.elems_ || *elems_ == *o.elems_;
  return cat_ == o.cat_ || *cat_ == *o.cat_;
}

bool Obj::operator<(const Obj& o) const {
  if (tag_ != o.tag_) return tag_ < o.tag_;
  if (tag_ == CosmosTag::finset) return *elems_ < *o.elems_;
  if (cat_->objects != o.cat_->objects) return cat_->objects < o.cat_->objects;
  auto key = [](const FinCatData& c) {
    std::vector<std::tuple<Label, Label, Label>> v;
    for (const auto& m : c.morphisms) v.emplace_back(m.name, m.src, m.tgt);
    return v;
  };
  if (key(*cat_) != key(*o.cat_)) return key(*cat_) < key(*o.cat_);
  if (cat_->identity != o.cat_->identity) return cat_->identity < o.cat_->identity;
  return cat_->comp < o.cat_->comp;
}

void Obj::validate() const {
  if (tag_ == CosmosTag::finset) {
    std::vector<Label> sorted = *elems_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ValidationError("finset has duplicate element labels");
    return;
  }
  const FinCatData& c = *cat_;
  {
    std::vector<Label> so = c.objects;
    std::sort(so.begin(), so.end());
    if (std::adjacent_find(so.begin(), so.end()) != so.end())
      throw ValidationError("fincat has duplicate object labels");
    std::vector<Label> sm;
    for (const auto& m : c.morphisms) sm.push_back(m.name);
    std::sort(sm.begin(), sm.end());
    if (std::adjacent_find(sm.begin(), sm.end()) != sm.end())
      throw ValidationError("fincat has duplicate morphism labels");
  }
  for (const auto& m : c.morphisms) {
    if (!c.has_object(m.src) || !c.has_object(m.tgt))
      throw ValidationError("morphism '" + m.name + "' has unknown endpoint");
  }
  for (const auto& o : c.objects) {
    const Label& i = c.id_of(o);
    if (c.src_of(i) != o || c.tgt_of(i) != o)
      throw ValidationError("identity of '" + o + "' has wrong endpoints");
  }
  // composition total exactly on composable pairs, with correct endpoints
  for (const auto& f : c.morphisms) {
    for (const auto& g : c.morphisms) {
      bool composable = f.tgt == g.src;
      auto it = c.comp.find({f.name, g.name});
      if (composable != (it != c.comp.end()))
        throw ValidationError("composition table mismatch at '" + f.name + ";" + g.name + "'");
      if (composable) {
        const MorRec& h = c.mor(it->second);
        if (h.src != f.src || h.tgt != g.tgt)
          throw ValidationError("composite '" + f.name + ";" + g.name + "' has wrong endpoints");
      }
    }
  }
  for (const auto& f : c.morphisms) {
    if (c.compose2(c.id_of(f.src), f.name) != f.name || c.compose2(f.name, c.id_of(f.tgt)) != f.name)
      throw ValidationError("unit law fails at '" + f.name + "'");
  }
  // exhaustive associativity scan
  for (const auto& f : c.morphisms)
    for (const auto& g : c.morphisms) {
      if (f.tgt != g.src) continue;
      for (const auto& h : c.morphisms) {
        if (g.tgt != h.src) continue;
        if (c.compose2(c.compose2(f.name, g.name), h.name) != c.compose2(f.name, c.compose2(g.name, h.name)))
          throw ValidationError("associativity fails at '" + f.name + ";" + g.name + ";" + h.name + "'");
      }
    }
}

// ---------------------------------------------------------------------------
// Map

const Label& Map::operator()(const Label& x) const {
  auto it = on.find(x);
  if (it == on.end()) throw LookupError("map undefined on '" + x + "'");
  return it->second;
}

const Label& Map::mor(const Label& m) const {
  auto it = on_mor.find(m);
  if (it == on_mor.end()) throw LookupError("map undefined on morphism '" + m + "'");
  return it->second;
}

void Map::validate() const {
  if (dom.tag() != cod.tag()) throw ValidationError("map crosses cosmos instances");
  if (dom.is_finset()) {
    if (on.size() != dom.elements().size()) throw ValidationError("map not total");
    for (const auto& e : dom.elements()) {
      const Label& v = (*this)(e);
      if (std::find(cod.elements().begin(), cod.elements().end(), v) == cod.elements().end())
        throw ValidationError("value '" + v + "' not in codomain");
    }
    return;
  }
  const FinCatData& dc = dom.cat();
  const FinCatData& cc = cod.cat();
  if (on.size() != dc.objects.size() || on_mor.size() != dc.morphisms.size())
    throw ValidationError("functor not total");
  for (const auto& o : dc.objects)
    if (!cc.has_object((*this)(o))) throw ValidationError("object value not in codomain");
  for (const auto& m : dc.morphisms) {
    const MorRec& r = cc.mor(mor(m.name));
    if (r.src != (*this)(m.src) || r.tgt != (*this)(m.tgt))
      throw ValidationError("functor breaks source/target at '" + m.name + "'");
  }
  for (const auto& o : dc.objects)
    if (mor(dc.id_of(o)) != cc.id_of((*this)(o)))
      throw ValidationError("functor breaks identity at '" + o + "'");
  for (const auto& f : dc.morphisms)
    for (const auto& g : dc.morphisms) {
      if (f.tgt != g.src) continue;
      if (mor(dc.compose2(f.name, g.name)) != cc.compose2(mor(f.name), mor(g.name)))
        throw ValidationError("functor breaks composition at '" + f.name + ";" + g.name + "'");
    }
}

bool Map::operator==(const Map& o) const {
  return dom == o.dom && cod == o.cod && on == o.on && on_mor == o.on_mor;
}

Map identity(const Obj& x) {
  Map m;
  m.dom = m.cod = x;
  if (x.is_finset()) {
    for (const auto& e : x.elements()) m.on[e] = e;
  } else {
    for (const auto& o : x.cat().objects) m.on[o] = o;
    for (const auto& r : x.cat().morphisms) m.on_mor[r.name] = r.name;
  }
  return m;
}

Map compose(const Map& f, const Map& g) {
  if (!(f.cod == g.dom)) throw Error("compose: codomain of first map differs from domain of second");
  Map h;
  h.dom = f.dom;
  h.cod = g.cod;
  for (const auto& [k, v] : f.on) h.on[k] = g(v);
  for (const auto& [k, v] : f.on_mor) h.on_mor[k] = g.mor(v);
  return h;
}

Map compose(const Map& f, const Map& g, const Map& h) { return compose(compose(f, g), h); }
Map compose(const Map& f, const Map& g, const Map& h, const Map& k) {
  return compose(compose(f, g, h), k);
}

bool map_equal(const Map& f, const Map& g) { return f == g; }

bool is_iso(const Map& f) {
  auto bijective = [](const std::map<Label, Label>& table, std::size_t cod_size) {
    std::vector<Label> vals;
    vals.reserve(table.size());
    for (const auto& [k, v] : table) vals.push_back(v);
    std::sort(vals.begin(), vals.end());
    if (std::adjacent_find(vals.begin(), vals.end()) != vals.end()) return false;
    return vals.size() == cod_size;
  };
  if (f.dom.is_finset()) return bijective(f.on, f.cod.elements().size());
  return bijective(f.on, f.cod.cat().objects.size()) &&
         bijective(f.on_mor, f.cod.cat().morphisms.size());
}

Map invert(const Map& f) {
  if (!is_iso(f)) throw Error("invert: map is not an isomorphism");
  Map g;
  g.dom = f.cod;
  g.cod = f.dom;
  for (const auto& [k, v] : f.on) g.on[v] = k;
  for (const auto& [k, v] : f.on_mor) g.on_mor[v] = k;
  return g;
}

std::string diff_witness(const Map& f, const Map& g) {
  if (!(f.dom == g.dom) || !(f.cod == g.cod)) return "boundary mismatch";
  for (const auto& [k, v] : f.on)
    if (g(k) != v) return "at '" + k + "': '" + v + "' vs '" + g(k) + "'";
  for (const auto& [k, v] : f.on_mor)
    if (g.mor(k) != v) return "at morphism '" + k + "': '" + v + "' vs '" + g.mor(k) + "'";
  return "equal";
}

// ---------------------------------------------------------------------------
// Terminal, initial, elements

Obj terminal(CosmosTag t) {
  if (t == CosmosTag::finset) return Obj::finset({"*"});
  FinCatData c;
  c.objects = {"*"};
  c.morphisms = {{"id*", "*", "*"}};
  c.identity["*"] = "id*";
  c.comp[{"id*", "id*"}] = "id*";
  return Obj::fincat(c);
}

Obj initial(CosmosTag t) {
  if (t == CosmosTag::finset) return Obj::finset({});
  return Obj::fincat(FinCatData{});
}

Map bang(const Obj& x) {
  Map m;
  m.dom = x;
  m.cod = terminal(x.tag());
  if (x.is_finset()) {
    for (const auto& e : x.elements()) m.on[e] = "*";
  } else {
    for (const auto& o : x.cat().objects) m.on[o] = "*";
    for (const auto& r : x.cat().morphisms) m.on_mor[r.name] = "id*";
  }
  return m;
}

Map initial_map(const Obj& x) {
  Map m;
  m.dom = initial(x.tag());
  m.cod = x;
  return m;
}

std::vector<Map> global_elements(const Obj& x) {
  std::vector<Map> out;
  if (x.is_finset()) {
    for (const auto& e : x.elements()) {
      Map m;
      m.dom = terminal(x.tag());
      m.cod = x;
      m.on["*"] = e;
      out.push_back(std::move(m));
    }
  } else {
    for (const auto& o : x.cat().objects) {
      Map m;
      m.dom = terminal(x.tag());
      m.cod = x;
      m.on["*"] = o;
      m.on_mor["id*"] = x.cat().id_of(o);
      out.push_back(std::move(m));
    }
  }
  return out;
}

Map global_element(const Obj& x, const Label& name) {
  for (auto& m : global_elements(x))
    if (m("*") == name) return m;
  throw LookupError("no global element '" + name + "'");
}

const Label& point_label(const Map& pt) { return pt("*"); }

// ---------------------------------------------------------------------------
// Constrained subproduct (the canonical finite-limit workhorse)

namespace {

// constraint keys interned to ints, precomputed per factor cell
struct PreparedConstraint {
  std::size_t i, j;
  std::vector<long long> ki, kj;  // by cell position in the factors
};

std::vector<PreparedConstraint> prepare_constraints(
    const std::vector<std::vector<Label>>& cells, const std::vector<SubproductConstraint>& cons,
    bool mor_level) {
  std::vector<PreparedConstraint> out;
  std::map<Label, long long> intern;
  long long fresh = -1;
  auto key_ids = [&](const std::function<Label(const Label&)>& fn,
                     const std::vector<Label>& xs) {
    std::vector<long long> ids;
    ids.reserve(xs.size());
    for (const auto& x : xs) {
      try {
        Label k = fn(x);
        auto [it, inserted] = intern.try_emplace(k, static_cast<long long>(intern.size()));
        ids.push_back(it->second);
      } catch (const Error&) {
        ids.push_back(fresh--);  // unmatched by construction
      }
    }
    return ids;
  };
  for (const auto& c : cons) {
    const auto& fi = mor_level ? c.fi_mor : c.fi;
    const auto& fj = mor_level ? c.fj_mor : c.fj;
    if (!fi || !fj) continue;
    PreparedConstraint p;
    p.i = c.i;
    p.j = c.j;
    p.ki = key_ids(fi, cells[c.i]);
    p.kj = key_ids(fj, cells[c.j]);
    out.push_back(std::move(p));
  }
  return out;
}

// endpoint data for pruning morphism tuples against kept object tuples
struct EndpointPruning {
  // per factor, per morphism cell: positions of its source/target objects
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> cell_endpoints;
  const std::vector<std::vector<std::size_t>>* object_tuples = nullptr;
};

// Constraint-driven join: factors are visited in an order that follows the
// constraint graph, with candidates bucketed by the join keys. Results are
// re-sorted so the kept tuples come out in lexicographic (canonical) order
// of the original factor sequence.
std::vector<std::vector<std::size_t>> enumerate_constrained(
    const std::vector<std::vector<Label>>& cells, const std::vector<PreparedConstraint>& cons,
    const std::function<bool(const std::vector<Label>&)>& filter, const EndpointPruning* prune) {
  const std::size_t n = cells.size();

  // allowed positions per factor after self-constraints
  std::vector<std::vector<std::size_t>> allowed(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t p = 0; p < cells[k].size(); ++p) allowed[k].push_back(p);
  }
  for (const auto& c : cons) {
    if (c.i != c.j) continue;
    std::vector<std::size_t> next;
    for (std::size_t p : allowed[c.i])
      if (c.ki[p] == c.kj[p]) next.push_back(p);
    allowed[c.i] = std::move(next);
  }

  // processing order: prefer factors constrained against already-placed ones
  std::vector<std::size_t> order;
  std::vector<bool> placed(n, false);
  while (order.size() < n) {
    std::size_t best = n;
    bool best_linked = false;
    for (std::size_t k = 0; k < n; ++k) {
      if (placed[k]) continue;
      bool linked = false;
      for (const auto& c : cons) {
        if (c.i == c.j) continue;
        if ((c.i == k && placed[c.j]) || (c.j == k && placed[c.i])) linked = true;
      }
      if (best == n || (linked && !best_linked) ||
          (linked == best_linked && allowed[k].size() < allowed[best].size())) {
        best = k;
        best_linked = linked;
      }
    }
    placed[best] = true;
    order.push_back(best);
  }
  std::vector<std::size_t> level_of(n);
  for (std::size_t l = 0; l < n; ++l) level_of[order[l]] = l;

  // per level: a bucket-driving constraint (other endpoint already placed)
  // plus the remaining constraints to check inline
  struct LevelPlan {
    long long bucket_cons = -1;     // index into cons
    bool bucket_key_on_i = false;   // true if this factor is the i side
    std::vector<std::size_t> checks;
  };
  std::vector<LevelPlan> plan(n);
  for (std::size_t ci = 0; ci < cons.size(); ++ci) {
    const auto& c = cons[ci];
    if (c.i == c.j) continue;
    std::size_t late = std::max(level_of[c.i], level_of[c.j]);
    LevelPlan& lp = plan[late];
    if (lp.bucket_cons < 0) {
      lp.bucket_cons = static_cast<long long>(ci);
      lp.bucket_key_on_i = level_of[c.i] == late;
    } else {
      lp.checks.push_back(ci);
    }
  }

  // buckets for the driving constraints
  std::vector<std::map<long long, std::vector<std::size_t>>> buckets(n);
  for (std::size_t l = 0; l < n; ++l) {
    if (plan[l].bucket_cons < 0) continue;
    const auto& c = cons[plan[l].bucket_cons];
    const std::size_t f = order[l];
    const auto& keys = plan[l].bucket_key_on_i ? c.ki : c.kj;
    for (std::size_t p : allowed[f]) buckets[l][keys[p]].push_back(p);
  }

  std::vector<std::size_t> pos(n);
  std::vector<Label> labels(n);
  std::vector<std::vector<std::size_t>> kept;
  std::size_t visited = 0;

  // incremental src/tgt projections in visiting order
  std::vector<std::size_t> sproj, tproj;
  std::vector<std::vector<std::vector<std::size_t>>> proj_sets;  // per level, sorted
  if (prune) {
    proj_sets.resize(n + 1);
    for (const auto& t : *prune->object_tuples) {
      std::vector<std::size_t> acc;
      proj_sets[0].push_back(acc);
      for (std::size_t l = 0; l < n; ++l) {
        acc.push_back(t[order[l]]);
        proj_sets[l + 1].push_back(acc);
      }
    }
    for (auto& v : proj_sets) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
  }
  auto proj_ok = [&](std::size_t l, const std::vector<std::size_t>& p) {
    return std::binary_search(proj_sets[l].begin(), proj_sets[l].end(), p);
  };

  std::function<void(std::size_t)> go = [&](std::size_t l) {
    if (l == n) {
      if (filter) {
        for (std::size_t k = 0; k < n; ++k) labels[k] = cells[k][pos[k]];
        if (!filter(labels)) return;
      }
      kept.push_back(pos);
      return;
    }
    const std::size_t f = order[l];
    const std::vector<std::size_t>* candidates = &allowed[f];
    std::vector<std::size_t> empty_list;
    if (plan[l].bucket_cons >= 0) {
      const auto& c = cons[plan[l].bucket_cons];
      const auto& other_keys = plan[l].bucket_key_on_i ? c.kj : c.ki;
      const std::size_t other = plan[l].bucket_key_on_i ? c.j : c.i;
      auto it = buckets[l].find(other_keys[pos[other]]);
      candidates = it == buckets[l].end() ? &empty_list : &it->second;
    }
    for (std::size_t p : *candidates) {
      if (++visited > kCellBudget) throw CapError("subproduct enumeration budget exceeded");
      pos[f] = p;
      bool ok = true;
      for (std::size_t ci : plan[l].checks) {
        const auto& c = cons[ci];
        if (c.ki[pos[c.i]] != c.kj[pos[c.j]]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      if (prune) {
        sproj.push_back(prune->cell_endpoints[f][p].first);
        tproj.push_back(prune->cell_endpoints[f][p].second);
        bool pruned = !proj_ok(l + 1, sproj) || !proj_ok(l + 1, tproj);
        if (pruned) {
          sproj.pop_back();
          tproj.pop_back();
          continue;
        }
      }
      go(l + 1);
      if (prune) {
        sproj.pop_back();
        tproj.pop_back();
      }
    }
  };
  go(0);
  std::sort(kept.begin(), kept.end());
  return kept;
}

std::vector<Label> object_cells(const Obj& x) {
  if (x.is_finset()) return x.elements();
  return x.cat().objects;
}

std::vector<Label> morphism_cells(const Obj& x) {
  std::vector<Label> out;
  for (const auto& m : x.cat().morphisms) out.push_back(m.name);
  return out;
}

}  // namespace

namespace {

Map factor_into_tuple(const Obj& obj, const std::vector<const Map*>& us) {
  if (us.empty()) throw MediatorError("factor_in into empty product needs a reference domain");
  Map m;
  m.dom = us[0]->dom;
  m.cod = obj;
  const bool unary = us.size() == 1;
  auto tuple_of = [&](const Label& x, bool mor_level) -> Label {
    std::vector<Label> parts;
    parts.reserve(us.size());
    for (const auto* u : us) parts.push_back(mor_level ? u->mor(x) : (*u)(x));
    if (unary) return parts[0];
    return tuple_label(parts);
  };
  std::unordered_set<std::string_view> obj_cells;
  {
    const auto& cells = obj.is_finset() ? obj.elements() : obj.cat().objects;
    obj_cells.reserve(cells.size() * 2);
    for (const auto& c : cells) obj_cells.insert(c);
  }
  if (m.dom.is_finset()) {
    for (const auto& e : m.dom.elements()) {
      Label l = tuple_of(e, false);
      if (!obj_cells.count(l))
        throw MediatorError("factor_in: cone does not land in subproduct at '" + e + "'");
      m.on[e] = l;
    }
  } else {
    for (const auto& o : m.dom.cat().objects) {
      Label l = tuple_of(o, false);
      if (!obj_cells.count(l))
        throw MediatorError("factor_in: cone does not land in subproduct at '" + o + "'");
      m.on[o] = l;
    }
    std::unordered_set<std::string_view> mor_cells;
    mor_cells.reserve(obj.cat().morphisms.size() * 2);
    for (const auto& mr : obj.cat().morphisms) mor_cells.insert(mr.name);
    for (const auto& r : m.dom.cat().morphisms) {
      Label l = tuple_of(r.name, true);
      if (!mor_cells.count(l))
        throw MediatorError("factor_in: cone does not land in subproduct at morphism '" + r.name + "'");
      m.on_mor[r.name] = l;
    }
  }
  return m;
}

}  // namespace

Map Subproduct::factor_in(const std::vector<Map>& us) const {
  if (us.size() != comp.size()) throw MediatorError("factor_in: wrong number of components");
  std::vector<const Map*> ptrs;
  ptrs.reserve(us.size());
  for (const auto& u : us) ptrs.push_back(&u);
  return factor_into_tuple(obj, ptrs);
}

Subproduct constrained_subproduct(const std::vector<Obj>& factors,
                                  const std::vector<SubproductConstraint>& cons,
                                  const std::function<bool(const std::vector<Label>&)>& filter_obj,
                                  const std::function<bool(const std::vector<Label>&)>& filter_mor) {
  if (factors.empty()) {
    Subproduct sp;
    sp.obj = terminal(CosmosTag::finset);
    return sp;
  }
  const CosmosTag tag = factors[0].tag();
  for (const auto& f : factors)
    if (f.tag() != tag) throw Error("subproduct factors cross cosmos instances");
  const std::size_t n = factors.size();
  const bool unary = n == 1;

  std::vector<std::vector<Label>> obj_cells(n);
  for (std::size_t k = 0; k < n; ++k) obj_cells[k] = object_cells(factors[k]);

  auto label_of = [&](const std::vector<Label>& parts) {
    return unary ? parts[0] : tuple_label(parts);
  };

  Subproduct sp;
  std::vector<std::vector<std::size_t>> kept_positions =
      enumerate_constrained(obj_cells, prepare_constraints(obj_cells, cons, false), filter_obj,
                            nullptr);
  std::vector<Label> kept_objects;
  std::vector<std::vector<Label>> kept_object_tuples;
  kept_objects.reserve(kept_positions.size());
  for (const auto& p : kept_positions) {
    std::vector<Label> t(n);
    for (std::size_t k = 0; k < n; ++k) t[k] = obj_cells[k][p[k]];
    kept_objects.push_back(label_of(t));
    kept_object_tuples.push_back(std::move(t));
  }

  if (tag == CosmosTag::finset) {
    sp.obj = Obj::finset(kept_objects);
    for (std::size_t k = 0; k < n; ++k) {
      Map p;
      p.dom = sp.obj;
      p.cod = factors[k];
      for (std::size_t idx = 0; idx < kept_objects.size(); ++idx)
        p.on[kept_objects[idx]] = kept_object_tuples[idx][k];
      sp.comp.push_back(std::move(p));
    }
    return sp;
  }

  // fincat: morphism tuples with kept endpoints, then inherited structure
  std::vector<std::vector<Label>> mor_cells(n);
  for (std::size_t k = 0; k < n; ++k) mor_cells[k] = morphism_cells(factors[k]);

  EndpointPruning prune;
  prune.object_tuples = &kept_positions;
  prune.cell_endpoints.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::map<Label, std::size_t> obj_pos;
    for (std::size_t p = 0; p < obj_cells[k].size(); ++p) obj_pos[obj_cells[k][p]] = p;
    for (const auto& mname : mor_cells[k]) {
      const MorRec& r = factors[k].cat().mor(mname);
      prune.cell_endpoints[k].push_back({obj_pos.at(r.src), obj_pos.at(r.tgt)});
    }
  }

  FinCatData out;
  out.objects = kept_objects;
  std::vector<std::vector<Label>> kept_mor_tuples;
  for (const auto& p : enumerate_constrained(mor_cells, prepare_constraints(mor_cells, cons, true),
                                             filter_mor, &prune)) {
    std::vector<Label> t(n), s(n), tt(n);
    for (std::size_t k = 0; k < n; ++k) {
      t[k] = mor_cells[k][p[k]];
      const MorRec& r = factors[k].cat().mor(t[k]);
      s[k] = r.src;
      tt[k] = r.tgt;
    }
    out.morphisms.push_back({label_of(t), label_of(s), label_of(tt)});
    kept_mor_tuples.push_back(std::move(t));
  }

  // identities and composition, componentwise
  auto mor_index = [&]() {
    std::map<Label, std::size_t> ix;
    for (std::size_t q = 0; q < out.morphisms.size(); ++q) ix[out.morphisms[q].name] = q;
    return ix;
  }();
  for (std::size_t idx = 0; idx < kept_objects.size(); ++idx) {
    std::vector<Label> ids(n);
    for (std::size_t q = 0; q < n; ++q) ids[q] = factors[q].cat().id_of(kept_object_tuples[idx][q]);
    Label l = label_of(ids);
    if (!mor_index.count(l))
      throw ValidationError("subproduct not closed under identities (constraints are not functorial)");
    out.identity[kept_objects[idx]] = l;
  }
  for (std::size_t a = 0; a < out.morphisms.size(); ++a)
    for (std::size_t b = 0; b < out.morphisms.size(); ++b) {
      if (out.morphisms[a].tgt != out.morphisms[b].src) continue;
      std::vector<Label> comps(n);
      for (std::size_t q = 0; q < n; ++q)
        comps[q] = factors[q].cat().compose2(kept_mor_tuples[a][q], kept_mor_tuples[b][q]);
      Label l = label_of(comps);
      if (!mor_index.count(l))
        throw ValidationError("subproduct not closed under composition (constraints are not functorial)");
      out.comp[{out.morphisms[a].name, out.morphisms[b].name}] = l;
    }

  sp.obj = Obj::fincat(out);
  for (std::size_t k = 0; k < n; ++k) {
    Map p;
    p.dom = sp.obj;
    p.cod = factors[k];
    for (std::size_t idx = 0; idx < kept_objects.size(); ++idx)
      p.on[kept_objects[idx]] = kept_object_tuples[idx][k];
    for (std::size_t idx = 0; idx < kept_mor_tuples.size(); ++idx)
      p.on_mor[sp.obj.cat().morphisms[idx].name] = kept_mor_tuples[idx][k];
    sp.comp.push_back(std::move(p));
  }
  return sp;
}

// ---------------------------------------------------------------------------
// Products, pullbacks, equalizers, subobjects

Prod product(const Obj& x, const Obj& y) {
  Subproduct sp = constrained_subproduct({x, y}, {});
  Prod p;
  p.obj = sp.obj;
  p.p0 = sp.comp[0];
  p.p1 = sp.comp[1];
  return p;
}

Map Prod::pair(const Map& f, const Map& g) const { return factor_into_tuple(obj, {&f, &g}); }

Map times(const Map& f, const Map& g) {
  Prod src = product(f.dom, g.dom);
  Prod dst = product(f.cod, g.cod);
  return dst.pair(compose(src.p0, f), compose(src.p1, g));
}

NProd nary_product(const std::vector<Obj>& xs) {
  if (xs.empty()) {
    NProd np;
    np.obj = terminal(CosmosTag::finset);
    return np;
  }
  Subproduct sp = constrained_subproduct(xs, {});
  NProd np;
  np.obj = sp.obj;
  np.proj = sp.comp;
  return np;
}

Map NProd::tuple(const std::vector<Map>& fs) const {
  std::vector<const Map*> ptrs;
  ptrs.reserve(fs.size());
  for (const auto& f : fs) ptrs.push_back(&f);
  return factor_into_tuple(obj, ptrs);
}

Pull pullback(const Map& f, const Map& g) {
  if (!(f.cod == g.cod)) throw Error("pullback: cospan legs have different codomains");
  SubproductConstraint c;
  c.i = 0;
  c.j = 1;
  c.fi = [f](const Label& x) { return f(x); };
  c.fj = [g](const Label& y) { return g(y); };
  if (!f.dom.is_finset()) {
    c.fi_mor = [f](const Label& x) { return f.mor(x); };
    c.fj_mor = [g](const Label& y) { return g.mor(y); };
  }
  Subproduct sp = constrained_subproduct({f.dom, g.dom}, {c});
  Pull p;
  p.obj = sp.obj;
  p.p0 = sp.comp[0];
  p.p1 = sp.comp[1];
  return p;
}

Map Pull::induce(const Map& u, const Map& v) const { return factor_into_tuple(obj, {&u, &v}); }

Obj subobject(const Obj& x, const std::function<bool(const Label&)>& keep_obj,
              const std::function<bool(const Label&)>& keep_mor) {
  if (x.is_finset()) {
    std::vector<Label> kept;
    for (const auto& e : x.elements())
      if (keep_obj(e)) kept.push_back(e);
    return Obj::finset(kept);
  }
  const FinCatData& c = x.cat();
  FinCatData out;
  for (const auto& o : c.objects)
    if (keep_obj(o)) out.objects.push_back(o);
  for (const auto& m : c.morphisms) {
    if (!keep_mor(m.name)) continue;
    if (!out.objects.empty() &&
        (std::find(out.objects.begin(), out.objects.end(), m.src) == out.objects.end() ||
         std::find(out.objects.begin(), out.objects.end(), m.tgt) == out.objects.end()))
      throw ValidationError("subobject keeps morphism '" + m.name + "' without its endpoints");
    if (out.objects.empty())
      throw ValidationError("subobject keeps morphism '" + m.name + "' without its endpoints");
    out.morphisms.push_back(m);
  }
  auto kept_mor = [&](const Label& m) {
    for (const auto& r : out.morphisms)
      if (r.name == m) return true;
    return false;
  };
  for (const auto& o : out.objects) {
    const Label& i = c.id_of(o);
    if (!kept_mor(i)) throw ValidationError("subobject not closed under identities at '" + o + "'");
    out.identity[o] = i;
  }
  for (const auto& f : out.morphisms)
    for (const auto& g : out.morphisms) {
      if (f.tgt != g.src) continue;
      const Label& h = c.compose2(f.name, g.name);
      if (!kept_mor(h)) throw ValidationError("subobject not closed under composition");
      out.comp[{f.name, g.name}] = h;
    }
  return Obj::fincat(out);
}

Equa equalizer(const Map& f, const Map& g) {
  if (!(f.dom == g.dom) || !(f.cod == g.cod)) throw Error("equalizer: maps are not parallel");
  Obj sub = subobject(
      f.dom, [&](const Label& x) { return f(x) == g(x); },
      [&](const Label& m) { return f.mor(m) == g.mor(m); });
  Equa e;
  e.obj = sub;
  Map incl;
  incl.dom = sub;
  incl.cod = f.dom;
  if (sub.is_finset()) {
    for (const auto& x : sub.elements()) incl.on[x] = x;
  } else {
    for (const auto& o : sub.cat().objects) incl.on[o] = o;
    for (const auto& m : sub.cat().morphisms) incl.on_mor[m.name] = m.name;
  }
  e.incl = std::move(incl);
  return e;
}

Map corestrict(const Map& f, const Obj& sub) {
  Map out = f;
  out.cod = sub;
  std::unordered_set<std::string_view> cells;
  {
    const auto& cs = sub.is_finset() ? sub.elements() : sub.cat().objects;
    cells.reserve(cs.size() * 2);
    for (const auto& c : cs) cells.insert(c);
  }
  for (const auto& [k, v] : f.on)
    if (!cells.count(v)) throw MediatorError("corestrict: value '" + v + "' not in subobject");
  if (!sub.is_finset()) {
    std::unordered_set<std::string_view> mors;
    mors.reserve(sub.cat().morphisms.size() * 2);
    for (const auto& r : sub.cat().morphisms) mors.insert(r.name);
    for (const auto& [k, v] : f.on_mor)
      if (!mors.count(v)) throw MediatorError("corestrict: morphism value '" + v + "' not in subobject");
  }
  return out;
}

Map Equa::induce(const Map& u) const { return corestrict(u, obj); }

Map factor_through_mono(const Map& f, const Map& mono) {
  if (!(f.cod == mono.cod)) throw MediatorError("factor_through_mono: codomain mismatch");
  std::map<Label, Label> inv, inv_mor;
  for (const auto& [k, v] : mono.on) {
    if (inv.count(v)) throw MediatorError("factor_through_mono: map is not monic");
    inv[v] = k;
  }
  for (const auto& [k, v] : mono.on_mor) {
    if (inv_mor.count(v)) throw MediatorError("factor_through_mono: map is not monic");
    inv_mor[v] = k;
  }
  Map out;
  out.dom = f.dom;
  out.cod = mono.dom;
  for (const auto& [k, v] : f.on) {
    auto it = inv.find(v);
    if (it == inv.end()) throw MediatorError("factor_through_mono: '" + v + "' not in image");
    out.on[k] = it->second;
  }
  for (const auto& [k, v] : f.on_mor) {
    auto it = inv_mor.find(v);
    if (it == inv_mor.end()) throw MediatorError("factor_through_mono: morphism '" + v + "' not in image");
    out.on_mor[k] = it->second;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tagged coproducts and extensivity utilities

const Obj& TaggedCoproduct::summand(const Label& tag) const { return summands[index_of(tag)]; }
const Map& TaggedCoproduct::injection(const Label& tag) const { return inj[index_of(tag)]; }

std::size_t TaggedCoproduct::index_of(const Label& tag) const {
  for (std::size_t k = 0; k < tags.size(); ++k)
    if (tags[k] == tag) return k;
  throw LookupError("unknown coproduct tag '" + tag + "'");
}

Map TaggedCoproduct::copair(const std::vector<Map>& gs) const {
  if (gs.size() != tags.size()) throw MediatorError("copair: wrong number of components");
  Obj cod;
  if (gs.empty()) throw MediatorError("copair of empty family needs explicit codomain");
  cod = gs[0].cod;
  for (const auto& g : gs)
    if (!(g.cod == cod)) throw MediatorError("copair: components have different codomains");
  Map out;
  out.dom = total;
  out.cod = cod;
  for (std::size_t k = 0; k < tags.size(); ++k) {
    if (!(gs[k].dom == summands[k])) throw MediatorError("copair: component domain mismatch");
    for (const auto& [x, v] : inj[k].on) out.on[v] = gs[k](x);
    for (const auto& [x, v] : inj[k].on_mor) out.on_mor[v] = gs[k].mor(x);
  }
  return out;
}

std::pair<Label, Label> TaggedCoproduct::decode(const Label& total_cell, bool object_level) const {
  for (std::size_t k = 0; k < tags.size(); ++k) {
    const auto& table = object_level ? inj[k].on : inj[k].on_mor;
    for (const auto& [x, v] : table)
      if (v == total_cell) return {tags[k], x};
  }
  throw LookupError("cell '" + total_cell + "' not in coproduct");
}

TaggedCoproduct coproduct(const std::vector<std::pair<Label, Obj>>& family, CosmosTag tag_if_empty) {
  TaggedCoproduct cp;
  if (family.empty()) {
    cp.total = initial(tag_if_empty);
    return cp;
  }
  if (family.size() == 1) {
    // unary coproduct is the summand itself, untagged
    cp.tags = {family[0].first};
    cp.summands = {family[0].second};
    cp.total = family[0].second;
    cp.inj = {identity(family[0].second)};
    return cp;
  }
  const CosmosTag tag = family[0].second.tag();
  for (const auto& [t, o] : family)
    if (o.tag() != tag) throw Error("coproduct summands cross cosmos instances");
  {
    std::vector<Label> ts;
    for (const auto& [t, o] : family) ts.push_back(t);
    std::sort(ts.begin(), ts.end());
    if (std::adjacent_find(ts.begin(), ts.end()) != ts.end())
      throw ValidationError("coproduct has duplicate tags");
  }

  if (tag == CosmosTag::finset) {
    std::vector<Label> total;
    for (const auto& [t, o] : family)
      for (const auto& e : o.elements()) total.push_back(tag_label(t, e));
    cp.total = Obj::finset(total);
    for (const auto& [t, o] : family) {
      cp.tags.push_back(t);
      cp.summands.push_back(o);
      Map m;
      m.dom = o;
      m.cod = cp.total;
      for (const auto& e : o.elements()) m.on[e] = tag_label(t, e);
      cp.inj.push_back(std::move(m));
    }
    return cp;
  }

  FinCatData out;
  for (const auto& [t, o] : family) {
    const FinCatData& c = o.cat();
    for (const auto& ob : c.objects) out.objects.push_back(tag_label(t, ob));
    for (const auto& m : c.morphisms)
      out.morphisms.push_back({tag_label(t, m.name), tag_label(t, m.src), tag_label(t, m.tgt)});
    for (const auto& [ob, i] : c.identity) out.identity[tag_label(t, ob)] = tag_label(t, i);
    for (const auto& [fg, h] : c.comp)
      out.comp[{tag_label(t, fg.first), tag_label(t, fg.second)}] = tag_label(t, h);
  }
  cp.total = Obj::fincat(out);
  for (const auto& [t, o] : family) {
    cp.tags.push_back(t);
    cp.summands.push_back(o);
    Map m;
    m.dom = o;
    m.cod = cp.total;
    for (const auto& ob : o.cat().objects) m.on[ob] = tag_label(t, ob);
    for (const auto& mr : o.cat().morphisms) m.on_mor[mr.name] = tag_label(t, mr.name);
    cp.inj.push_back(std::move(m));
  }
  return cp;
}

Map indexed_coproduct_map(const TaggedCoproduct& src, const TaggedCoproduct& dst,
                          const std::map<Label, Label>& alpha,
                          const std::map<Label, Map>& components) {
  if (src.tags.empty()) {
    Map m;
    m.dom = src.total;
    m.cod = dst.total;
    return m;
  }
  std::vector<Map> comps;
  for (std::size_t k = 0; k < src.tags.size(); ++k) {
    const Label& t = src.tags[k];
    auto ita = alpha.find(t);
    if (ita == alpha.end()) throw ValidationError("indexed coproduct map: tag '" + t + "' missing from index map");
    auto itc = components.find(t);
    if (itc == components.end()) throw ValidationError("indexed coproduct map: component for '" + t + "' missing");
    comps.push_back(compose(itc->second, dst.injection(ita->second)));
  }
  return src.copair(comps);
}

FiberDecomposition fiber_decompose(const Map& g, const TaggedCoproduct& cp) {
  if (!(g.cod == cp.total)) throw Error("fiber_decompose: map does not land in the coproduct total");
  FiberDecomposition fd;
  std::vector<std::pair<Label, Obj>> family;
  std::vector<Map> legs_in_order;
  for (std::size_t k = 0; k < cp.tags.size(); ++k) {
    Pull pb = pullback(g, cp.inj[k]);
    family.push_back({cp.tags[k], pb.obj});
    fd.g_i[cp.tags[k]] = pb.p1;
    fd.legs[cp.tags[k]] = pb.p0;
    legs_in_order.push_back(pb.p0);
  }
  fd.fibers = coproduct(family, g.dom.tag());
  if (cp.tags.empty()) {
    Map iso;
    iso.dom = fd.fibers.total;
    iso.cod = g.dom;
    fd.iso = std::move(iso);
  } else {
    fd.iso = fd.fibers.copair(legs_in_order);
  }
  if (!is_iso(fd.iso)) throw Error("fiber_decompose: copairing is not an isomorphism");
  return fd;
}

std::map<Label, Map> extensive_factor(const TaggedCoproduct& w, const TaggedCoproduct& z,
                                      const std::map<Label, Label>& alpha, const Map& f) {
  if (!(f.dom == w.total) || !(f.cod == z.total))
    throw FactorizationError("extensive_factor: map boundary does not match the coproducts");
  std::map<Label, Map> out;
  for (std::size_t k = 0; k < w.tags.size(); ++k) {
    const Label& t = w.tags[k];
    auto ita = alpha.find(t);
    if (ita == alpha.end()) throw FactorizationError("extensive_factor: tag '" + t + "' missing from index map");
    const Label& zt = ita->second;
    const Map& zinj = z.injection(zt);
    Map comp_k;
    try {
      comp_k = factor_through_mono(compose(w.inj[k], f), zinj);
    } catch (const MediatorError& e) {
      throw FactorizationError("extensive_factor: square does not commute on summand '" + t + "': " + e.what());
    }
    out[t] = std::move(comp_k);
  }
  return out;
}

Distribution distribute_left(const TaggedCoproduct& tc, const Obj& z) {
  Distribution d;
  Prod whole = product(tc.total, z);
  std::vector<std::pair<Label, Obj>> family;
  std::vector<Map> into;
  for (std::size_t k = 0; k < tc.tags.size(); ++k) {
    Prod part = product(tc.summands[k], z);
    family.push_back({tc.tags[k], part.obj});
    into.push_back(whole.pair(compose(part.p0, tc.inj[k]), part.p1));
  }
  d.parts = coproduct(family);
  d.iso = d.parts.copair(into);
  if (!is_iso(d.iso)) throw Error("distribute_left: comparison is not an isomorphism");
  return d;
}

// ---------------------------------------------------------------------------
// Exponentials

Label exponential_element_label(const Map& f) {
  if (f.dom.is_finset()) {
    std::vector<Label> vals;
    for (const auto& e : f.dom.elements()) vals.push_back(f(e));
    return fn_label(vals);
  }
  std::vector<Label> ov, mv;
  for (const auto& o : f.dom.cat().objects) ov.push_back(f(o));
  for (const auto& m : f.dom.cat().morphisms) mv.push_back(f.mor(m.name));
  return functor_label(ov, mv);
}

Label exponential_nat_label(const Map& f, const Map& g, const std::map<Label, Label>& components) {
  std::vector<Label> comps;
  for (const auto& o : f.dom.cat().objects) comps.push_back(components.at(o));
  return nat_label(exponential_element_label(f), exponential_element_label(g), comps);
}

namespace {

std::vector<Map> enumerate_functions(const Obj& x, const Obj& y) {
  const auto& dom = x.elements();
  const auto& cod = y.elements();
  std::vector<Map> out;
  if (!dom.empty() && cod.empty()) return out;
  double predicted = 1;
  for (std::size_t k = 0; k < dom.size(); ++k) {
    predicted *= static_cast<double>(cod.size());
    if (predicted > static_cast<double>(kCellBudget)) throw CapError("function space too large");
  }
  std::vector<std::size_t> choice(dom.size(), 0);
  while (true) {
    Map m;
    m.dom = x;
    m.cod = y;
    for (std::size_t k = 0; k < dom.size(); ++k) m.on[dom[k]] = cod[choice[k]];
    out.push_back(std::move(m));
    std::size_t k = dom.size();
    while (k > 0) {
      --k;
      if (++choice[k] < cod.size()) break;
      choice[k] = 0;
      if (k == 0) return out;
    }
    if (dom.empty()) return out;
  }
}

std::vector<Map> enumerate_functors(const Obj& x, const Obj& y) {
  const FinCatData& dc = x.cat();
  const FinCatData& cc = y.cat();
  std::vector<Map> out;
  if (!dc.objects.empty() && cc.objects.empty()) return out;

  std::vector<Label> non_id;
  for (const auto& m : dc.morphisms) {
    bool isid = false;
    for (const auto& [o, i] : dc.identity)
      if (i == m.name) isid = true;
    if (!isid) non_id.push_back(m.name);
  }

  std::vector<Label> obj_choice(dc.objects.size());
  std::map<Label, Label> on, on_mor;
  std::size_t visited = 0;

  std::function<void(std::size_t)> assign_mors = [&](std::size_t k) {
    if (k == non_id.size()) {
      // full functoriality check on composites
      for (const auto& f : dc.morphisms)
        for (const auto& g : dc.morphisms) {
          if (f.tgt != g.src) continue;
          if (on_mor.at(dc.compose2(f.name, g.name)) != cc.compose2(on_mor.at(f.name), on_mor.at(g.name)))
            return;
        }
      Map m;
      m.dom = x;
      m.cod = y;
      m.on = on;
      m.on_mor = on_mor;
      out.push_back(std::move(m));
      return;
    }
    const MorRec& r = dc.mor(non_id[k]);
    for (const auto& cand : cc.hom(on.at(r.src), on.at(r.tgt))) {
      if (++visited > kCellBudget) throw CapError("functor space too large");
      on_mor[non_id[k]] = cand;
      assign_mors(k + 1);
    }
    on_mor.erase(non_id[k]);
  };

  std::function<void(std::size_t)> assign_objs = [&](std::size_t k) {
    if (k == dc.objects.size()) {
      on.clear();
      on_mor.clear();
      for (std::size_t q = 0; q < dc.objects.size(); ++q) on[dc.objects[q]] = obj_choice[q];
      for (const auto& [o, i] : dc.identity) on_mor[i] = cc.id_of(on.at(o));
      assign_mors(0);
      return;
    }
    for (const auto& cand : cc.objects) {
      if (++visited > kCellBudget) throw CapError("functor space too large");
      obj_choice[k] = cand;
      assign_objs(k + 1);
    }
  };
  assign_objs(0);
  return out;
}

// natural transformations F => G, as component tables indexed by dom objects
std::vector<std::map<Label, Label>> enumerate_nats(const Obj& x, const Obj& y, const Map& f, const Map& g) {
  const FinCatData& dc = x.cat();
  const FinCatData& cc = y.cat();
  std::vector<std::map<Label, Label>> out;
  std::map<Label, Label> comp;
  std::size_t visited = 0;
  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (k == dc.objects.size()) {
      out.push_back(comp);
      return;
    }
    const Label& o = dc.objects[k];
    for (const auto& cand : cc.hom(f(o), g(o))) {
      if (++visited > kCellBudget) throw CapError("transformation space too large");
      comp[o] = cand;
      bool ok = true;
      for (const auto& m : dc.morphisms) {
        // check naturality squares whose endpoints are already assigned
        std::size_t si = std::find(dc.objects.begin(), dc.objects.end(), m.src) - dc.objects.begin();
        std::size_t ti = std::find(dc.objects.begin(), dc.objects.end(), m.tgt) - dc.objects.begin();
        if (si > k || ti > k) continue;
        if (cc.compose2(f.mor(m.name), comp.at(m.tgt)) != cc.compose2(comp.at(m.src), g.mor(m.name))) {
          ok = false;
          break;
        }
      }
      if (ok) go(k + 1);
    }
    comp.erase(o);
  };
  go(0);
  return out;
}

}  // namespace

Map Expo::decode(const Label& e) const {
  auto it = fn_of.find(e);
  if (it == fn_of.end()) throw LookupError("unknown exponential element '" + e + "'");
  return it->second;
}

Label Expo::encode(const Map& f) const {
  if (!(f.dom == base) || !(f.cod == target)) throw Error("encode: map boundary does not match exponential");
  return exponential_element_label(f);
}

Expo exponential(const Obj& x, const Obj& y) {
  Expo e;
  e.base = x;
  e.target = y;
  if (x.is_finset()) {
    std::vector<Label> elems;
    for (auto& f : enumerate_functions(x, y)) {
      Label l = exponential_element_label(f);
      elems.push_back(l);
      e.fn_of[l] = std::move(f);
    }
    e.obj = Obj::finset(elems);
  } else {
    FinCatData out;
    std::vector<Map> functors = enumerate_functors(x, y);
    for (auto& f : functors) {
      Label l = exponential_element_label(f);
      out.objects.push_back(l);
      e.fn_of[l] = f;
    }
    // natural transformations
    std::unordered_map<Label, std::map<Label, Label>> nat_comp;
    for (const auto& fl : out.objects)
      for (const auto& gl : out.objects) {
        const Map& f = e.fn_of.at(fl);
        const Map& g = e.fn_of.at(gl);
        for (auto& comp : enumerate_nats(x, y, f, g)) {
          Label nl = exponential_nat_label(f, g, comp);
          out.morphisms.push_back({nl, fl, gl});
          nat_comp[nl] = std::move(comp);
        }
      }
    for (const auto& fl : out.objects) {
      const Map& f = e.fn_of.at(fl);
      std::map<Label, Label> comp;
      for (const auto& o : x.cat().objects) comp[o] = y.cat().id_of(f(o));
      out.identity[fl] = exponential_nat_label(f, f, comp);
    }
    for (const auto& a : out.morphisms)
      for (const auto& b : out.morphisms) {
        if (a.tgt != b.src) continue;
        std::map<Label, Label> comp;
        for (const auto& o : x.cat().objects)
          comp[o] = y.cat().compose2(nat_comp.at(a.name).at(o), nat_comp.at(b.name).at(o));
        out.comp[{a.name, b.name}] =
            exponential_nat_label(e.fn_of.at(a.src), e.fn_of.at(b.tgt), comp);
      }
    e.obj = Obj::fincat(out);
    e.nat_components = std::move(nat_comp);
  }

  return e;
}

const Map& Expo::eval() const {
  if (eval_cache) return *eval_cache;
  Prod pr = product(base, obj);
  Map ev;
  ev.dom = pr.obj;
  ev.cod = target;
  if (base.is_finset()) {
    for (const auto& p : pr.obj.elements()) ev.on[p] = fn_of.at(pr.p1(p))(pr.p0(p));
  } else {
    for (const auto& p : pr.obj.cat().objects) ev.on[p] = fn_of.at(pr.p1(p))(pr.p0(p));
    for (const auto& m : pr.obj.cat().morphisms) {
      const Label xm = pr.p0.mor(m.name);  // morphism of X
      const Label am = pr.p1.mor(m.name);  // transformation F => G
      const MorRec& ar = obj.cat().mor(am);
      const Map& g = fn_of.at(ar.tgt);
      const Label& xs = base.cat().src_of(xm);
      // alpha_xs ; G(xm)
      ev.on_mor[m.name] = target.cat().compose2(nat_components.at(am).at(xs), g.mor(xm));
    }
  }
  eval_cache = std::make_shared<Map>(std::move(ev));
  return *eval_cache;
}

Map curry(const Map& f, const Obj& x, const Obj& z) {
  Prod pr = product(x, z);
  if (!(f.dom == pr.obj)) throw Error("curry: domain is not the canonical product");
  Expo e = exponential(x, f.cod);
  Map out;
  out.dom = z;
  out.cod = e.obj;
  if (x.is_finset()) {
    for (const auto& zc : z.elements()) {
      std::vector<Label> vals;
      for (const auto& xc : x.elements()) vals.push_back(f(pair_label(xc, zc)));
      out.on[zc] = fn_label(vals);
    }
  } else {
    for (const auto& zo : z.cat().objects) {
      Map fz;
      fz.dom = x;
      fz.cod = f.cod;
      for (const auto& xo : x.cat().objects) fz.on[xo] = f(pair_label(xo, zo));
      for (const auto& xm : x.cat().morphisms)
        fz.on_mor[xm.name] = f.mor(pair_label(xm.name, z.cat().id_of(zo)));
      out.on[zo] = exponential_element_label(fz);
    }
    for (const auto& zm : z.cat().morphisms) {
      const Map& fs = e.fn_of.at(out.on.at(zm.src));
      const Map& ft = e.fn_of.at(out.on.at(zm.tgt));
      std::map<Label, Label> comp;
      for (const auto& xo : x.cat().objects)
        comp[xo] = f.mor(pair_label(x.cat().id_of(xo), zm.name));
      out.on_mor[zm.name] = exponential_nat_label(fs, ft, comp);
    }
  }
  // all produced labels must exist in the exponential
  for (const auto& [k, v] : out.on) (void)e.decode(v);
  return out;
}

Map name_of(const Map& f) {
  Expo e = exponential(f.dom, f.cod);
  Map out;
  out.dom = terminal(f.dom.tag());
  out.cod = e.obj;
  if (f.dom.is_finset()) {
    out.on["*"] = exponential_element_label(f);
  } else {
    Label l = exponential_element_label(f);
    out.on["*"] = l;
    out.on_mor["id*"] = e.obj.cat().id_of(l);
  }
  return out;
}

Map postcompose(const Obj& x, const Map& f) {
  Expo from = exponential(x, f.dom);
  Expo to = exponential(x, f.cod);
  Map out;
  out.dom = from.obj;
  out.cod = to.obj;
  if (x.is_finset()) {
    for (const auto& e : from.obj.elements()) out.on[e] = to.encode(compose(from.decode(e), f));
  } else {
    for (const auto& e : from.obj.cat().objects) out.on[e] = to.encode(compose(from.decode(e), f));
    for (const auto& m : from.obj.cat().morphisms) {
      const MorRec& r = from.obj.cat().mor(m.name);
      std::map<Label, Label> comp;
      for (const auto& [o, c] : from.nat_components.at(m.name)) comp[o] = f.mor(c);
      out.on_mor[m.name] = exponential_nat_label(compose(from.decode(r.src), f),
                                                 compose(from.decode(r.tgt), f), comp);
    }
  }
  return out;
}

Map precompose(const Map& f, const Obj& y) {
  Expo from = exponential(f.cod, y);
  Expo to = exponential(f.dom, y);
  Map out;
  out.dom = from.obj;
  out.cod = to.obj;
  if (y.is_finset()) {
    for (const auto& e : from.obj.elements()) out.on[e] = to.encode(compose(f, from.decode(e)));
  } else {
    for (const auto& e : from.obj.cat().objects) out.on[e] = to.encode(compose(f, from.decode(e)));
    for (const auto& m : from.obj.cat().morphisms) {
      const MorRec& r = from.obj.cat().mor(m.name);
      std::map<Label, Label> comp;
      for (const auto& o : f.dom.cat().objects) comp[o] = from.nat_components.at(m.name).at(f(o));
      out.on_mor[m.name] = exponential_nat_label(compose(f, from.decode(r.src)),
                                                 compose(f, from.decode(r.tgt)), comp);
    }
  }
  return out;
}

Map eval_at(const Expo& e, const Map& pt) {
  Map out;
  out.dom = e.obj;
  out.cod = e.target;
  const Label& x0 = point_label(pt);
  if (e.base.is_finset()) {
    for (const auto& el : e.obj.elements()) out.on[el] = e.fn_of.at(el)(x0);
  } else {
    for (const auto& el : e.obj.cat().objects) out.on[el] = e.fn_of.at(el)(x0);
    for (const auto& m : e.obj.cat().morphisms) out.on_mor[m.name] = e.nat_components.at(m.name).at(x0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Conservative families, map enumeration

ConservativeFamily generators(CosmosTag t) {
  if (t == CosmosTag::finset) return {{terminal(CosmosTag::finset)}};
  FinCatData walking;
  walking.objects = {"0", "1"};
  walking.morphisms = {{"id0", "0", "0"}, {"arr", "0", "1"}, {"id1", "1", "1"}};
  walking.identity = {{"0", "id0"}, {"1", "id1"}};
  walking.comp[{"id0", "id0"}] = "id0";
  walking.comp[{"id0", "arr"}] = "arr";
  walking.comp[{"arr", "id1"}] = "arr";
  walking.comp[{"id1", "id1"}] = "id1";
  return {{Obj::fincat(walking)}};
}

std::vector<Map> enumerate_maps(const Obj& x, const Obj& y) {
  if (x.tag() != y.tag()) throw Error("enumerate_maps across cosmos instances");
  if (x.is_finset()) return enumerate_functions(x, y);
  return enumerate_functors(x, y);
}

std::vector<Map> enumerate_isos(const Obj& x, const Obj& y) {
  std::vector<Map> out;
  if (x.is_finset()) {
    if (x.elements().size() != y.elements().size()) return out;
    std::vector<std::size_t> perm(y.elements().size());
    for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = k;
    do {
      Map m;
      m.dom = x;
      m.cod = y;
      for (std::size_t k = 0; k < perm.size(); ++k) m.on[x.elements()[k]] = y.elements()[perm[k]];
      out.push_back(std::move(m));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
  }
  if (x.cat().objects.size() != y.cat().objects.size() ||
      x.cat().morphisms.size() != y.cat().morphisms.size())
    return out;
  for (auto& f : enumerate_functors(x, y))
    if (is_iso(f)) out.push_back(std::move(f));
  return out;
}

bool iso_via_probes(const Map& f, const ConservativeFamily& fam) {
  for (const auto& probe : fam.probes) {
    std::vector<Map> into_dom = enumerate_maps(probe, f.dom);
    std::vector<Map> into_cod = enumerate_maps(probe, f.cod);
    std::vector<Map> images;
    for (const auto& u : into_dom) images.push_back(compose(u, f));
    // post-composition must be a bijection of hom-sets
    std::vector<std::string> keys;
    for (const auto& m : images) {
      std::ostringstream os;
      for (const auto& [k, v] : m.on) os << k << ">" << v << ";";
      for (const auto& [k, v] : m.on_mor) os << k << ">>" << v << ";";
      keys.push_back(os.str());
    }
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) return false;
    if (images.size() != into_cod.size()) return false;
  }
  return true;
}

}  // namespace vcat
