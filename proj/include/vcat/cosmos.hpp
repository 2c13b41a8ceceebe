// Finite cosmos kernel: the base category V (finite sets or finite
// categories) with canonical choices for all universal constructions.
// Every construction returns one deterministic representative with stable
// label ordering, so map equality is plain structural equality.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace vcat {

using Label = std::string;

enum class CosmosTag { finset, fincat };

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};
struct ValidationError : Error {
  using Error::Error;
};
struct MediatorError : Error {
  using Error::Error;
};
struct FactorizationError : Error {
  using Error::Error;
};
struct LookupError : Error {
  using Error::Error;
};
struct CapError : Error {
  using Error::Error;
};
struct HypothesisError : Error {
  using Error::Error;
};

// Enumeration guard. Constructions refuse to materialize more cells than
// this; generators and fixtures stay far below it.
constexpr std::size_t kCellBudget = 4'000'000;
void check_budget(std::size_t cells);

// Label combinators. Components are escaped so the combinators are
// injective even when user labels contain separator characters.
Label esc(const Label& s);
Label pair_label(const Label& a, const Label& b);
Label tuple_label(const std::vector<Label>& parts);
Label tag_label(const Label& tag, const Label& x);
Label fn_label(const std::vector<Label>& values);
Label functor_label(const std::vector<Label>& obj_values, const std::vector<Label>& mor_values);
Label nat_label(const Label& src_functor, const Label& tgt_functor, const std::vector<Label>& components);

struct MorRec {
  Label name, src, tgt;
  bool operator==(const MorRec& o) const { return name == o.name && src == o.src && tgt == o.tgt; }
};

// A finite category: ordered object and morphism lists, identity table,
// total composition table on composable pairs. comp[{f,g}] is "f then g".
struct FinCatData {
  std::vector<Label> objects;
  std::vector<MorRec> morphisms;
  std::map<Label, Label> identity;
  std::map<std::pair<Label, Label>, Label> comp;

  bool has_object(const Label& o) const;
  const MorRec& mor(const Label& m) const;
  const Label& src_of(const Label& m) const { return mor(m).src; }
  const Label& tgt_of(const Label& m) const { return mor(m).tgt; }
  const Label& id_of(const Label& o) const;
  const Label& compose2(const Label& f, const Label& g) const;  // f then g
  std::vector<Label> hom(const Label& a, const Label& b) const;
  bool operator==(const FinCatData& o) const;
};

class Obj {
 public:
  Obj() = default;
  static Obj finset(std::vector<Label> elements);
  static Obj fincat(FinCatData data);

  CosmosTag tag() const { return tag_; }
  bool is_finset() const { return tag_ == CosmosTag::finset; }
  const std::vector<Label>& elements() const;
  const FinCatData& cat() const;
  std::size_t cell_count() const;
  bool empty() const { return cell_count() == 0; }
  // Full structural validation (label distinctness, endpoint sanity,
  // unitality and an exhaustive associativity triple scan for fincat).
  void validate() const;
  bool operator==(const Obj& o) const;
  bool operator!=(const Obj& o) const { return !(*this == o); }
  bool operator<(const Obj& o) const;

 private:
  CosmosTag tag_ = CosmosTag::finset;
  std::shared_ptr<const std::vector<Label>> elems_ = std::make_shared<const std::vector<Label>>();
  std::shared_ptr<const FinCatData> cat_;
};

// A map of the cosmos: a function of finite sets or a functor of finite
// categories. `on` is the element/object assignment, `on_mor` the morphism
// assignment (fincat only).
struct Map {
  Obj dom, cod;
  std::map<Label, Label> on;
  std::map<Label, Label> on_mor;

  const Label& operator()(const Label& x) const;
  const Label& mor(const Label& m) const;
  // Totality and (for fincat) exhaustive preservation of identities,
  // sources, targets and composition.
  void validate() const;
  bool operator==(const Map& o) const;
  bool operator!=(const Map& o) const { return !(*this == o); }
};

Map identity(const Obj& x);
Map compose(const Map& f, const Map& g);  // f then g (diagrammatic)
Map compose(const Map& f, const Map& g, const Map& h);
Map compose(const Map& f, const Map& g, const Map& h, const Map& k);
bool map_equal(const Map& f, const Map& g);
bool is_iso(const Map& f);
Map invert(const Map& f);
// First cell where f and g disagree, for validation reports.
std::string diff_witness(const Map& f, const Map& g);

Obj terminal(CosmosTag t);
Obj initial(CosmosTag t);
Map bang(const Obj& x);                          // X -> *
Map initial_map(const Obj& x);                   // 0 -> X
std::vector<Map> global_elements(const Obj& x);  // * -> X, canonical order
Map global_element(const Obj& x, const Label& name);
const Label& point_label(const Map& pt);

// Binary product with canonical lexicographic pair labels.
struct Prod {
  Obj obj;
  Map p0, p1;
  Map pair(const Map& f, const Map& g) const;  // <f,g>: Z -> X x Y
};
Prod product(const Obj& x, const Obj& y);
Map times(const Map& f, const Map& g);  // f x g

// n-ary product: n = 0 gives the terminal object, n = 1 the factor itself,
// n >= 2 flat tuple labels.
struct NProd {
  Obj obj;
  std::vector<Map> proj;
  Map tuple(const std::vector<Map>& fs) const;
};
NProd nary_product(const std::vector<Obj>& xs);

// Constrained subproduct: the subobject of X_0 x ... x X_{n-1} on tuples
// where key_i(x_i) == key_j(x_j) for every constraint. This is the
// canonical equalizer-of-a-product representative, computed by a
// backtracking join so the ambient product is never materialized.
struct SubproductConstraint {
  std::size_t i = 0, j = 0;
  std::function<Label(const Label&)> fi, fj;          // object/element level keys
  std::function<Label(const Label&)> fi_mor, fj_mor;  // fincat morphism level keys
};
struct Subproduct {
  Obj obj;
  std::vector<Map> comp;  // comp[k]: obj -> factor k
  // Mediator <u_0,...,u_{n-1}>: Z -> obj; MediatorError if some tuple of
  // values is not in the subobject.
  Map factor_in(const std::vector<Map>& us) const;
};
// `filter_obj`/`filter_mor` refine the binary constraints with an arbitrary
// predicate on whole tuples (needed for conditions coupling three factors).
Subproduct constrained_subproduct(
    const std::vector<Obj>& factors, const std::vector<SubproductConstraint>& cons,
    const std::function<bool(const std::vector<Label>&)>& filter_obj = {},
    const std::function<bool(const std::vector<Label>&)>& filter_mor = {});

// Pullback of a cospan f: X -> Z <- Y :g, as the canonical sub-product.
struct Pull {
  Obj obj;
  Map p0, p1;
  Map induce(const Map& u, const Map& v) const;
};
Pull pullback(const Map& f, const Map& g);

// Equalizer of a parallel pair, as the canonical subobject of the common
// domain with original labels.
struct Equa {
  Obj obj;
  Map incl;
  Map induce(const Map& u) const;
};
Equa equalizer(const Map& f, const Map& g);

// Subobject on explicitly kept cells (fincat closure is verified).
Obj subobject(const Obj& x, const std::function<bool(const Label&)>& keep_obj,
              const std::function<bool(const Label&)>& keep_mor);
// Corestriction of f to a subobject of its codomain (labels preserved).
Map corestrict(const Map& f, const Obj& sub);
// Unique u with u ; mono = f, for injective mono.
Map factor_through_mono(const Map& f, const Map& mono);

struct TaggedCoproduct {
  std::vector<Label> tags;
  std::vector<Obj> summands;
  Obj total;
  std::vector<Map> inj;

  const Obj& summand(const Label& tag) const;
  const Map& injection(const Label& tag) const;
  std::size_t index_of(const Label& tag) const;
  Map copair(const std::vector<Map>& gs) const;
  // (tag, summand cell) of a total cell; `object_level` false reads the
  // fincat morphism level.
  std::pair<Label, Label> decode(const Label& total_cell, bool object_level = true) const;
};
TaggedCoproduct coproduct(const std::vector<std::pair<Label, Obj>>& family,
                          CosmosTag tag_if_empty = CosmosTag::finset);
// The map ⊔_α g_i induced by a reindexing α on tags and components g_i.
Map indexed_coproduct_map(const TaggedCoproduct& src, const TaggedCoproduct& dst,
                          const std::map<Label, Label>& alpha,
                          const std::map<Label, Map>& components);

struct FiberDecomposition {
  TaggedCoproduct fibers;       // per-tag canonical pullbacks Y_i
  std::map<Label, Map> g_i;     // Y_i -> X_i
  std::map<Label, Map> legs;    // Y_i -> Y
  Map iso;                      // ⊔ Y_i -> Y over the total object
};
FiberDecomposition fiber_decompose(const Map& g, const TaggedCoproduct& cp);

// Unique family {f_i: W_i -> Z_{alpha(i)}} with ⊔_α f_i = f; fails loudly
// if f does not respect the tagging.
std::map<Label, Map> extensive_factor(const TaggedCoproduct& w, const TaggedCoproduct& z,
                                      const std::map<Label, Label>& alpha, const Map& f);

// Distribution ⊔_i (X_i x Z) ≅ (⊔_i X_i) x Z with summands the canonical
// binary products.
struct Distribution {
  TaggedCoproduct parts;
  Map iso;  // parts.total -> product(tc.total, z)
};
Distribution distribute_left(const TaggedCoproduct& tc, const Obj& z);

// Exponential [X,Y] with evaluation X x [X,Y] -> Y. Keeps decode tables so
// elements convert to maps and back.
struct Expo {
  Obj base, target, obj;
  std::unordered_map<Label, Map> fn_of;  // element -> map X -> Y
  // fincat: transformation label -> component table (by base object)
  std::unordered_map<Label, std::map<Label, Label>> nat_components;

  // evaluation base x [base,target] -> target, built on first use
  const Map& eval() const;
  Map decode(const Label& e) const;
  Label encode(const Map& f) const;

 private:
  mutable std::shared_ptr<Map> eval_cache;
};
Expo exponential(const Obj& x, const Obj& y);
// f: X x Z -> Y over the canonical product => Z -> [X,Y].
Map curry(const Map& f, const Obj& x, const Obj& z);
// The "name" * -> [X,Y] of a map X -> Y.
Map name_of(const Map& f);
Map postcompose(const Obj& x, const Map& f);  // [X,f]: [X,Y] -> [X,Z]
Map precompose(const Map& f, const Obj& y);   // [f,Y]: [X,Y] -> [W,Y]
// Evaluation of [X,Y] at a point of X: [X,Y] -> Y.
Map eval_at(const Expo& e, const Map& pt);

// Label a function/functor X -> Y by the canonical exponential element
// label, without materializing [X,Y].
Label exponential_element_label(const Map& f);
Label exponential_nat_label(const Map& f, const Map& g, const std::map<Label, Label>& components);

struct ConservativeFamily {
  std::vector<Obj> probes;
};
ConservativeFamily generators(CosmosTag t);
// Iso detection through a family of probes (sampled sanity semantics of
// conservativity).
bool iso_via_probes(const Map& f, const ConservativeFamily& fam);

std::vector<Map> enumerate_maps(const Obj& x, const Obj& y);
std::vector<Map> enumerate_isos(const Obj& x, const Obj& y);

}  // namespace vcat
