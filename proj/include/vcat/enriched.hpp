// Finite V-enriched categories, V-functors in evaluation form, V-natural
// transformations, representables, and ends.
#pragma once

#include <optional>

#include "vcat/cosmos.hpp"

namespace vcat {

struct ValidationReport {
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
  void add(std::string msg) { failures.push_back(std::move(msg)); }
};

struct VCategory {
  CosmosTag cosmos = CosmosTag::finset;
  std::vector<Label> objects;
  std::map<std::pair<Label, Label>, Obj> hom;
  std::map<std::tuple<Label, Label, Label>, Map> comp;  // c_{A,B,C}: C(A,B) x C(B,C) -> C(A,C)
  std::map<Label, Map> ident;                           // i_A: * -> C(A,A)

  const Obj& hom_at(const Label& a, const Label& b) const;
  const Map& comp_at(const Label& a, const Label& b, const Label& c) const;
  const Map& ident_at(const Label& a) const;
  bool has_object(const Label& a) const;
  bool operator==(const VCategory& o) const;
};

// Contravariant V-functor C^op -> V in evaluation form:
// ev_{A,B}: C(A,B) x FB -> FA.
struct VPresheaf {
  VCategory base;
  std::map<Label, Obj> onobj;
  std::map<std::pair<Label, Label>, Map> ev;

  const Obj& at(const Label& a) const;
  const Map& ev_at(const Label& a, const Label& b) const;
};

// Covariant V-functor I -> V in evaluation form: ev_{i,j}: Wi x I(i,j) -> Wj.
struct VFunctorToV {
  VCategory source;
  std::map<Label, Obj> onobj;
  std::map<std::pair<Label, Label>, Map> ev;

  const Obj& at(const Label& i) const;
  const Map& ev_at(const Label& i, const Label& j) const;
  // action of a hom cell m in I(i,j) as a map Wi -> Wj
  Map act(const Label& i, const Label& j, const Label& m) const;
  // fincat: action on a 2-cell of I(i,j), as nat components x -> cell of Wj
  std::map<Label, Label> act2(const Label& i, const Label& j, const Label& mu) const;
};

// V-functor between V-categories, stored as hom maps F_{A,B}.
struct VFunctorCC {
  VCategory source, target;
  std::map<Label, Label> onobj;
  std::map<std::pair<Label, Label>, Map> hom_map;

  const Label& at(const Label& a) const;
  const Map& hom_at(const Label& a, const Label& b) const;
};

// V-natural transformation between presheaves: components ev_A: FA -> GA.
struct VNat {
  std::map<Label, Map> component;
  const Map& at(const Label& a) const;
  bool operator==(const VNat& o) const { return component == o.component; }
};

// Covariant version, between V-functors into V.
struct CovVNat {
  std::map<Label, Map> component;
  const Map& at(const Label& i) const;
};

struct EnrichedElement {
  Label object;
  Map point;  // * -> F(object)
};

ValidationReport validate_vcategory(const VCategory& c);
ValidationReport validate_presheaf(const VPresheaf& f);
ValidationReport validate_vnat(const VPresheaf& f, const VPresheaf& g, const VNat& a);
ValidationReport validate_vfunctor_to_v(const VFunctorToV& w);
ValidationReport validate_vfunctor_cc(const VFunctorCC& k);
ValidationReport validate_cov_vnat(const VFunctorToV& w, const VFunctorToV& v, const CovVNat& a);

VCategory opposite(const VCategory& c);
VCategory unit_vcat(CosmosTag t);
VCategory arrow_vcat(CosmosTag t);
// Thin V-category of a preorder: hom is terminal when leq, initial otherwise.
VCategory poset_vcat(CosmosTag t, const std::vector<Label>& objects,
                     const std::function<bool(const Label&, const Label&)>& leq);
VCategory product_vcat(const VCategory& c, const VCategory& d);

VPresheaf representable(const VCategory& c, const Label& obj);
VPresheaf constant_presheaf(const VCategory& c, const Obj& value);
VPresheaf product_presheaf(const VPresheaf& f, const VPresheaf& g);
VPresheaf restrict_presheaf(const VFunctorCC& k, const VPresheaf& f);  // F(K-)

VNat yoneda_nat(const VPresheaf& f, const Label& c, const Map& x);
bool is_representable_by(const VPresheaf& f, const Label& c, const Map& x);
std::vector<EnrichedElement> find_representations(const VPresheaf& f);

// The end of [I,V](F,G), as a subobject of the product of the hom
// exponentials with its projections retained.
struct End {
  Obj obj;
  std::vector<Label> index;    // source objects, in order
  std::vector<Map> comp;       // obj -> [Fi,Gi]
  std::vector<Expo> factor;    // the exponentials [Fi,Gi]
  Map factor_in(const std::vector<Map>& us) const;
  // mediator with an explicit domain, covering the empty-shape end
  Map factor_in_from(const Obj& dom, const std::vector<Map>& us) const;
  const Map& proj(const Label& i) const;
  const Expo& expo(const Label& i) const;
};
End functor_hom(const VFunctorToV& f, const VFunctorToV& g);

// The covariant V-functor C(A,G-): I -> V.
VFunctorToV hom_functor(const VCategory& c, const Label& a, const VFunctorCC& g);

// The weighted-cone presheaf V^I(W, C(-,G)): C^op -> V together with its
// per-object ends.
struct WeightedConePresheaf {
  VPresheaf presheaf;
  std::map<Label, End> ends;  // by object of C
};
WeightedConePresheaf weighted_cone_presheaf(const VFunctorToV& w, const VFunctorCC& g);

}  // namespace vcat
