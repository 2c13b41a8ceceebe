// Internal categories to V: cst/Int/Und, internal homs, slices, commas,
// discrete (op)fibrations, internal terminal objects, and internal
// (co)limits.
#pragma once

#include "vcat/enriched.hpp"

namespace vcat {

struct InternalCategory {
  Obj a0, a1;
  Map s, t;  // A1 -> A0
  Map i;     // A0 -> A1
  Pull composable;  // A1 x_{A0} A1 over t.p0 = s.p1
  Map c;            // composable -> A1

  CosmosTag cosmos() const { return a0.tag(); }
  bool operator==(const InternalCategory& o) const;
};

// Assemble with the composable-pairs pullback cached; `make_c` receives the
// cached pullback and must produce the composition map.
InternalCategory assemble_internal(const Obj& a0, const Obj& a1, const Map& s, const Map& t,
                                   const Map& i,
                                   const std::function<Map(const Pull&)>& make_c);

struct InternalFunctor {
  InternalCategory src, tgt;
  Map h0, h1;
  bool operator==(const InternalFunctor& o) const;
};

InternalFunctor internal_identity(const InternalCategory& a);
InternalFunctor internal_compose(const InternalFunctor& f, const InternalFunctor& g);
bool internal_functor_is_iso(const InternalFunctor& f);
InternalFunctor internal_invert(const InternalFunctor& f);

struct InternalElement {
  InternalCategory carrier;
  Map point;  // * -> A0
};
// The induced functor from the terminal internal category.
InternalFunctor element_functor(const InternalElement& e);

ValidationReport validate_internal(const InternalCategory& a);
ValidationReport validate_internal_functor(const InternalFunctor& h);

struct InternalPullback {
  InternalCategory cat;
  InternalFunctor p0, p1;
};
InternalPullback pullback_internal(const InternalFunctor& h, const InternalFunctor& k);

InternalCategory cst(const Obj& x);
InternalFunctor cst_map(const Map& f);
bool is_constant_internal(const InternalCategory& a);

// Int C with its tagging retained.
struct Internalization {
  VCategory base;
  InternalCategory cat;
  TaggedCoproduct level0;  // tags: objects of C
  TaggedCoproduct level1;  // tags: pair labels (A,B)
  Map object_point(const Label& a) const;  // * -> (Int C)_0
  // hom cell (A,B,m) as a point of level 1
  Label hom_cell(const Label& a, const Label& b, const Label& m) const;
};
Internalization internalize(const VCategory& c);
InternalFunctor int_functor(const VFunctorCC& f, const Internalization& src,
                            const Internalization& dst);

VCategory underlying(const InternalCategory& a);
// Und of an internal functor, as a V-functor between the underlying
// V-categories (recomputed canonically).
VFunctorCC underlying_functor(const InternalFunctor& h);

// Int -| Und transposes.
VFunctorCC transpose_to_enriched(const InternalFunctor& h, const Internalization& src);
InternalFunctor transpose_to_internal(const VFunctorCC& f, const Internalization& src,
                                      const InternalCategory& a);

// The internal hom [[I,A]] by the generic equalizer formula, with the
// subobject's component maps retained.
struct InternalHom {
  InternalCategory cat;     // E0, E1 with their structure maps
  InternalCategory base;    // I
  InternalCategory target;  // A
  Subproduct sp0;           // E0 in [I0,A0] x [I1,A1]
  Subproduct sp1;           // E1 in E0 x E0 x [I0,A1]
  Expo x00, x11, x01;       // [I0,A0], [I1,A1], [I0,A1]

  const Map& e0_h0() const { return sp0.comp[0]; }
  const Map& e0_h1() const { return sp0.comp[1]; }
  const Map& e1_src() const { return sp1.comp[0]; }
  const Map& e1_tgt() const { return sp1.comp[1]; }
  const Map& e1_alpha() const { return sp1.comp[2]; }

  // the element of E0 naming an internal functor I -> A
  Map functor_point(const InternalFunctor& h) const;
  InternalFunctor point_functor(const Map& pt) const;
  // evaluation at an element of I: [[I,A]] -> A (levelwise)
  InternalFunctor evaluate_at(const InternalElement& e) const;
};
InternalHom internal_hom(const InternalCategory& i, const InternalCategory& a);
InternalHom arrow_hom(const InternalCategory& a);           // [[2,A]]
InternalHom hom_cst(const Obj& x, const InternalCategory& a);  // [[cst X, A]]

// The walking arrow internal category Int(2).
Internalization walking_arrow_internal(CosmosTag tag);

// Canonical comparison isos for the closed-form shortcuts.
Map arrow_hom_level0_iso(const InternalCategory& a, const InternalHom& h);  // A1 -> E0
Map hom_cst_level0_iso(const Obj& x, const InternalCategory& a, const InternalHom& h);  // [X,A0] -> E0
Map hom_cst_level1_iso(const Obj& x, const InternalCategory& a, const InternalHom& h);  // [X,A1] -> E1

// the diagonal A -> [[I,A]]
InternalFunctor diagonal_functor(const InternalCategory& a, const InternalHom& h);

// Generic comma: the pullback of <0,1>*: [[2,Z]] -> Z x Z along F x G.
struct InternalComma {
  InternalCategory cat;
  InternalFunctor proj_x, proj_y;
  InternalHom arrow;       // [[2,Z]], retained for element construction
  Map leg_arrow0;          // comma level 0 -> [[2,Z]]_0
  Map leg_arrow1;          // comma level 1 -> [[2,Z]]_1
  Map z_iso;               // Z1 -> [[2,Z]]_0, the canonical identification
  Pull level0, level1;     // the defining levelwise pullbacks
  // the element of the comma over given X-, Y-elements determined by an
  // arrow z of Z (a cell of Z1) with the right boundary
  Map comma_element(const Map& x_pt, const Map& y_pt, const Map& z_arrow) const;
};
InternalComma internal_comma(const InternalFunctor& f, const InternalFunctor& g);
// the internal category X x Y with its projections
struct InternalProduct {
  InternalCategory cat;
  InternalFunctor p0, p1;
  Prod level0, level1;
};
InternalProduct internal_product(const InternalCategory& x, const InternalCategory& y);

struct SliceResult {
  InternalCategory cat;
  InternalFunctor projection;
  InternalComma raw;
};
SliceResult slice(const InternalCategory& a, const InternalElement& t);
SliceResult coslice(const InternalCategory& a, const InternalElement& t);
SliceResult comma(const InternalFunctor& h, const InternalElement& b_elt);
SliceResult cocomma(const InternalFunctor& h, const InternalElement& b_elt);

// the canonical element i_T of A/T over an element T
Map slice_identity_element(const SliceResult& s, const InternalElement& t);

// Discrete fibration analysis.
struct FibrationPacket {
  InternalFunctor p;
  bool certificate = false;
  Map comparison;  // A1 -> B1 x_{B0} A0 (the t-square mediator)
  Pull square;     // the canonical pullback of the t-cospan
  // fiber data, present when the target is an internalization
  std::map<Label, Obj> fibers;
  std::map<Label, Map> fiber_legs;  // fiber -> A0
  std::map<std::pair<Label, Label>, Map> actions;  // C(A,B) x P^{-1}B -> P^{-1}A
};
FibrationPacket is_discrete_fibration(const InternalFunctor& p);
FibrationPacket is_discrete_fibration(const InternalFunctor& p, const Internalization& target);
FibrationPacket is_discrete_opfibration(const InternalFunctor& p);

bool is_internal_terminal(const InternalCategory& a, const InternalElement& t);
bool is_internal_initial(const InternalCategory& a, const InternalElement& t);
bool is_v_terminal(const VCategory& c, const Label& t);

// Cone and cocone categories of an internal functor G: I -> A.
struct ConeCategory {
  InternalComma comma;
  InternalFunctor projection;  // to A
  InternalHom hom;             // [[I,A]]
  InternalFunctor diag;
  Map g_point;                 // * -> [[I,A]]_0
};
ConeCategory cone_category(const InternalFunctor& g);
ConeCategory cocone_category(const InternalFunctor& g);

// cone legs kappa: I0 -> A1 with s.kappa = L, t.kappa = G0
bool is_internal_limit(const InternalFunctor& g, const Map& apex, const Map& kappa);
bool is_internal_colimit(const InternalFunctor& g, const Map& apex, const Map& kappa);

struct ColimitWitness {
  Map apex;   // * -> A0
  Map kappa;  // X -> A1
};
// Internal colimit search for G: cst X -> A over the elements of the cocone
// category.
std::optional<ColimitWitness> compute_internal_colimit(const InternalFunctor& g);

}  // namespace vcat
