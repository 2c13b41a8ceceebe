// Representability and weighted-limit decision procedures: the direct
// definition, the elements route, the shifted route, the tensored routes,
// and the weighted-as-conical route.
#pragma once

#include "vcat/groth.hpp"

namespace vcat {

enum class Verdict { True, False, NotApplicable };

// ---------------------------------------------------------------------------
// representability routes

bool is_representable_direct(const VPresheaf& f, const Label& c, const Map& x);
bool is_representable_via_elements(const VPresheaf& f, const Label& c, const Map& x);
bool is_representable_via_shifted(const VPresheaf& f, const Label& c, const Map& x);
// requires V-tensors by every probe and their preservation by f
bool is_representable_via_und_tensors(const VPresheaf& f, const Label& c, const Map& x);

// ---------------------------------------------------------------------------
// tensors

struct TensorWitness {
  Label base_object;
  Label tensor_object;
  Map unit;  // X -> C(c, c (x) X)
};

bool is_v_tensor(const VCategory& c, const Label& cobj, const Obj& x, const Label& candidate,
                 const Map& gamma);
// witness per object, or nothing when some object lacks the tensor
std::optional<std::map<Label, TensorWitness>> has_v_tensors(const VCategory& c, const Obj& x);
bool presheaf_preserves_tensors(const VPresheaf& f, const Obj& x);

struct InternalTensorReport {
  bool all_exist = true;
  std::vector<std::pair<Map, ColimitWitness>> witnesses;  // by generating map
};
InternalTensorReport has_internal_tensors(const InternalCategory& a, const Obj& x);
InternalTensorReport has_c_internal_tensors(const FibrationPacket& packet, const Obj& x);

struct GrothTensorWitness {
  Map apex;   // * -> (groth F)_0
  Map kappa;  // X -> (groth F)_1
  bool colimit_certificate = false;
};
GrothTensorWitness groth_tensor_witness(const VPresheaf& f, const Label& cobj, const Obj& x,
                                        const Map& g);

struct TensorBridgeReport {
  bool hypotheses_hold = false;  // tensors by every probe exist
  bool internal_terminal = false;
  bool und_v_terminal = false;
  std::vector<bool> shifted_per_probe;
  bool divergence = false;
  bool divergence_under_hypotheses = false;  // must never happen
};
TensorBridgeReport tensor_bridge_terminal(const InternalCategory& a, const InternalElement& t);
TensorBridgeReport tensor_bridge_terminal(const FibrationPacket& packet, const Label& cobj,
                                          const Map& x);

// ---------------------------------------------------------------------------
// weighted limits

struct WeightedLimitProblem {
  VCategory c;
  VFunctorCC diagram;   // G: I -> C
  VFunctorToV weight;   // W: I -> V
  Label candidate;      // L
  std::optional<CovVNat> lambda;  // ev_i: Wi -> C(L, Gi); searched when absent
};
ValidationReport validate_weighted_problem(const WeightedLimitProblem& p);

struct WeightedConeInternal {
  WeightedConePresheaf cones;
  GrothResult gr;
  bool crosscheck_ran = false;
  bool crosscheck_iso = false;  // the finite-subcategory comma agrees over Int C
};
WeightedConeInternal weighted_cone_internal(const VFunctorToV& w, const VFunctorCC& g,
                                            bool run_crosscheck = false);

bool is_weighted_limit_direct(const WeightedLimitProblem& p);
bool is_weighted_limit_elements(const WeightedLimitProblem& p);
bool is_weighted_limit_shifted(const WeightedLimitProblem& p);
bool is_weighted_limit_und_tensors(const WeightedLimitProblem& p);
bool is_weighted_limit_conical(const WeightedLimitProblem& p);

struct ConeTranslation {
  GrothCovResult gw;                // elements of the weight
  InternalFunctor diagram_functor;  // Int G . pi_W
  Map apex;                         // * -> (Int C)_0
  std::optional<Map> kappa;         // when lambda is present
};
ConeTranslation cone_translate(const WeightedLimitProblem& p);

// the end element of E(L) encoding a cone family
Map cone_element(const End& el, const CovVNat& lambda);
// decode an element of E(L) back into its cone family
CovVNat element_cone(const End& el, const Label& elt);

// The shifted V-category Ar_X C: same objects, hom-objects [X, C(A,B)].
VCategory ar_x(const VCategory& c, const Obj& x);
// The canonical comparison Ar_X C -> Und [[cst X, Int C]] is an isomorphism
// of V-categories.
bool ar_x_matches_shifted(const VCategory& c, const Obj& x);

}  // namespace vcat
