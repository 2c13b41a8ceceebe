// The internal Grothendieck construction, its inverse, the equivalence
// witnesses, and the representable identification.
#pragma once

#include "vcat/internal.hpp"

namespace vcat {

struct GrothResult {
  InternalCategory total;
  InternalFunctor projection;  // total -> Int C
  TaggedCoproduct level0;      // tags: objects of C
  TaggedCoproduct level1;      // tags: pair labels (A,B)
  Internalization base;
};
GrothResult groth(const Internalization& base, const VPresheaf& f);
GrothResult groth(const VCategory& c, const VPresheaf& f);

struct GrothNatResult {
  InternalFunctor functor;  // over Int C
  GrothResult src, dst;
};
GrothNatResult groth_nat(const VPresheaf& f, const VPresheaf& g, const VNat& alpha);

// dual construction on a covariant weight, with its opfibration certificate
struct GrothCovResult {
  InternalCategory total;
  InternalFunctor projection;  // total -> Int I
  TaggedCoproduct level0;      // tags: objects of I
  TaggedCoproduct level1;      // tags: pair labels (i,j)
  Internalization base;
  bool opfibration_certificate = false;
};
GrothCovResult groth_cov(const VFunctorToV& w);

struct ChangeOfBaseResult {
  InternalFunctor functor;  // ∫_C GF -> ∫_D G
  GrothResult src, dst;
  InternalFunctor int_f;  // Int C -> Int D
  bool square_commutes = false;
  bool pullback_certificate = false;
};
ChangeOfBaseResult change_of_base(const VFunctorCC& f, const VPresheaf& g);

// Fiber analysis of a groth projection reusing the retained tagging, so the
// fibers are literally the presheaf values.
FibrationPacket analyze_groth_packet(const GrothResult& gr);

// Phi: fibers and actions of a certified fibration, as a presheaf.
VPresheaf inverse_fib(const FibrationPacket& packet, const Internalization& target);
// Phi on a map of fibrations over Int C.
VNat inverse_fib_mor(const InternalFunctor& h, const FibrationPacket& p, const FibrationPacket& q);

struct EtaResult {
  GrothResult gr;
  FibrationPacket packet;
  VPresheaf phi;
  VNat nat;  // Phi(groth F) => F
  bool iso_certificate = false;
};
EtaResult unit_eta(const VPresheaf& f);

struct EpsilonResult {
  GrothResult gphi;         // groth of the recovered presheaf
  InternalFunctor functor;  // groth(Phi P) -> A
  bool iso_certificate = false;
};
EpsilonResult counit_epsilon(const FibrationPacket& packet, const Internalization& target);

struct PsiResult {
  Label object;             // the representing object c
  GrothResult elements;     // groth of the representable at c
  SliceResult slice_cat;    // slice(Int C, c)
  InternalFunctor functor;  // elements.total -> slice
  bool iso_certificate = false;
};
PsiResult psi(const Internalization& base, const Label& c);

// The internal functor slice(Int C, c) -> groth(F) induced by an element
// x: * -> Fc, inverse to the representable identification.
InternalFunctor slice_functor_from_element(const PsiResult& psi_r, const GrothResult& fgr,
                                           const VPresheaf& f, const Map& x);

}  // namespace vcat
