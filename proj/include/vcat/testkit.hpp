// Deterministic seeded generators of valid instances, brute-force oracles,
// and the named fixtures P1, P2, P3.
#pragma once

#include "vcat/enriched.hpp"
#include "vcat/groth.hpp"
#include "vcat/internal.hpp"

namespace vcat::testkit {

// splitmix64; same seed reproduces identical instances bit for bit
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::size_t below(std::size_t n) { return n == 0 ? 0 : next() % n; }
  bool coin() { return next() & 1; }
};

struct GenConfig {
  std::uint64_t seed = 0;
  CosmosTag cosmos = CosmosTag::finset;
  std::size_t max_objects = 4;
  std::size_t max_cells = 6;
};

// fixtures ------------------------------------------------------------------

// P1: the walking arrow as a Set-category with named hom elements, the
// representable at 1 and the two-points-over-1 presheaf.
struct FixtureP1 {
  VCategory category;
  VPresheaf f0;  // representable at 1
  VPresheaf f1;  // |F1(1)| = 2, |F1(0)| = 1; not representable
};
FixtureP1 fixture_p1();

// P2: the one-object double category with a non-identity vertical
// idempotent; V-terminal in the underlying 2-category but not internal
// terminal.
struct FixtureP2 {
  InternalCategory dcat;
  Map object;  // the unique element of level 0
};
FixtureP2 fixture_p2();

// P3: chain poset bot < x < top with the two-point weight on the one-object
// shape, diagram constant at x.
struct FixtureP3 {
  VCategory chain;    // objects bot, x, top
  VCategory shape;    // the unit V-category
  VFunctorToV weight; // two-point set at the unique object
  VFunctorCC diagram; // picks x
};
FixtureP3 fixture_p3();

// generators ----------------------------------------------------------------

Obj gen_object(Rng& rng, const GenConfig& cfg);
VCategory gen_vcategory(Rng& rng, const GenConfig& cfg);
VPresheaf gen_presheaf(Rng& rng, const GenConfig& cfg, const VCategory& c);
VFunctorCC gen_vfunctor(Rng& rng, const GenConfig& cfg, const VCategory& src);
InternalCategory gen_internal(Rng& rng, const GenConfig& cfg);
// groth of a generated presheaf followed by a relabeling isomorphism of the
// total; stays a certified fibration by construction
struct GenFibration {
  FibrationPacket packet;
  Internalization base;
  VPresheaf seed;  // the presheaf it came from
};
GenFibration gen_fibration(Rng& rng, const GenConfig& cfg, const Internalization& base,
                           const VPresheaf& f);
// view each hom-set of a finset-enriched category as a discrete category
VCategory discrete_enrich(const VCategory& c);
VPresheaf discrete_enrich_presheaf(const VCategory& cat2, const VPresheaf& f);
// generated small weighted-limit problems (shape is the unit or arrow
// category, weights kept small so the conical route stays in budget)
struct GenWeightedProblem {
  VCategory c;
  VCategory shape;
  VFunctorCC diagram;
  VFunctorToV weight;
};
GenWeightedProblem gen_weighted_problem(Rng& rng, const GenConfig& cfg);

// oracles -------------------------------------------------------------------

// count of V-natural transformations F => G by raw enumeration of families
std::size_t oracle_nat_enum(const VFunctorToV& f, const VFunctorToV& g);
// count of internal functors I -> A by raw enumeration of level maps
std::size_t oracle_functor_enum(const InternalCategory& i, const InternalCategory& a);

struct IsoOfSlicesReport {
  std::size_t side_enriched = 0;   // families for the enriched hom description
  std::size_t side_internal = 0;   // families for the internal hom description
  bool families_equal = false;     // the two filtered sets coincide
  bool edge_maps_equal = false;    // the two lower-edge evaluation maps agree
  bool ok() const { return families_equal && edge_maps_equal && side_enriched == side_internal; }
};
IsoOfSlicesReport oracle_isoofslices(const VFunctorToV& w, const VFunctorCC& g, const Label& a,
                                     const Obj& x);

}  // namespace vcat::testkit
