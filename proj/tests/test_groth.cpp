#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vcat/groth.hpp"
#include "vcat/testkit.hpp"

using namespace vcat;
using namespace vcat::testkit;

namespace {

std::size_t cells0(const Obj& x) {
  return x.is_finset() ? x.elements().size() : x.cat().objects.size();
}

}  // namespace

TEST_CASE("element category of the fixture presheaf") {
  FixtureP1 p1 = fixture_p1();
  GrothResult gr = groth(p1.category, p1.f1);
  CHECK(validate_internal(gr.total).ok());
  CHECK(validate_internal_functor(gr.projection).ok());
  CHECK(cells0(gr.total.a0) == 3);
  CHECK(cells0(gr.total.a1) == 5);
  CHECK(is_discrete_fibration(gr.projection).certificate);

  // objects are pairs (A, x in FA); morphisms f with Ff(y) = x
  GrothResult g0 = groth(p1.category, p1.f0);
  CHECK(cells0(g0.total.a0) == 2);
  CHECK(cells0(g0.total.a1) == 3);
}

TEST_CASE("constant terminal presheaf gives the base itself") {
  FixtureP1 p1 = fixture_p1();
  VPresheaf c = constant_presheaf(p1.category, terminal(CosmosTag::finset));
  GrothResult gr = groth(p1.category, c);
  // the projection is an isomorphism over Int C
  CHECK(internal_functor_is_iso(gr.projection));
}

TEST_CASE("groth projections are certified fibrations on generated presheaves") {
  Rng rng(19);
  for (int t = 0; t < 16; ++t) {
    GenConfig cfg;
    cfg.cosmos = t % 2 ? CosmosTag::fincat : CosmosTag::finset;
    cfg.max_objects = 3;
    cfg.max_cells = 4;
    VCategory c = gen_vcategory(rng, cfg);
    Internalization ic = internalize(c);
    VPresheaf f = gen_presheaf(rng, cfg, c);
    GrothResult gr = groth(ic, f);
    CHECK(validate_internal(gr.total).ok());
    FibrationPacket pk = analyze_groth_packet(gr);
    CHECK(pk.certificate);
    VPresheaf phi = inverse_fib(pk, ic);
    CHECK(validate_presheaf(phi).ok());
  }
}

TEST_CASE("unit of the equivalence is a componentwise identity on groth fibers") {
  FixtureP1 p1 = fixture_p1();
  for (const VPresheaf& f : {p1.f0, p1.f1}) {
    EtaResult eta = unit_eta(f);
    CHECK(eta.iso_certificate);
    CHECK(validate_vnat(eta.phi, f, eta.nat).ok());
    for (const auto& [a, comp] : eta.nat.component) CHECK(map_equal(comp, identity(f.at(a))));
  }
}

TEST_CASE("counit of the equivalence is an isomorphism over the base") {
  Rng rng(29);
  for (int t = 0; t < 12; ++t) {
    GenConfig cfg;
    cfg.cosmos = t % 2 ? CosmosTag::fincat : CosmosTag::finset;
    cfg.max_objects = 3;
    cfg.max_cells = 3;
    VCategory c = gen_vcategory(rng, cfg);
    Internalization ic = internalize(c);
    VPresheaf f = gen_presheaf(rng, cfg, c);
    GenFibration gen = gen_fibration(rng, cfg, ic, f);
    REQUIRE(gen.packet.certificate);
    EpsilonResult eps = counit_epsilon(gen.packet, ic);
    CHECK(eps.iso_certificate);
    CHECK(validate_internal_functor(eps.functor).ok());
    // triangle over Int C
    CHECK(map_equal(compose(eps.functor.h0, gen.packet.p.h0), eps.gphi.projection.h0));
    CHECK(map_equal(compose(eps.functor.h1, gen.packet.p.h1), eps.gphi.projection.h1));
  }
}

TEST_CASE("functoriality of the element construction") {
  FixtureP1 p1 = fixture_p1();
  // identity transformation gives the identity internal functor
  VNat idnat;
  for (const auto& a : p1.category.objects) idnat.component[a] = identity(p1.f1.at(a));
  GrothNatResult gid = groth_nat(p1.f1, p1.f1, idnat);
  CHECK(gid.functor == internal_identity(gid.src.total));

  // composite of the yoneda transformation with a projection
  VPresheaf prod = product_presheaf(p1.f1, p1.f0);
  VNat pi0, pi1;
  for (const auto& a : p1.category.objects) {
    Prod pr = product(p1.f1.at(a), p1.f0.at(a));
    pi0.component[a] = pr.p0;
    pi1.component[a] = pr.p1;
  }
  CHECK(validate_vnat(prod, p1.f1, pi0).ok());
  GrothNatResult g0 = groth_nat(prod, p1.f1, pi0);
  CHECK(validate_internal_functor(g0.functor).ok());
  // triangle over the base
  CHECK(map_equal(compose(g0.functor.h0, g0.dst.projection.h0), g0.src.projection.h0));

  // yoneda transformations produce functors over the base too
  VNat ax = yoneda_nat(p1.f1, "1", global_element(p1.f1.at("1"), "a"));
  VPresheaf rep = representable(p1.category, "1");
  GrothNatResult ga = groth_nat(rep, p1.f1, ax);
  CHECK(validate_internal_functor(ga.functor).ok());
  CHECK(map_equal(compose(ga.functor.h0, ga.dst.projection.h0), ga.src.projection.h0));
}

TEST_CASE("composites of transformations match composites of functors") {
  Rng rng(61);
  for (int t = 0; t < 8; ++t) {
    GenConfig cfg;
    cfg.cosmos = t % 2 ? CosmosTag::fincat : CosmosTag::finset;
    cfg.max_objects = 2;
    cfg.max_cells = 3;
    VCategory c = gen_vcategory(rng, cfg);
    VPresheaf f = gen_presheaf(rng, cfg, c);
    VPresheaf fg = product_presheaf(f, f);
    // diagonal then projection equals the identity, on element categories
    VNat diag, proj;
    for (const auto& a : c.objects) {
      Prod pr = product(f.at(a), f.at(a));
      diag.component[a] = pr.pair(identity(f.at(a)), identity(f.at(a)));
      proj.component[a] = pr.p0;
    }
    GrothNatResult gd = groth_nat(f, fg, diag);
    GrothNatResult gp = groth_nat(fg, f, proj);
    InternalFunctor both = internal_compose(gd.functor, gp.functor);
    VNat composed;
    for (const auto& a : c.objects) composed.component[a] = compose(diag.at(a), proj.at(a));
    GrothNatResult gc = groth_nat(f, f, composed);
    CHECK(both == gc.functor);
  }
}

TEST_CASE("covariant element construction") {
  FixtureP3 p3 = fixture_p3();
  GrothCovResult gw = groth_cov(p3.weight);
  CHECK(validate_internal(gw.total).ok());
  CHECK(gw.opfibration_certificate);
  // two points over the one-object shape: a discrete two-object category
  CHECK(cells0(gw.total.a0) == 2);
  CHECK(cells0(gw.total.a1) == 2);
  CHECK(map_equal(gw.total.s, gw.total.t));
}

TEST_CASE("change of base") {
  FixtureP1 p1 = fixture_p1();
  // identity base change is the identity
  VFunctorCC idf;
  idf.source = idf.target = p1.category;
  for (const auto& a : p1.category.objects) idf.onobj[a] = a;
  for (const auto& a : p1.category.objects)
    for (const auto& b : p1.category.objects)
      idf.hom_map[{a, b}] = identity(p1.category.hom_at(a, b));
  ChangeOfBaseResult cb = change_of_base(idf, p1.f1);
  CHECK(cb.square_commutes);
  CHECK(cb.pullback_certificate);
  CHECK(cb.functor == internal_identity(cb.src.total));

  // picking the object 1 pulls back to the fiber over 1
  VFunctorCC pick;
  pick.source = unit_vcat(CosmosTag::finset);
  pick.target = p1.category;
  pick.onobj["0"] = "1";
  pick.hom_map[{"0", "0"}] = compose(identity(terminal(CosmosTag::finset)), p1.category.ident_at("1"));
  ChangeOfBaseResult cb2 = change_of_base(pick, p1.f1);
  CHECK(cb2.square_commutes);
  CHECK(cb2.pullback_certificate);
  CHECK(cells0(cb2.src.total.a0) == 2);
  CHECK(validate_internal_functor(cb2.functor).ok());

  Rng rng(67);
  for (int t = 0; t < 8; ++t) {
    GenConfig cfg;
    cfg.cosmos = t % 2 ? CosmosTag::fincat : CosmosTag::finset;
    cfg.max_objects = 3;
    cfg.max_cells = 3;
    VCategory c = gen_vcategory(rng, cfg);
    VFunctorCC k = gen_vfunctor(rng, cfg, c);
    VPresheaf g = gen_presheaf(rng, cfg, c);
    ChangeOfBaseResult r = change_of_base(k, g);
    CHECK(r.square_commutes);
    CHECK(r.pullback_certificate);
  }
}

TEST_CASE("representable identification") {
  FixtureP1 p1 = fixture_p1();
  Internalization ip1 = internalize(p1.category);
  PsiResult r = psi(ip1, "1");
  CHECK(r.iso_certificate);
  CHECK(validate_internal_functor(r.functor).ok());
  CHECK(cells0(r.slice_cat.cat.a0) == 2);
  // triangle over Int C: projecting after psi is the groth projection
  CHECK(map_equal(compose(r.functor.h0, r.slice_cat.projection.h0), r.elements.projection.h0));
  CHECK(map_equal(compose(r.functor.h1, r.slice_cat.projection.h1), r.elements.projection.h1));

  // the slice functor induced by an element lands on that element
  GrothResult fgr = groth(ip1, p1.f1);
  Map x = global_element(p1.f1.at("1"), "a");
  InternalFunctor sf = slice_functor_from_element(r, fgr, p1.f1, x);
  CHECK(validate_internal_functor(sf).ok());
  InternalElement one{ip1.cat, ip1.object_point("1")};
  Map ic = slice_identity_element(r.slice_cat, one);
  Map landed = compose(ic, sf.h0);
  // the element (1, a) of the element category
  Map expected = compose(x, fgr.level0.injection("1"));
  CHECK(map_equal(landed, expected));

  // unit category: both sides are points
  Internalization ione = internalize(unit_vcat(CosmosTag::finset));
  PsiResult r1 = psi(ione, "0");
  CHECK(r1.iso_certificate);
}

TEST_CASE("psi certificates on generated categories") {
  Rng rng(71);
  int done = 0;
  for (int t = 0; done < 20; ++t) {
    GenConfig cfg;
    cfg.cosmos = t % 2 ? CosmosTag::fincat : CosmosTag::finset;
    cfg.max_objects = 3;
    cfg.max_cells = 3;
    VCategory c = gen_vcategory(rng, cfg);
    Internalization ic = internalize(c);
    Label obj = c.objects[rng.below(c.objects.size())];
    PsiResult r = psi(ic, obj);
    CHECK(r.iso_certificate);
    ++done;
  }
}

TEST_CASE("fibers of a slice projection represent the hom presheaf") {
  FixtureP1 p1 = fixture_p1();
  Internalization ip1 = internalize(p1.category);
  InternalElement one{ip1.cat, ip1.object_point("1")};
  SliceResult s = slice(ip1.cat, one);
  FibrationPacket pk = is_discrete_fibration(s.projection, ip1);
  REQUIRE(pk.certificate);
  VPresheaf phi = inverse_fib(pk, ip1);
  CHECK(validate_presheaf(phi).ok());
  // the fibers are the hom-objects into 1
  for (const auto& a : p1.category.objects)
    CHECK(phi.at(a).cell_count() == p1.category.hom_at(a, "1").cell_count());
  bool representable_at_one = false;
  for (const auto& x : global_elements(phi.at("1")))
    representable_at_one = representable_at_one || is_representable_by(phi, "1", x);
  CHECK(representable_at_one);
}
