#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vcat/enriched.hpp"
#include "vcat/testkit.hpp"

using namespace vcat;
using namespace vcat::testkit;

TEST_CASE("unit and fixture categories validate") {
  CHECK(validate_vcategory(unit_vcat(CosmosTag::finset)).ok());
  CHECK(validate_vcategory(unit_vcat(CosmosTag::fincat)).ok());
  CHECK(validate_vcategory(arrow_vcat(CosmosTag::finset)).ok());
  CHECK(validate_vcategory(arrow_vcat(CosmosTag::fincat)).ok());
  FixtureP1 p1 = fixture_p1();
  CHECK(validate_vcategory(p1.category).ok());
  CHECK(validate_presheaf(p1.f0).ok());
  CHECK(validate_presheaf(p1.f1).ok());
  FixtureP3 p3 = fixture_p3();
  CHECK(validate_vcategory(p3.chain).ok());
  CHECK(validate_vfunctor_to_v(p3.weight).ok());
  CHECK(validate_vfunctor_cc(p3.diagram).ok());
}

TEST_CASE("corrupting one ev entry is reported with the failing triple") {
  FixtureP1 p1 = fixture_p1();
  VPresheaf bad = p1.f1;
  // bend ev at (1,1) so that id1 no longer acts as the identity
  Map& e = bad.ev.at({"1", "1"});
  e.on[pair_label("id1", "a")] = "b";
  e.on[pair_label("id1", "b")] = "a";
  ValidationReport r = validate_presheaf(bad);
  CHECK_FALSE(r.ok());
  bool mentioned = false;
  for (const auto& f : r.failures)
    if (f.find("(1)") != std::string::npos || f.find("(1,1") != std::string::npos) mentioned = true;
  CHECK(mentioned);
}

TEST_CASE("opposite is an involution and flips the arrow category") {
  FixtureP1 p1 = fixture_p1();
  CHECK(opposite(opposite(p1.category)) == p1.category);
  VCategory two = arrow_vcat(CosmosTag::finset);
  CHECK(two.hom_at("0", "1") == terminal(CosmosTag::finset));
  CHECK(two.hom_at("1", "0").empty());
  VCategory op = opposite(two);
  CHECK(op.hom_at("1", "0") == terminal(CosmosTag::finset));
  CHECK(op.hom_at("0", "1").empty());
}

TEST_CASE("representables") {
  VCategory one = unit_vcat(CosmosTag::finset);
  VPresheaf r = representable(one, "0");
  CHECK(r.at("0") == terminal(CosmosTag::finset));
  CHECK(validate_presheaf(r).ok());

  FixtureP1 p1 = fixture_p1();
  CHECK(p1.f0.at("0").elements() == std::vector<Label>{"f"});
  CHECK(p1.f0.at("1").elements() == std::vector<Label>{"id1"});

  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    GenConfig cfg;
    cfg.cosmos = t % 2 ? CosmosTag::fincat : CosmosTag::finset;
    VCategory c = gen_vcategory(rng, cfg);
    CHECK(validate_vcategory(c).ok());
    for (const auto& obj : c.objects) CHECK(validate_presheaf(representable(c, obj)).ok());
  }
}

TEST_CASE("yoneda transformations and representability") {
  FixtureP1 p1 = fixture_p1();
  // the representable is represented by its identity element
  Map ic = compose(identity(terminal(CosmosTag::finset)), p1.category.ident_at("1"));
  CHECK(is_representable_by(p1.f0, "1", ic));
  CHECK(validate_vnat(representable(p1.category, "1"), p1.f0, yoneda_nat(p1.f0, "1", ic)).ok());
  // F1 admits no representation
  CHECK(find_representations(p1.f1).empty());
  CHECK(find_representations(p1.f0).size() == 1);

  // empty hom case: the component at an empty hom is iso iff FA is empty
  VNat at_c = yoneda_nat(p1.f1, "0", global_element(p1.f1.at("0"), "c"));
  CHECK_FALSE(is_iso(at_c.at("1")));  // C(1,0) empty but F1(1) has two points
}

TEST_CASE("relabeling invariance of representability") {
  FixtureP1 p1 = fixture_p1();
  // rename objects of the base through a bijection
  auto rename = [](const Label& a) { return a == "0" ? "zero" : "one"; };
  VCategory c2;
  c2.cosmos = p1.category.cosmos;
  for (const auto& o : p1.category.objects) c2.objects.push_back(rename(o));
  for (const auto& [ab, h] : p1.category.hom) c2.hom[{rename(ab.first), rename(ab.second)}] = h;
  for (const auto& [a, m] : p1.category.ident) c2.ident[rename(a)] = m;
  for (const auto& [abc, m] : p1.category.comp)
    c2.comp[{rename(std::get<0>(abc)), rename(std::get<1>(abc)), rename(std::get<2>(abc))}] = m;
  VPresheaf f2;
  f2.base = c2;
  for (const auto& [a, v] : p1.f1.onobj) f2.onobj[rename(a)] = v;
  for (const auto& [ab, e] : p1.f1.ev) f2.ev[{rename(ab.first), rename(ab.second)}] = e;
  CHECK(validate_presheaf(f2).ok());
  for (const auto& c : p1.category.objects)
    for (const auto& x : global_elements(p1.f1.at(c)))
      CHECK(is_representable_by(p1.f1, c, x) == is_representable_by(f2, rename(c), x));
}

TEST_CASE("ends: unit shape and constant functors") {
  VCategory one = unit_vcat(CosmosTag::finset);
  VFunctorToV f, g;
  f.source = g.source = one;
  Obj x = Obj::finset({"x0", "x1"});
  Obj y = Obj::finset({"y0", "y1", "y2"});
  f.onobj["0"] = x;
  g.onobj["0"] = y;
  f.ev[{"0", "0"}] = product(x, terminal(CosmosTag::finset)).p0;
  g.ev[{"0", "0"}] = product(y, terminal(CosmosTag::finset)).p0;
  End e = functor_hom(f, g);
  CHECK(e.obj == exponential(x, y).obj);  // the end over the unit shape is [F0,G0]

  VFunctorToV cf, cg;
  cf.source = cg.source = one;
  cf.onobj["0"] = terminal(CosmosTag::finset);
  cg.onobj["0"] = terminal(CosmosTag::finset);
  cf.ev[{"0", "0"}] = product(terminal(CosmosTag::finset), terminal(CosmosTag::finset)).p0;
  cg.ev[{"0", "0"}] = cf.ev[{"0", "0"}];
  CHECK(global_elements(functor_hom(cf, cg).obj).size() == 1);
}

TEST_CASE("end global elements count natural transformations") {
  Rng rng(17);
  for (int t = 0; t < 12; ++t) {
    GenConfig cfg;
    cfg.cosmos = t % 3 ? CosmosTag::finset : CosmosTag::fincat;
    cfg.max_objects = 2;
    cfg.max_cells = 3;
    GenWeightedProblem p = gen_weighted_problem(rng, cfg);
    VFunctorToV w2 = p.weight;
    VFunctorToV homf = hom_functor(p.c, p.c.objects[rng.below(p.c.objects.size())], p.diagram);
    CHECK(validate_vfunctor_to_v(w2).ok());
    CHECK(validate_vfunctor_to_v(homf).ok());
    End e = functor_hom(w2, homf);
    CHECK(global_elements(e.obj).size() == oracle_nat_enum(w2, homf));
  }
}

TEST_CASE("weighted cone presheaf") {
  // unit weight over the unit shape is the representable at the image
  FixtureP1 p1 = fixture_p1();
  VFunctorCC g;
  g.source = unit_vcat(CosmosTag::finset);
  g.target = p1.category;
  g.onobj["0"] = "1";
  g.hom_map[{"0", "0"}] = compose(bang(terminal(CosmosTag::finset)), p1.category.ident_at("1"));
  VFunctorToV w;
  w.source = g.source;
  w.onobj["0"] = terminal(CosmosTag::finset);
  w.ev[{"0", "0"}] = product(terminal(CosmosTag::finset), terminal(CosmosTag::finset)).p0;
  WeightedConePresheaf e = weighted_cone_presheaf(w, g);
  CHECK(validate_presheaf(e.presheaf).ok());
  VPresheaf rep = representable(p1.category, "1");
  for (const auto& a : p1.category.objects)
    CHECK(e.presheaf.at(a).cell_count() == rep.at(a).cell_count());

  // the chain fixture: cones are cut down by the subsingleton homs
  FixtureP3 p3 = fixture_p3();
  WeightedConePresheaf ep3 = weighted_cone_presheaf(p3.weight, p3.diagram);
  CHECK(validate_presheaf(ep3.presheaf).ok());
  for (const auto& a : p3.chain.objects)
    CHECK(ep3.presheaf.at(a).cell_count() == p3.chain.hom_at(a, "x").cell_count());
}

TEST_CASE("generator soundness on presheaves") {
  Rng rng(23);
  for (int t = 0; t < 14; ++t) {
    GenConfig cfg;
    cfg.cosmos = t % 2 ? CosmosTag::fincat : CosmosTag::finset;
    cfg.max_objects = 3;
    cfg.max_cells = 4;
    VCategory c = gen_vcategory(rng, cfg);
    VPresheaf f = gen_presheaf(rng, cfg, c);
    CHECK(validate_presheaf(f).ok());
  }
}
