// Acceptance suite: one pass/fail line per criterion. All checks are exact;
// there are no tolerances anywhere.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "vcat/document.hpp"

using namespace vcat;
using namespace vcat::testkit;

namespace {

std::string g_cli_path;

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Tally {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::ostringstream detail;
  void check(bool ok, const std::string& what) {
    ++cases;
    if (!ok) {
      ++failures;
      if (failures <= 5) detail << "\n      failed: " << what;
    }
  }
};

GenConfig acceptance_config(CosmosTag tag, std::uint64_t seed) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.cosmos = tag;
  cfg.max_objects = 3;
  cfg.max_cells = 4;
  return cfg;
}

// --------------------------------------------------------------------------
// criterion 1: the equivalence of categories, witnessed by eta and epsilon

void criterion_equivalence(Tally& t) {
  for (CosmosTag tag : {CosmosTag::finset, CosmosTag::fincat}) {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      Rng rng(seed * 2 + (tag == CosmosTag::fincat ? 1 : 0));
      GenConfig cfg = acceptance_config(tag, seed);
      VCategory c = gen_vcategory(rng, cfg);
      VPresheaf f = gen_presheaf(rng, cfg, c);
      EtaResult eta = unit_eta(f);
      t.check(eta.iso_certificate, "eta iso certificate, seed " + std::to_string(seed));
      t.check(validate_vnat(eta.phi, f, eta.nat).ok(), "eta naturality, seed " + std::to_string(seed));

      GenFibration gen = gen_fibration(rng, cfg, eta.gr.base, f);
      EpsilonResult eps = counit_epsilon(gen.packet, eta.gr.base);
      bool triangle = map_equal(compose(eps.functor.h0, gen.packet.p.h0), eps.gphi.projection.h0) &&
                      map_equal(compose(eps.functor.h1, gen.packet.p.h1), eps.gphi.projection.h1);
      t.check(eps.iso_certificate && triangle && validate_internal_functor(eps.functor).ok(),
              "epsilon over Int C, seed " + std::to_string(seed));
    }
  }
}

// --------------------------------------------------------------------------
// criterion 2: fibration certificates, stability, and the composable square

void criterion_fibrations(Tally& t) {
  for (CosmosTag tag : {CosmosTag::finset, CosmosTag::fincat}) {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      Rng rng(seed * 5 + (tag == CosmosTag::fincat ? 3 : 0));
      GenConfig cfg = acceptance_config(tag, seed);
      VCategory c = gen_vcategory(rng, cfg);
      Internalization ic = internalize(c);
      VPresheaf f = gen_presheaf(rng, cfg, c);
      VPresheaf g = gen_presheaf(rng, cfg, c);
      GrothResult gf = groth(ic, f);
      GrothResult gg = groth(ic, g);
      FibrationPacket pf = is_discrete_fibration(gf.projection);
      t.check(pf.certificate, "groth certificate, seed " + std::to_string(seed));
      t.check(is_discrete_fibration(gg.projection).certificate,
              "groth certificate (second), seed " + std::to_string(seed));

      // stability under pullback along another fibration
      InternalPullback pb = pullback_internal(gf.projection, gg.projection);
      t.check(is_discrete_fibration(pb.p1).certificate,
              "pullback stability, seed " + std::to_string(seed));

      // the composable-pairs square is again a pullback
      const InternalCategory& a = gf.total;
      const InternalCategory& b = ic.cat;
      Map ka_to_kb = b.composable.induce(compose(a.composable.p0, gf.projection.h1),
                                         compose(a.composable.p1, gf.projection.h1));
      Pull q = pullback(compose(b.composable.p1, b.t), gf.projection.h0);
      Map mediator = q.induce(ka_to_kb, compose(a.composable.p1, a.t));
      t.check(is_iso(mediator), "composable-pairs square, seed " + std::to_string(seed));

      // slices and commas project as fibrations
      auto pts = global_elements(ic.cat.a0);
      if (!pts.empty()) {
        InternalElement e{ic.cat, pts[rng.below(pts.size())]};
        t.check(is_discrete_fibration(slice(ic.cat, e).projection).certificate,
                "slice projection, seed " + std::to_string(seed));
      }
    }
  }
}

// --------------------------------------------------------------------------
// criterion 3: representation theorem routes

void criterion_representation(Tally& t) {
  FixtureP1 p1 = fixture_p1();
  Map i1 = compose(identity(terminal(CosmosTag::finset)), p1.category.ident_at("1"));
  t.check(is_representable_direct(p1.f0, "1", i1) &&
              is_representable_via_elements(p1.f0, "1", i1) &&
              is_representable_via_shifted(p1.f0, "1", i1) &&
              is_representable_via_und_tensors(p1.f0, "1", i1),
          "fixture representable at (1, id1)");
  t.check(find_representations(p1.f1).empty(), "fixture F1 has no representation");

  for (CosmosTag tag : {CosmosTag::finset, CosmosTag::fincat}) {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
      Rng rng(seed * 7 + (tag == CosmosTag::fincat ? 1 : 0));
      GenConfig cfg = acceptance_config(tag, seed);
      VCategory c = gen_vcategory(rng, cfg);
      VPresheaf f = gen_presheaf(rng, cfg, c);
      std::size_t sampled = 0;
      for (const auto& obj : c.objects) {
        for (const auto& x : global_elements(f.at(obj))) {
          bool direct = is_representable_direct(f, obj, x);
          bool agree = is_representable_via_elements(f, obj, x) == direct &&
                       is_representable_via_shifted(f, obj, x) == direct;
          bool tensors_agree = true;
          try {
            tensors_agree = is_representable_via_und_tensors(f, obj, x) == direct;
          } catch (const HypothesisError&) {
          }
          t.check(agree && tensors_agree,
                  "route agreement, seed " + std::to_string(seed) + " at (" + obj + ")");
          if (++sampled >= 2) break;
        }
        if (sampled >= 2) break;
      }
    }
  }
}

// --------------------------------------------------------------------------
// criterion 4: the double-category counterexample

void criterion_counterexample(Tally& t) {
  FixtureP2 p2 = fixture_p2();
  t.check(is_v_terminal(underlying(p2.dcat), "p"), "P2 V-terminal in the underlying");
  t.check(!is_internal_terminal(p2.dcat, {p2.dcat, p2.object}), "P2 not internal terminal");
  TensorBridgeReport r = tensor_bridge_terminal(p2.dcat, {p2.dcat, p2.object});
  t.check(!r.hypotheses_hold, "P2 misses the tensor hypothesis");
  t.check(r.divergence && !r.divergence_under_hypotheses, "P2 divergence is flagged as expected");
}

// --------------------------------------------------------------------------
// criterion 5: weighted limit routes and the comma cross-check

void criterion_weighted(Tally& t) {
  FixtureP3 p3 = fixture_p3();
  auto p3_problem = [&](const Label& cand, bool with_lambda) {
    WeightedLimitProblem p;
    p.c = p3.chain;
    p.diagram = p3.diagram;
    p.weight = p3.weight;
    p.candidate = cand;
    if (with_lambda) {
      CovVNat lam;
      lam.component["0"] = compose(bang(p3.weight.at("0")), p3.chain.ident_at("x"));
      p.lambda = lam;
    }
    return p;
  };
  WeightedLimitProblem good = p3_problem("x", true);
  t.check(is_weighted_limit_direct(good) && is_weighted_limit_elements(good) &&
              is_weighted_limit_shifted(good) && is_weighted_limit_conical(good) &&
              is_weighted_limit_und_tensors(good),
          "fixture limit at (x, diagonal identities)");
  WeightedLimitProblem top = p3_problem("top", false);
  t.check(!is_weighted_limit_direct(top) && !is_weighted_limit_elements(top) &&
              !is_weighted_limit_shifted(top) && !is_weighted_limit_conical(top) &&
              !is_weighted_limit_und_tensors(top),
          "fixture non-limit at top");
  t.check(weighted_cone_internal(p3.weight, p3.diagram, true).crosscheck_iso,
          "fixture comma cross-check");

  for (CosmosTag tag : {CosmosTag::finset, CosmosTag::fincat}) {
    std::size_t collected = 0;
    for (std::uint64_t seed = 1; collected < 50 && seed <= 200; ++seed) {
      Rng rng(seed * 11 + (tag == CosmosTag::fincat ? 5 : 0));
      GenConfig cfg = acceptance_config(tag, seed);
      cfg.max_objects = 2 + seed % 2;
      cfg.max_cells = 3;
      GenWeightedProblem g = gen_weighted_problem(rng, cfg);
      WeightedLimitProblem p;
      p.c = g.c;
      p.diagram = g.diagram;
      p.weight = g.weight;
      p.candidate = g.c.objects[rng.below(g.c.objects.size())];
      try {
        bool direct = is_weighted_limit_direct(p);
        bool agree = is_weighted_limit_elements(p) == direct &&
                     is_weighted_limit_shifted(p) == direct &&
                     is_weighted_limit_conical(p) == direct;
        bool tensors_agree = true;
        try {
          tensors_agree = is_weighted_limit_und_tensors(p) == direct;
        } catch (const HypothesisError&) {
        }
        t.check(agree && tensors_agree, "route agreement, seed " + std::to_string(seed));
        t.check(weighted_cone_internal(p.weight, p.diagram, true).crosscheck_iso,
                "comma cross-check, seed " + std::to_string(seed));
        ++collected;
      } catch (const CapError&) {
        // oversized instance refused by the enumeration budget; resample
      }
    }
    t.check(collected >= 50, "collected enough weighted problems");
  }
}

// --------------------------------------------------------------------------
// criterion 6: oracle suites

void criterion_oracles(Tally& t) {
  // ends against raw transformation enumeration
  for (CosmosTag tag : {CosmosTag::finset, CosmosTag::fincat}) {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
      Rng rng(seed * 13 + (tag == CosmosTag::fincat ? 7 : 0));
      GenConfig cfg = acceptance_config(tag, seed);
      cfg.max_objects = 2;
      cfg.max_cells = 3;
      GenWeightedProblem g = gen_weighted_problem(rng, cfg);
      VFunctorToV homf = hom_functor(g.c, g.c.objects[rng.below(g.c.objects.size())], g.diagram);
      End e = functor_hom(g.weight, homf);
      t.check(global_elements(e.obj).size() == oracle_nat_enum(g.weight, homf),
              "end count, seed " + std::to_string(seed));
    }
  }
  // internal homs against raw internal-functor enumeration
  for (CosmosTag tag : {CosmosTag::finset, CosmosTag::fincat}) {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      Rng rng(seed * 17 + (tag == CosmosTag::fincat ? 3 : 0));
      GenConfig cfg = acceptance_config(tag, seed);
      cfg.max_objects = 2;
      cfg.max_cells = 3;
      InternalCategory i = gen_internal(rng, cfg);
      InternalCategory a = gen_internal(rng, cfg);
      if (i.a0.cell_count() > 6 || i.a1.cell_count() > 6 || a.a0.cell_count() > 6 ||
          a.a1.cell_count() > 6)
        continue;
      InternalHom h = internal_hom(i, a);
      t.check(global_elements(h.cat.a0).size() == oracle_functor_enum(i, a),
              "internal hom count, seed " + std::to_string(seed));
    }
  }
  // the two family descriptions of the slice isomorphism
  std::size_t tuples = 0;
  for (std::uint64_t seed = 1; tuples < 30 && seed <= 400; ++seed) {
    CosmosTag tag = seed % 3 == 0 ? CosmosTag::fincat : CosmosTag::finset;
    Rng rng(seed * 19);
    GenConfig cfg = acceptance_config(tag, seed);
    cfg.max_objects = 2;
    cfg.max_cells = 2;
    GenWeightedProblem g = gen_weighted_problem(rng, cfg);
    std::size_t total = 0;
    for (const auto& [i, wi] : g.weight.onobj) total += wi.cell_count();
    if (total > 2) continue;
    Obj probe = generators(tag).probes[0];
    Label a = g.c.objects[rng.below(g.c.objects.size())];
    IsoOfSlicesReport r = oracle_isoofslices(g.weight, g.diagram, a, probe);
    t.check(r.ok(), "family bijection, seed " + std::to_string(seed));
    ++tuples;
  }
  t.check(tuples >= 30, "collected enough family tuples");
}

// --------------------------------------------------------------------------
// criterion 7: adjunction roundtrips and shortcut agreements

void criterion_adjunction(Tally& t) {
  std::size_t roundtrips = 0;
  for (std::uint64_t seed = 1; roundtrips < 25; ++seed) {
    CosmosTag tag = seed % 2 ? CosmosTag::finset : CosmosTag::fincat;
    Rng rng(seed * 23);
    GenConfig cfg = acceptance_config(tag, seed);
    VCategory c = gen_vcategory(rng, cfg);
    Internalization ic = internalize(c);
    VFunctorCC f = gen_vfunctor(rng, cfg, c);
    InternalFunctor h = int_functor(f, ic, ic);
    InternalFunctor again = transpose_to_internal(transpose_to_enriched(h, ic), ic, ic.cat);
    t.check(again == h, "transpose roundtrip, seed " + std::to_string(seed));
    ++roundtrips;
  }
  for (CosmosTag tag : {CosmosTag::finset, CosmosTag::fincat}) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      Rng rng(seed * 29 + (tag == CosmosTag::fincat ? 1 : 0));
      GenConfig cfg = acceptance_config(tag, seed);
      cfg.max_objects = 2;
      cfg.max_cells = 3;
      InternalCategory a = gen_internal(rng, cfg);
      InternalHom ah = arrow_hom(a);
      t.check(is_iso(arrow_hom_level0_iso(a, ah)),
              "arrow hom shortcut, seed " + std::to_string(seed));
      for (const auto& probe : generators(tag).probes) {
        InternalHom hc = hom_cst(probe, a);
        t.check(is_iso(hom_cst_level0_iso(probe, a, hc)) &&
                    is_iso(hom_cst_level1_iso(probe, a, hc)),
                "constant hom shortcut, seed " + std::to_string(seed));
      }
      VCategory c = gen_vcategory(rng, cfg);
      for (const auto& probe : generators(tag).probes)
        t.check(ar_x_matches_shifted(c, probe), "shifted hom identity, seed " + std::to_string(seed));
    }
  }
}

// --------------------------------------------------------------------------
// criterion 8: CLI golden files and the exit-code contract

int run_cli(const std::string& args, std::string* output) {
  std::string outfile = "/tmp/vcat_acceptance_out.txt";
  std::string cmd = g_cli_path + " " + args + " > " + outfile + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  if (output) *output = slurp(outfile);
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -1;
}

void criterion_cli(Tally& t) {
  const std::string src = VCAT_SOURCE_DIR;
  const std::string fx = src + "/fixtures/";
  const std::string gd = src + "/tests/golden/";
  struct Case {
    std::string args;
    std::string golden;
    int exit_code;
  };
  const std::vector<Case> cases = {
      {"representable --problem repF0at1 --method all " + fx + "P1.json", "P1_rep_f0.golden", 0},
      {"representable --problem repF1 " + fx + "P1.json", "P1_rep_f1_search.golden", 1},
      {"groth --presheaf F1 " + fx + "P1.json", "P1_groth_f1.golden", 0},
      {"fiber --presheaf F0 --report text " + fx + "P1.json", "P1_fiber_f0.golden", 0},
      {"terminal --problem terminalP2 " + fx + "P2.json", "P2_terminal.golden", 1},
      {"tensor --problem bridgeP2 --report text " + fx + "P2.json", "P2_bridge.golden", 0},
      {"weighted-limit --problem wlX --method all " + fx + "P3.json", "P3_wl_x.golden", 0},
      {"weighted-limit --problem wlTop --method all --report text " + fx + "P3.json",
       "P3_wl_top.golden", 1},
  };
  for (const auto& c : cases) {
    std::string out;
    int code = run_cli(c.args, &out);
    t.check(out == slurp(gd + c.golden), "golden " + c.golden);
    t.check(code == c.exit_code, "exit code for " + c.golden);
  }
  for (const auto& f : {"P1.json", "P2.json", "P3.json"})
    t.check(run_cli("roundtrip " + fx + f, nullptr) == 0, std::string("roundtrip ") + f);
  t.check(run_cli("validate " + fx + "P1.json", nullptr) == 0, "validate exit code");
  t.check(run_cli("representable --problem nothere " + fx + "P1.json", nullptr) == 2,
          "unknown problem exits 2");
  t.check(run_cli("validate /nonexistent.json", nullptr) == 2, "missing file exits 2");
}

}  // namespace

int main(int argc, char** argv) {
  g_cli_path = argc > 1 ? argv[1] : "./vcat-cli";
  struct Criterion {
    const char* name;
    std::function<void(Tally&)> fn;
  };
  const std::vector<Criterion> criteria = {
      {"equivalence (unit and counit isomorphisms)", criterion_equivalence},
      {"fibration certificates and stability", criterion_fibrations},
      {"representation theorem routes", criterion_representation},
      {"counterexample fidelity", criterion_counterexample},
      {"weighted limit routes and cross-check", criterion_weighted},
      {"oracle enumerations", criterion_oracles},
      {"adjunction roundtrips and shortcuts", criterion_adjunction},
      {"CLI golden files and exit codes", criterion_cli},
  };
  bool all_pass = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Tally t;
    double t0 = now_s();
    bool threw = false;
    std::string what;
    try {
      criteria[k].fn(t);
    } catch (const std::exception& e) {
      threw = true;
      what = e.what();
    }
    bool pass = !threw && t.failures == 0 && t.cases > 0;
    all_pass = all_pass && pass;
    std::printf("[%zu/%zu] %-45s %s  (%zu checks, %.1fs)%s\n", k + 1, criteria.size(),
                criteria[k].name, pass ? "PASS" : "FAIL", t.cases, now_s() - t0,
                threw ? ("  exception: " + what).c_str() : t.detail.str().c_str());
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
