#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"

#include "crn/verify.hpp"

using namespace crn;
using namespace crn::test;

TEST_CASE("a 2-cycle has exactly one spanning tree per root") {
  SymbolTable tab;
  DiGraph d;
  d.n = 2;
  d.edges = {{0, 1, tab.intern("p", SymKind::Parameter)},
             {1, 0, tab.intern("q", SymKind::Parameter)}};
  for (int root : {0, 1}) {
    auto trees = enumerate_rooted_trees(d, root);
    CHECK(trees.size() == 1);
  }
}

TEST_CASE("complete digraph on 4 vertices has 16 trees per root") {
  SymbolTable tab;
  DiGraph d;
  d.n = 4;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j)
        d.edges.push_back(
            {i, j, tab.intern("e" + std::to_string(i) + std::to_string(j),
                              SymKind::Parameter)});
  for (int root = 0; root < 4; ++root)
    CHECK(enumerate_rooted_trees(d, root).size() == 16);
}

TEST_CASE("enzyme example: enumeration toward the B+E representative gives one tree") {
  Model m = load_model("enzyme_appB.crn");
  std::vector<int> ids = all_reactions(m.net);
  std::vector<CoefVec> shifts(ids.size(), CoefVec(m.net.num_species(), 0));
  int e = m.net.species_index("E");
  shifts[4][e] = 1;
  shifts[5][e] = 1;
  GeneralizedNetwork g = translate(m.net, m.kin, ids, shifts);
  DiGraph d = digraph_of(g);
  Poly k3 = tree_constant_by_enumeration(d, 2);
  auto expect = expr_to_ratfunc(expr_of(m, "k1*k3*k5*k6"));
  CHECK(k3.equal(expect->num()));
  CHECK(enumerate_rooted_trees(d, 2).size() == 1);
}

TEST_CASE("the enumeration oracle refuses big graphs") {
  DiGraph d;
  d.n = 9;
  CHECK_THROWS_AS((void)enumerate_rooted_trees(d, 0), OracleError);
}

TEST_CASE("exhaustive finest on a block-diagonal network gives two parts") {
  auto res = parse_network("R1: A -> B ; k1*a\nR2: B -> A ; k2*b\n"
                           "R3: C -> D ; k3*c\nR4: D -> C ; k4*d\n");
  REQUIRE(res.ok());
  Decomposition dec = exhaustive_finest(res.model->net);
  CHECK(dec.parts.size() == 2);
  CHECK(dec.independent);
}

TEST_CASE("harness reports are byte-identical for identical seeds") {
  Model m = load_model("figure1.crn");
  std::map<int, ExprPtr> exprs;
  exprs[m.net.species_index("A")] = expr_of(m, "k1*b*c/k2");
  exprs[m.net.species_index("C")] = expr_of(m, "k5/k4");
  // note k3 is sampled freely, so this is NOT a steady state in general;
  // determinism is what is under test here
  auto h1 = residual_harness(m.net, m.kin, all_reactions(m.net), exprs, 123, 50, 1e-9);
  auto h2 = residual_harness(m.net, m.kin, all_reactions(m.net), exprs, 123, 50, 1e-9);
  CHECK(h1.rendered == h2.rendered);
  auto h3 = residual_harness(m.net, m.kin, all_reactions(m.net), exprs, 124, 50, 1e-9);
  CHECK(h1.rendered != h3.rendered);
}

TEST_CASE("harness passes a true steady-state family and fails a perturbed one") {
  // 0 -> X at rate ka, X -> 0 at rate kb*x: x = ka/kb
  auto res = parse_network("R1: 0 -> X ; ka\nR2: X -> 0 ; kb*x\n");
  REQUIRE(res.ok());
  Model& m = *res.model;
  std::map<int, ExprPtr> good{{0, expr_of(m, "ka/kb")}};
  auto h = residual_harness(m.net, m.kin, all_reactions(m.net), good, 7, 2000, 1e-12);
  CHECK(h.report.pass);
  std::map<int, ExprPtr> bad{{0, expr_of(m, "ka^2/kb")}};
  auto hb = residual_harness(m.net, m.kin, all_reactions(m.net), bad, 7, 100, 1e-12);
  CHECK(!hb.report.pass);
  CHECK(hb.report.worst_sample >= 0);
}
