#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"

#include "crn/mixedsolver.hpp"
#include "crn/parametrization.hpp"

#include <random>

using namespace crn;
using namespace crn::test;

namespace {

GeneralizedNetwork enzyme_translation(Model& m) {
  std::vector<int> ids = all_reactions(m.net);
  std::vector<CoefVec> shifts(ids.size(), CoefVec(m.net.num_species(), 0));
  int e = m.net.species_index("E");
  shifts[4][e] = 1;
  shifts[5][e] = 1;
  return translate(m.net, m.kin, ids, shifts);
}

std::vector<ForestEdge> paper_forest() {
  return {{0, 1, -1}, {0, 2, -1}, {0, 3, -1}, {0, 4, -1}};
}

// the published H in the m x |F| orientation (transpose of the printed block)
RatMat paper_H() {
  long long h[4][4] = {{0, -1, 1, -1}, {0, 1, -1, 0}, {1, 0, 0, -1}, {0, 0, 1, -1}};
  RatMat H(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) H.at(i, j) = h[i][j];
  return H;
}

} // namespace

TEST_CASE("enzyme example with the published forest and H: verbatim expressions") {
  Model m = load_model("enzyme_appB.crn");
  GeneralizedNetwork g = enzyme_translation(m);
  ParametrizeOptions opts;
  opts.forest_override = paper_forest();
  opts.h_override = paper_H();
  ParametrizeResult pr = parametrize(g, m.kin, opts);
  auto sp = [&](const char* n) { return m.net.species_index(n); };
  CHECK(ratfunc_equal(pr.system.theorem_exprs.at(sp("A")),
                      expr_of(m, "k6/(k1*k3*k5) * (k2*k4 + k3*sigma1 + k2*sigma1)")));
  CHECK(ratfunc_equal(pr.system.theorem_exprs.at(sp("E")), expr_of(m, "k5/sigma1")));
  CHECK(ratfunc_equal(pr.system.theorem_exprs.at(sp("AE")),
                      expr_of(m, "k6*(k4 + sigma1)/(k3*sigma1)")));
  CHECK(ratfunc_equal(pr.system.theorem_exprs.at(sp("B")), expr_of(m, "k6/k5")));
  // M has full rank here: ker M = {0}, B has zero columns, no tau parameters
  CHECK(pr.system.B.cols() == 0);
  CHECK(pr.system.M.rows() == 4);
}

TEST_CASE("a wrong-shape or non-inverse H is rejected") {
  Model m = load_model("enzyme_appB.crn");
  GeneralizedNetwork g = enzyme_translation(m);
  ParametrizeOptions opts;
  opts.forest_override = paper_forest();
  RatMat bad(4, 4);  // zero matrix fails M H M = M for invertible M
  opts.h_override = bad;
  CHECK_THROWS_AS((void)parametrize(g, m.kin, opts), ParametrizationError);
}

TEST_CASE("computed H on the default forest: exact identities and zero residual") {
  Model m = load_model("enzyme_appB.crn");
  GeneralizedNetwork g = enzyme_translation(m);
  ParametrizeResult pr = parametrize(g, m.kin);
  const RatMat& M = pr.system.M;
  const RatMat& H = pr.system.H;
  CHECK(((M * H * M) - M).is_zero());
  CHECK((M * pr.system.B).is_zero());
  // merge chart falls back to sigma-parametrized expressions here
  CHECK(pr.param.free_symbols.size() == 1);
  CHECK(pr.param.exprs.size() == 4);
  auto rep = validate_parametrization(m.net, m.kin, all_reactions(m.net), pr.param.exprs, 500,
                                      1e-12, 42);
  CHECK(rep.pass);
  CHECK(rep.max_residual < 1e-12);
  // theorem chart and merge chart coincide in the fallback case
  for (auto& [sp, e] : pr.param.exprs)
    CHECK(ratfunc_equal(e, pr.system.theorem_exprs.at(sp)));
}

TEST_CASE("the published H also passes the M H M = M validator") {
  Model m = load_model("enzyme_appB.crn");
  GeneralizedNetwork g = enzyme_translation(m);
  ParametrizeOptions opts;
  opts.forest_override = paper_forest();
  ParametrizeResult pr = parametrize(g, m.kin, opts);
  RatMat H = paper_H();
  CHECK(((pr.system.M * H * pr.system.M) - pr.system.M).is_zero());
  // M is invertible, so the computed generalized inverse equals it
  CHECK(pr.system.M.generalized_inverse() == H);
}

TEST_CASE("parametrizations from two different forests both validate") {
  Model m = load_model("enzyme_appB.crn");
  GeneralizedNetwork g = enzyme_translation(m);
  ParametrizeResult def = parametrize(g, m.kin);
  ParametrizeOptions opts;
  opts.forest_override = paper_forest();
  ParametrizeResult pap = parametrize(g, m.kin, opts);
  for (auto* pr : {&def, &pap}) {
    std::map<int, ExprPtr> exprs;
    for (auto& [sp, e] : pr->system.theorem_exprs)
      if (!(e->is_sym())) exprs[sp] = e;
    auto rep =
        validate_parametrization(m.net, m.kin, all_reactions(m.net), exprs, 300, 1e-12, 9);
    CHECK(rep.pass);
  }
}

TEST_CASE("theorem preconditions are reported by name") {
  // not weakly reversible
  auto res = parse_network("R1: A -> B ; k*a\n");
  REQUIRE(res.ok());
  Model& m = *res.model;
  GeneralizedNetwork g = translate(m.net, m.kin, {0}, {CoefVec(2, 0)});
  try {
    (void)parametrize(g, m.kin);
    CHECK(false);
  } catch (const ParametrizationError& e) {
    std::string msg = e.what();
    CHECK((msg.find("reversible") != std::string::npos ||
           msg.find("kinetic complex") != std::string::npos));
  }
}

TEST_CASE("deliberately perturbed exponent fails the residual harness") {
  Model m = load_model("enzyme_appB.crn");
  GeneralizedNetwork g = enzyme_translation(m);
  ParametrizeResult pr = parametrize(g, m.kin);
  std::map<int, ExprPtr> exprs = pr.param.exprs;
  int b = m.net.species_index("B");
  exprs[b] = Expr::pow(exprs[b], Rat(2));  // k6/k5 -> (k6/k5)^2
  auto rep = validate_parametrization(m.net, m.kin, all_reactions(m.net), exprs, 200, 1e-12, 42);
  CHECK(!rep.pass);
  CHECK(rep.max_residual > 1e-6);
}

TEST_CASE("Yu-Craciun associated mass-action system parametrizes as published") {
  Model m = load_model("yu_craciun.crn");
  auto cleared = clear_denominators(m.net, m.kin);
  REQUIRE(std::holds_alternative<ClearedSystem>(cleared));
  ClearedSystem& cs = std::get<ClearedSystem>(cleared);
  Model& dm = cs.derived;
  auto sr = search_translation(dm.net, dm.kin, all_reactions(dm.net));
  REQUIRE(sr.found);
  ParametrizeResult pr = parametrize(sr.gcrn, dm.kin);
  int x1 = dm.net.species_index("X1");
  int x2 = dm.net.species_index("X2");
  // sigma elimination is impossible (two species, rank two): sigma stays free
  REQUIRE(pr.param.free_symbols.size() == 1);
  std::string sigma = dm.net.symbols->name(pr.param.free_symbols[0]);
  CHECK(ratfunc_equal(pr.param.exprs.at(x1), expr_of(dm, sigma + "/k3")));
  CHECK(ratfunc_equal(pr.param.exprs.at(x2),
                      expr_of(dm, sigma + "*(kp1 + " + sigma + ")/(k1*k3)")));
  // with the composite constant expanded, the published form in k2, k3
  std::unordered_map<SymId, ExprPtr> subs(cs.substitutions.begin(), cs.substitutions.end());
  ExprPtr x2_orig = substitute(pr.param.exprs.at(x2), subs);
  CHECK(ratfunc_equal(x2_orig, expr_of(dm, sigma + "*(k2*k3 + " + sigma + ")/(k1*k3)")));
  // and it satisfies the original rational ODEs
  std::map<int, ExprPtr> exprs{{x1, substitute(pr.param.exprs.at(x1), subs)}, {x2, x2_orig}};
  auto rep = validate_parametrization(m.net, m.kin, all_reactions(m.net), exprs, 500, 1e-12, 4);
  CHECK(rep.pass);
}

TEST_CASE("validate_parametrization flags non-positive expressions as hard failures") {
  Model m = load_model("figure1.crn");
  std::map<int, ExprPtr> exprs;
  int a = m.net.species_index("A");
  exprs[a] = expr_of(m, "k1 - k1");  // zero, not positive
  auto rep = validate_parametrization(m.net, m.kin, all_reactions(m.net), exprs, 10, 1e-9, 1);
  CHECK(!rep.pass);
  CHECK(rep.failure.find("non-positive") != std::string::npos);
}

TEST_CASE("kernel basis conventions") {
  // M = 0 (1 x 4): kernel is the whole space
  RatMat z(1, 4);
  RatMat B = z.nullspace();
  CHECK(B.cols() == 4);
  CHECK(B.rank() == 4);
}
