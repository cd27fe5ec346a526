#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"

#include "crn/mixedsolver.hpp"

#include <random>

using namespace crn;
using namespace crn::test;

namespace {

// numeric agreement over random positive environments (handles Hill terms
// that are not rational functions)
bool numerically_equal(const Network& net, const ExprPtr& a, const ExprPtr& b, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.2, 3.0);
  std::set<SymId> syms = a->symbols();
  auto bs = b->symbols();
  syms.insert(bs.begin(), bs.end());
  for (int it = 0; it < 25; ++it) {
    std::vector<double> env(net.symbols->size(), std::numeric_limits<double>::quiet_NaN());
    for (SymId s : syms) env[s] = uni(rng);
    double va = a->eval(env), vb = b->eval(env);
    if (std::fabs(va - vb) > 1e-11 * (1 + std::fabs(va))) return false;
  }
  return true;
}

} // namespace

TEST_CASE("one linear balance: inflow/outflow pair") {
  auto res = parse_network("R1: 0 -> X ; ka\nR2: X -> 0 ; kb*x\n");
  REQUIRE(res.ok());
  Model& m = *res.model;
  auto r = solve_by_elimination(m.net, m.kin, all_reactions(m.net), {}, {});
  REQUIRE(std::holds_alternative<Parametrization>(r));
  auto& p = std::get<Parametrization>(r);
  int x = m.net.species_index("X");
  CHECK(ratfunc_equal(p.exprs.at(x), expr_of(m, "ka/kb")));
  CHECK(p.free_species.empty());
}

TEST_CASE("insulin N9: the Hill subnetwork solves for x37") {
  Model m = load_model("insulin.crn");
  std::vector<int> ids{32, 33};  // R33, R34
  auto r = solve_by_elimination(m.net, m.kin, ids, m.free_species, {});
  REQUIRE(std::holds_alternative<Parametrization>(r));
  auto& p = std::get<Parametrization>(r);
  int x37 = m.net.species_index("X37");
  REQUIRE(p.exprs.count(x37));
  ExprPtr expect = expr_of(m, "k33/k34 * x31^beta/(ktilde^beta + x31^beta) * x36");
  CHECK(numerically_equal(m.net, p.exprs.at(x37), expect, 21));
  // x31 and x36 stay free
  std::set<int> frees(p.free_species.begin(), p.free_species.end());
  CHECK(frees.count(m.net.species_index("X31")));
  CHECK(frees.count(m.net.species_index("X36")));
  auto rep = validate_parametrization(m.net, m.kin, ids, p.exprs, 200, 1e-12, 5);
  CHECK(rep.pass);
}

TEST_CASE("insulin N7: x35 balances the two production terms") {
  Model m = load_model("insulin.crn");
  std::vector<int> ids{27, 28, 29};  // R28, R29, R30
  auto r = solve_by_elimination(m.net, m.kin, ids, m.free_species, {});
  REQUIRE(std::holds_alternative<Parametrization>(r));
  auto& p = std::get<Parametrization>(r);
  int x35 = m.net.species_index("X35");
  REQUIRE(p.exprs.count(x35));
  ExprPtr expect = expr_of(
      m, "(k28*x29*x34 + k29*x28^alpha/(kbar^alpha + x28^alpha)*x34)/k30");
  CHECK(numerically_equal(m.net, p.exprs.at(x35), expect, 22));
  auto rep = validate_parametrization(m.net, m.kin, ids, p.exprs, 200, 1e-12, 6);
  CHECK(rep.pass);
}

TEST_CASE("elimination reports Unsolvable on a balance nonlinear in every unknown") {
  auto res = parse_network("R1: 2X -> X ; k*x^2\n");
  REQUIRE(res.ok());
  auto r = solve_by_elimination(res.model->net, res.model->kin,
                                all_reactions(res.model->net), {}, {});
  REQUIRE(std::holds_alternative<Unsolvable>(r));
  CHECK(!std::get<Unsolvable>(r).reason.empty());
}

TEST_CASE("free directive pins the free choice in elimination") {
  auto res = parse_network("R1: A -> B ; k1*a\nR2: B -> A ; k2*b\nfree A\n");
  REQUIRE(res.ok());
  Model& m = *res.model;
  auto r = solve_by_elimination(m.net, m.kin, all_reactions(m.net), m.free_species, {});
  REQUIRE(std::holds_alternative<Parametrization>(r));
  auto& p = std::get<Parametrization>(r);
  int b = m.net.species_index("B");
  REQUIRE(p.exprs.count(b));
  CHECK(ratfunc_equal(p.exprs.at(b), expr_of(m, "k1*a/k2")));
}

TEST_CASE("coefficient positivity certificates are demanded, not assumed") {
  // dx/dt = k1 - k2*x + k3*x has x-coefficient k3 - k2 with no certificate
  auto res = parse_network("R1: 0 -> X ; k1\nR2: X -> 0 ; k2*x\nR3: X -> 2X ; k3*x\n");
  REQUIRE(res.ok());
  auto r = solve_by_elimination(res.model->net, res.model->kin,
                                all_reactions(res.model->net), {}, {});
  CHECK(std::holds_alternative<Unsolvable>(r));
}

TEST_CASE("denominator clearing of the Yu-Craciun system") {
  Model m = load_model("yu_craciun.crn");
  auto r = clear_denominators(m.net, m.kin);
  REQUIRE(std::holds_alternative<ClearedSystem>(r));
  ClearedSystem& cs = std::get<ClearedSystem>(r);
  const Network& dn = cs.derived.net;
  REQUIRE(dn.num_reactions() == 3);
  auto cx = [&](int i, bool source) {
    const auto& rr = dn.reactions[i];
    return complex_to_string(dn, dn.complexes[source ? rr.source : rr.product].coeffs);
  };
  CHECK(cx(0, true) == "X1 + X2");
  CHECK(cx(0, false) == "2X1");
  CHECK(cx(1, true) == "2X1");
  CHECK(cx(1, false) == "X1 + X2");
  CHECK(cx(2, true) == "3X1");
  CHECK(cx(2, false) == "2X1 + X2");
  // composite constant kp1 = k2*k3 on the middle reaction
  REQUIRE(cs.substitutions.size() == 1);
  Model& dm = cs.derived;
  CHECK(dn.symbols->name(cs.substitutions[0].first) == "kp1");
  CHECK(ratfunc_equal(cs.substitutions[0].second, expr_of(dm, "k2*k3")));
  for (auto& rl : cs.derived.kin.rates) CHECK(rl.tag == KineticsTag::MassAction);
  // D = k2 + x1
  CHECK(cs.denominator.equal(
      expr_to_ratfunc(expr_of(dm, "k2 + x1"))->num()));
}

TEST_CASE("cleared RHS equals D times the original RHS at 1000 points") {
  Model m = load_model("yu_craciun.crn");
  auto r = clear_denominators(m.net, m.kin);
  REQUIRE(std::holds_alternative<ClearedSystem>(r));
  ClearedSystem& cs = std::get<ClearedSystem>(r);
  std::unordered_map<SymId, ExprPtr> subs(cs.substitutions.begin(), cs.substitutions.end());
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> uni(0.1, 10.0);
  const SymbolTable& tab = *m.net.symbols;
  for (int it = 0; it < 1000; ++it) {
    std::vector<double> env(tab.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t s = 0; s < tab.size(); ++s) env[s] = uni(rng);
    // bind composite constants to their definitions
    for (auto& [sym, def] : cs.substitutions) env[sym] = def->eval(env);
    auto f_orig = evaluate_rhs(m.net, m.kin, env);
    auto f_clear = evaluate_rhs(cs.derived.net, cs.derived.kin, env);
    double D = cs.denominator.eval(env);
    for (std::size_t j = 0; j < f_orig.size(); ++j)
      CHECK(f_clear[j] == doctest::Approx(D * f_orig[j]).epsilon(1e-10));
  }
}

TEST_CASE("already mass-action input transforms to itself with D = 1") {
  Model m = load_model("figure1.crn");
  auto r = clear_denominators(m.net, m.kin);
  REQUIRE(std::holds_alternative<ClearedSystem>(r));
  ClearedSystem& cs = std::get<ClearedSystem>(r);
  CHECK(cs.denominator.equal(Poly(Rat(1))));
  CHECK(cs.derived.net.num_reactions() == m.net.num_reactions());
  CHECK(cs.substitutions.empty());
  // same reaction vectors and rates up to reordering
  std::multiset<std::string> want, got;
  for (std::size_t i = 0; i < m.net.num_reactions(); ++i) {
    const auto& rr = m.net.reactions[i];
    want.insert(complex_to_string(m.net, m.net.complexes[rr.source].coeffs) + ">" +
                complex_to_string(m.net, m.net.complexes[rr.product].coeffs));
  }
  for (std::size_t i = 0; i < cs.derived.net.num_reactions(); ++i) {
    const auto& rr = cs.derived.net.reactions[i];
    got.insert(complex_to_string(cs.derived.net, cs.derived.net.complexes[rr.source].coeffs) +
               ">" +
               complex_to_string(cs.derived.net, cs.derived.net.complexes[rr.product].coeffs));
  }
  CHECK(want == got);
}

TEST_CASE("differing denominators make clearing inapplicable") {
  auto res = parse_network(
      "R1: A -> B ; k1*a/(h1 + a)\nR2: B -> A ; k2*b/(h2 + b)\n");
  REQUIRE(res.ok());
  auto r = clear_denominators(res.model->net, res.model->kin);
  REQUIRE(std::holds_alternative<Inapplicable>(r));
  CHECK(std::get<Inapplicable>(r).reason.find("denominator") != std::string::npos);
}

TEST_CASE("symbolic exponents make clearing inapplicable") {
  Model m = load_model("insulin.crn");
  auto r = clear_denominators(m.net, m.kin);
  CHECK(std::holds_alternative<Inapplicable>(r));
}
