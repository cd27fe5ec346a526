#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"

#include "crn/merge.hpp"
#include "crn/pipeline.hpp"
#include "crn/verify.hpp"

#include <random>

using namespace crn;
using namespace crn::test;

namespace {

std::vector<int> names_to_indices(const Network& net, const std::vector<std::string>& names) {
  std::vector<int> out;
  for (auto& n : names) out.push_back(net.species_index(n));
  return out;
}

// resolve a reference parametrization file against a model
std::map<int, ExprPtr> load_reference(Model& m, const std::string& name) {
  auto pr = parse_param_file(read_file(std::string(CRN_DATA_DIR) + "/" + name), m);
  REQUIRE(pr.file.has_value());
  std::map<int, ExprPtr> exprs;
  for (auto& [nm, e] : pr.file->entries) {
    int sp = -1;
    for (std::size_t i = 0; i < m.net.species.size(); ++i) {
      std::string lowered = m.net.species[i].name;
      for (auto& ch : lowered) ch = (char)std::tolower((unsigned char)ch);
      if (lowered == nm || m.net.species[i].name == nm) sp = (int)i;
    }
    REQUIRE(sp >= 0);
    exprs[sp] = e;
  }
  return exprs;
}

} // namespace

TEST_CASE("merging parts over disjoint species concatenates without constraints") {
  auto res = parse_network("R1: A -> B ; k1*a\nR2: B -> A ; k2*b\n"
                           "R3: C -> D ; k3*c\nR4: D -> C ; k4*d\n");
  REQUIRE(res.ok());
  Model& m = *res.model;
  auto pres = run_pipeline(m);
  REQUIRE(pres.ok);
  CHECK(pres.merge.constraints.empty());
  CHECK(pres.merge.merged.exprs.size() == 2);
  CHECK(pres.merge.merged.free_species.size() == 2);
}

TEST_CASE("shared species: a sigma-valued expression is solved against a constant") {
  auto res = parse_network("R1: A -> B ; k1*a\n");
  REQUIRE(res.ok());
  Model& m = *res.model;
  SymId sigma = m.net.symbols->intern("sigma1", SymKind::Sigma);
  int b = m.net.species_index("B");
  Parametrization p1;
  p1.support = {b};
  p1.exprs[b] = expr_of(m, "k6/k5");
  Parametrization p2;
  p2.support = {b};
  p2.exprs[b] = Expr::symbol(sigma);
  p2.free_symbols = {sigma};
  MergeResult mr = merge_parametrizations(m.net, {p1, p2});
  CHECK(!mr.contradiction);
  REQUIRE(mr.constraints.size() == 1);
  CHECK(mr.constraints[0].resolution == MergeConstraint::Resolution::SolvedSymbol);
  CHECK(mr.constraints[0].solved_symbol == sigma);
  CHECK(ratfunc_equal(mr.merged.sigma_defs.at(sigma), expr_of(m, "k6/k5")));
  CHECK(mr.merged.free_symbols.empty());
}

TEST_CASE("contradictory constant expressions are reported") {
  auto res = parse_network("R1: A -> B ; k1*a\n");
  REQUIRE(res.ok());
  Model& m = *res.model;
  int b = m.net.species_index("B");
  Parametrization p1, p2;
  p1.support = {b};
  p1.exprs[b] = Expr::num(2);
  p2.support = {b};
  p2.exprs[b] = Expr::num(3);
  MergeResult mr = merge_parametrizations(m.net, {p1, p2});
  CHECK(mr.contradiction);
  CHECK(mr.contradiction_message.find("B") != std::string::npos);
}

TEST_CASE("insulin end-to-end: merged parametrization, free set, ACR, residuals") {
  Model m = load_model("insulin.crn");
  PipelineOptions opts;
  opts.samples = 100;
  opts.tol = 1e-9;
  auto res = run_pipeline(m, opts);
  REQUIRE(res.errors.empty());
  CHECK(res.ok);
  REQUIRE(res.decomposition.parts.size() == 10);
  for (auto& p : res.parts) {
    CHECK(p.ok);
    if (p.pure_mass_action) {
      CHECK(p.method == "translation");
      REQUIRE(p.effective.has_value());
      CHECK(p.effective->delta == 0);
      CHECK(p.kinetic->delta == 0);
    } else {
      CHECK(p.method == "elimination");
    }
  }
  // the merged free parameters are exactly the published ten
  std::vector<int> want = names_to_indices(
      m.net, {"X3", "X7", "X10", "X21", "X26", "X31", "X33", "X34", "X36", "X38"});
  std::sort(want.begin(), want.end());
  CHECK(res.merge.merged.free_species == want);
  CHECK(res.merge.merged.free_symbols.empty());
  CHECK(res.merge.merged.exprs.size() == 17);
  // no species has absolute concentration robustness
  for (auto& [sp, acr] : res.acr) CHECK(!acr);
  CHECK(res.merged_residual.pass);
  CHECK(res.merged_residual.max_residual < 1e-9);

  // merged expressions agree with the reference closed forms pointwise
  Model ref_model = load_model("insulin.crn");
  auto reference = load_reference(ref_model, "insulin_reference.params");
  // evaluate both on common samples
  std::mt19937_64 rng(31415);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const SymbolTable& tab = *m.net.symbols;
  for (int it = 0; it < 30; ++it) {
    std::vector<double> env(std::max(tab.size(), ref_model.net.symbols->size()),
                            std::numeric_limits<double>::quiet_NaN());
    auto bind = [&](const std::string& name, double v) {
      SymId s1 = tab.lookup(name);
      if (s1 != kNoSym) env[s1] = v;
      SymId s2 = ref_model.net.symbols->lookup(name);
      if (s2 != kNoSym && s2 < env.size()) env[s2] = v;
    };
    for (int k = 1; k <= 36; ++k) bind("k" + std::to_string(k), std::pow(10.0, 2.0 * uni(rng) - 1.0));
    bind("alpha", 1.7);
    bind("beta", 2.3);
    bind("kbar", 0.9);
    bind("ktilde", 1.2);
    for (int f : want) bind(
        [&] {
          std::string lowered = m.net.species[f].name;
          for (auto& ch : lowered) ch = (char)std::tolower((unsigned char)ch);
          return lowered;
        }(),
        std::pow(10.0, 2.0 * uni(rng) - 1.0));
    // resolve the reference topologically (x20 references x35, etc.)
    std::map<int, ExprPtr> pending = reference;
    int guard = 0;
    while (!pending.empty() && ++guard < 64) {
      for (auto it2 = pending.begin(); it2 != pending.end();) {
        bool ready = true;
        for (SymId s : it2->second->symbols())
          if (std::isnan(env[s])) ready = false;
        if (ready) {
          env[ref_model.net.species[it2->first].conc_sym] = it2->second->eval(env);
          it2 = pending.erase(it2);
        } else {
          ++it2;
        }
      }
    }
    REQUIRE(pending.empty());
    for (auto& [sp, e] : res.merge.merged.exprs) {
      double mine = e->eval(env);
      double refv = env[ref_model.net.species[sp].conc_sym];
      CHECK(mine == doctest::Approx(refv).epsilon(1e-9));
    }
  }
}

TEST_CASE("merge is order-independent for the insulin parts") {
  Model m = load_model("insulin.crn");
  auto res = run_pipeline(m);
  REQUIRE(res.ok);
  std::vector<Parametrization> parts;
  for (auto& p : res.parts) parts.push_back(p.param);
  MergeResult fwd = merge_parametrizations(m.net, parts);
  std::reverse(parts.begin(), parts.end());
  MergeResult rev = merge_parametrizations(m.net, parts);
  CHECK(fwd.merged.free_species == rev.merged.free_species);
  REQUIRE(fwd.merged.exprs.size() == rev.merged.exprs.size());
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> uni(0.3, 2.0);
  const SymbolTable& tab = *m.net.symbols;
  std::vector<double> env(tab.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t s = 0; s < tab.size(); ++s) env[s] = uni(rng);
  env[tab.lookup("alpha")] = 2.0;
  env[tab.lookup("beta")] = 2.0;
  for (auto& [sp, e] : fwd.merged.exprs) {
    double a = e->eval(env);
    double b = rev.merged.exprs.at(sp)->eval(env);
    CHECK(a == doctest::Approx(b).epsilon(1e-10));
  }
}

TEST_CASE("enzyme network: ACR exactly in species B") {
  Model m = load_model("enzyme_appB.crn");
  auto res = run_pipeline(m);
  REQUIRE(res.ok);
  int b = m.net.species_index("B");
  for (auto& [sp, acr] : res.acr) CHECK(acr == (sp == b));
  // b = k6/k5 itself
  CHECK(ratfunc_equal(res.merge.merged.exprs.at(b),
                      expr_of(m, "k6/k5")));
}

TEST_CASE("a constant species expression is ACR") {
  auto res = parse_network("R1: A -> B ; k1*a\n");
  REQUIRE(res.ok());
  Model& m = *res.model;
  Parametrization p;
  p.support = {0, 1};
  p.exprs[0] = Expr::num(3);
  p.free_species = {1};
  auto acr = acr_report(m.net, p);
  CHECK(acr.at(0));
  CHECK(!acr.at(1));
}

TEST_CASE("compose_exclusive concatenates and rejects overlap") {
  auto res = parse_network(
      "R1: A <-> B ; k1*a ; k2*b\n"
      "R2: C -> D ; k3*c^2/(h^2 + c^2)\n"
      "R3: D -> C ; k4*d\n");
  REQUIRE(res.ok());
  Model& m = *res.model;
  auto pres = run_pipeline(m);
  REQUIRE(pres.ok);
  REQUIRE(pres.parts.size() == 2);
  CHECK(pres.mau.mutually_exclusive);
  Parametrization combo =
      compose_exclusive(m.net, pres.parts[0].param, pres.parts[1].param);
  CHECK(combo.exprs.size() ==
        pres.parts[0].param.exprs.size() + pres.parts[1].param.exprs.size());
  // (a1, ..., an, b_{n+1}, ..., b_p): dependents from part one, then part two
  auto rep = validate_parametrization(m.net, m.kin, all_reactions(m.net), combo.exprs, 100,
                                      1e-10, 17);
  CHECK(rep.pass);
  CHECK_THROWS_AS((void)compose_exclusive(m.net, pres.parts[0].param, pres.parts[0].param),
                  MergeError);
}

TEST_CASE("synthetic n=2, p=4 instance composes to (a1, a2, b3, b4)") {
  auto res = parse_network(
      "R1: A1 <-> A2 ; k1*a1 ; k2*a2\n"
      "R2: B3 -> B4 ; k3*b3^2/(h^2 + b3^2)\n"
      "R3: B4 -> B3 ; k4*b4\n");
  REQUIRE(res.ok());
  Model& m = *res.model;
  auto pres = run_pipeline(m);
  REQUIRE(pres.ok);
  Parametrization combo =
      compose_exclusive(m.net, pres.parts[0].param, pres.parts[1].param);
  // one dependent per block, one free per block
  CHECK(combo.exprs.size() == 2);
  CHECK(combo.free_species.size() == 2);
}
