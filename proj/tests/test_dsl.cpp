#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"

#include <random>

using namespace crn;
using namespace crn::test;

TEST_CASE("basic reaction line parses to the expected structure") {
  auto res = parse_network("R1: B + C -> A + C ; k1*b*c\n");
  REQUIRE(res.ok());
  const Network& net = res.model->net;
  CHECK(net.species.size() == 3);
  CHECK(net.species[0].name == "B");
  CHECK(net.reactions[0].label == "R1");
  CHECK(res.model->kin.rates[0].tag == KineticsTag::MassAction);
}

TEST_CASE("zero complex and coefficients") {
  auto res = parse_network("R1: 0 -> B ; k\nR2: 2C -> C ; k2*c^2\n");
  REQUIRE(res.ok());
  const Network& net = res.model->net;
  CHECK(net.complexes[net.reactions[0].source].is_zero());
  CHECK(net.complexes[net.reactions[1].source].coeffs == CoefVec{0, 2});
}

TEST_CASE("diagnostics carry spans and errors fail the parse") {
  auto res = parse_network("R1: A -> \n");
  CHECK(!res.ok());
  REQUIRE(!res.diagnostics.empty());
  CHECK(res.diagnostics[0].span.line == 1);
  CHECK(res.diagnostics[0].span.col > 0);
}

TEST_CASE("duplicate labels and unknown concentration identifiers are errors") {
  auto dup = parse_network("R1: A -> B ; k*a\nR1: B -> A ; k2*b\n");
  CHECK(!dup.ok());
  auto unk = parse_network("R1: A -> B ; k*x99\n");
  CHECK(!unk.ok());
  bool msg = false;
  for (auto& d : unk.diagnostics)
    msg |= d.message.find("unknown species") != std::string::npos;
  CHECK(msg);
}

TEST_CASE("reversible shorthand expands to two reactions") {
  auto res = parse_network("E1: A + E <-> AE ; k1*a*e ; k2*ae\n");
  REQUIRE(res.ok());
  const Network& net = res.model->net;
  REQUIRE(net.reactions.size() == 2);
  CHECK(net.reactions[0].label == "E1f");
  CHECK(net.reactions[1].label == "E1r");
  CHECK(reaction_vector(net, net.reactions[0]) ==
        CoefVec{-1, -1, 1});
  auto missing = parse_network("E1: A <-> B ; k1*a\n");
  CHECK(!missing.ok());
}

TEST_CASE("translate and free directives") {
  auto res = parse_network(
      "R5: B -> 0 ; k5*b\nR6: 0 -> A ; k6\ntranslate R5 by E\ntranslate R6 by E\nfree A\n");
  CHECK(!res.ok());  // E never appears in a complex: unknown species
  auto res2 = parse_network(
      "R1: A + E -> AE ; k1*a*e\nR2: AE -> A + E ; k2*ae\nR5: B -> 0 ; k5*b\n"
      "R6: 0 -> A ; k6\ntranslate R5 by E\ntranslate R6 by E - A + A\nfree A B\n");
  REQUIRE(res2.ok());
  const Model& m = *res2.model;
  int r5 = 2, r6 = 3;
  CHECK(m.translate_shifts.at(r5)[m.net.species_index("E")] == 1);
  CHECK(m.translate_shifts.at(r6)[m.net.species_index("E")] == 1);
  CHECK(m.free_species == std::vector<int>{m.net.species_index("A"), m.net.species_index("B")});
}

TEST_CASE("negative shifts parse in translate directives") {
  auto res = parse_network("R1: X7 + X9 -> X7 + X10 ; k8*x7*x9\nR2: X10 -> X9 ; k9*x10\n"
                           "translate R1 by -X7\n");
  REQUIRE(res.ok());
  CHECK(res.model->translate_shifts.at(0)[res.model->net.species_index("X7")] == -1);
}

TEST_CASE("round-trip: parse(render(m)) is structurally equal, render idempotent") {
  for (const char* name :
       {"figure1.crn", "enzyme_appB.crn", "insulin.crn", "yu_craciun.crn",
        "simple_translation.crn"}) {
    Model m = load_model(name);
    std::string text = render_network(m);
    auto re = parse_network(text);
    REQUIRE(re.ok());
    const Model& m2 = *re.model;
    REQUIRE(m2.net.species.size() == m.net.species.size());
    REQUIRE(m2.net.reactions.size() == m.net.reactions.size());
    for (std::size_t i = 0; i < m.net.species.size(); ++i)
      CHECK(m2.net.species[i].name == m.net.species[i].name);
    for (std::size_t i = 0; i < m.net.reactions.size(); ++i) {
      CHECK(m2.net.reactions[i].label == m.net.reactions[i].label);
      CHECK(reaction_vector(m2.net, m2.net.reactions[i]) ==
            reaction_vector(m.net, m.net.reactions[i]));
    }
    CHECK(m2.translate_shifts == m.translate_shifts);
    CHECK(m2.free_species == m.free_species);
    CHECK(render_network(m2) == text);
  }
}

TEST_CASE("insulin kinetics census: 34 mass-action + 2 rational") {
  Model m = load_model("insulin.crn");
  int ma = 0, ra = 0;
  for (auto& r : m.kin.rates) {
    if (r.tag == KineticsTag::MassAction) ++ma;
    if (r.tag == KineticsTag::Rational) ++ra;
  }
  CHECK(ma == 34);
  CHECK(ra == 2);
}

TEST_CASE("empty input yields an error diagnostic") {
  auto res = parse_network("");
  CHECK(!res.ok());
  CHECK(res.has_errors());
}

TEST_CASE("random token mutations never crash and bad inputs always diagnose") {
  std::string base = read_file(std::string(CRN_DATA_DIR) + "/figure1.crn");
  std::mt19937_64 rng(0xF422);
  const std::string junk = ";:+-*/^()<>#abc123 \n";
  for (int it = 0; it < 300; ++it) {
    std::string s = base;
    int edits = 1 + (int)(rng() % 4);
    for (int e = 0; e < edits; ++e) {
      std::size_t pos = rng() % s.size();
      s[pos] = junk[rng() % junk.size()];
    }
    auto res = parse_network(s);  // must not throw
    if (!res.ok()) CHECK(res.has_errors());
  }
}

TEST_CASE("parametrization files parse with comments and references") {
  Model m = load_model("figure1.crn");
  auto pf = parse_param_file("# comment\na = k1*b*c/k2\nc = k5/k4\n", m);
  REQUIRE(pf.file.has_value());
  CHECK(pf.file->entries.size() == 2);
  CHECK(pf.file->entries[0].first == "a");
}
