#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"

#include "crn/decomposition.hpp"
#include "crn/translation.hpp"

#include <random>

using namespace crn;
using namespace crn::test;

namespace {

GeneralizedNetwork enzyme_translation(Model& m) {
  std::vector<int> ids = all_reactions(m.net);
  std::vector<CoefVec> shifts(ids.size(), CoefVec(m.net.num_species(), 0));
  int e = m.net.species_index("E");
  shifts[4][e] = 1;  // R5: B -> 0 lifted by E
  shifts[5][e] = 1;  // R6: 0 -> A lifted by E
  return translate(m.net, m.kin, ids, shifts);
}

} // namespace

TEST_CASE("enzyme example: translated structure, classes and phantom edge") {
  Model m = load_model("enzyme_appB.crn");
  GeneralizedNetwork g = enzyme_translation(m);
  REQUIRE(g.vertices.size() == 5);
  // vertex 2 and 3 share the stoichiometric complex B+E with kinetic
  // complexes B+E and B; vertex 4 is E with kinetic complex 0
  CHECK(complex_to_string(m.net, g.vertices[2].y) == "B + E");
  CHECK(complex_to_string(m.net, *g.vertices[2].ykin) == "B + E");
  CHECK(complex_to_string(m.net, g.vertices[3].y) == "B + E");
  CHECK(complex_to_string(m.net, *g.vertices[3].ykin) == "B");
  CHECK(complex_to_string(m.net, g.vertices[4].y) == "E");
  CHECK(complex_to_string(m.net, *g.vertices[4].ykin) == "0");
  CHECK(g.all_sources());
  // V* holds the class representatives 0,1,2,4
  CHECK(g.representative == std::vector<int>{0, 1, 2, 4});
  int phantoms = 0;
  for (auto& e : g.edges)
    if (e.phantom) {
      ++phantoms;
      CHECK(e.tail == 2);
      CHECK(e.head == 3);
    }
  CHECK(phantoms == 1);
  CHECK(weakly_reversible(g));
  CHECK(effective_deficiency(g) == 0);
  CHECK(kinetic_deficiency(g) == 0);
  StructuralSummary eff = effective_structure(g);
  CHECK(eff.n == 4);
  CHECK(eff.ell == 1);
  CHECK(eff.s == 3);
  CHECK(eff.weakly_reversible);
}

TEST_CASE("phantom edges contribute nothing: deleting them leaves f unchanged") {
  Model m = load_model("enzyme_appB.crn");
  GeneralizedNetwork g = enzyme_translation(m);
  CHECK(check_dynamic_equivalence(m.net, m.kin, g, 20, 7) < 1e-12);
}

TEST_CASE("effective edges preserve the original reaction vectors exactly") {
  Model m = load_model("enzyme_appB.crn");
  GeneralizedNetwork g = enzyme_translation(m);
  for (auto& e : g.edges) {
    if (e.phantom) continue;
    CoefVec rv = reaction_vector(m.net, m.net.reactions.at(e.reaction));
    for (std::size_t i = 0; i < rv.size(); ++i)
      CHECK(g.vertices[e.head].y[i] - g.vertices[e.tail].y[i] == rv[i]);
  }
}

TEST_CASE("zero-shift translation of a reversible pair: ykin = y, no phantoms") {
  auto res = parse_network("R1: A <-> B ; k1*a ; k2*b\n");
  REQUIRE(res.ok());
  Model& m = *res.model;
  std::vector<int> ids = all_reactions(m.net);
  GeneralizedNetwork g =
      translate(m.net, m.kin, ids, std::vector<CoefVec>(2, CoefVec(2, 0)));
  CHECK(g.vertices.size() == 2);
  for (auto& v : g.vertices) CHECK(*v.ykin == v.y);
  for (auto& e : g.edges) CHECK(!e.phantom);
  CHECK(effective_deficiency(g) == 0);
  CHECK(kinetic_deficiency(g) == 0);
  CHECK(check_dynamic_equivalence(m.net, m.kin, g, 10, 3) == 0.0);
}

TEST_CASE("negative shifted coordinate is rejected with the reaction name") {
  Model m = load_model("figure1.crn");
  std::vector<int> ids = all_reactions(m.net);
  std::vector<CoefVec> shifts(ids.size(), CoefVec(3, 0));
  shifts[1][2] = -1;  // R2: A -> 0 shifted by -C
  try {
    (void)translate(m.net, m.kin, ids, shifts);
    CHECK(false);
  } catch (const TranslationError& e) {
    CHECK(std::string(e.what()).find("R2") != std::string::npos);
  }
}

TEST_CASE("search finds the +E lift for the enzyme network") {
  Model m = load_model("enzyme_appB.crn");
  auto sr = search_translation(m.net, m.kin, all_reactions(m.net));
  REQUIRE(sr.found);
  CHECK(weakly_reversible(sr.gcrn));
  CHECK(effective_deficiency(sr.gcrn) == 0);
  CHECK(kinetic_deficiency(sr.gcrn) == 0);
  int e = m.net.species_index("E");
  CHECK(sr.shifts[4][e] == 1);
  CHECK(sr.shifts[5][e] == 1);
  for (int i : {0, 1, 2, 3})
    for (auto v : sr.shifts[i]) CHECK(v == 0);
}

TEST_CASE("search returns zero shifts when the network is already good") {
  auto res = parse_network("R1: A <-> B ; k1*a ; k2*b\n");
  REQUIRE(res.ok());
  auto sr = search_translation(res.model->net, res.model->kin,
                               all_reactions(res.model->net));
  REQUIRE(sr.found);
  for (auto& s : sr.shifts)
    for (auto v : s) CHECK(v == 0);
}

TEST_CASE("search reports NotFound on a network with no deficiency-zero lift in budget") {
  // single irreversible reaction: no weakly reversible translation exists
  auto res = parse_network("R1: A -> B ; k*a\n");
  REQUIRE(res.ok());
  auto sr = search_translation(res.model->net, res.model->kin, {0});
  CHECK(!sr.found);
  CHECK(sr.candidates_tried > 0);
}

TEST_CASE("insulin N4: directive shifts give the six published kinetic complexes") {
  Model m = load_model("insulin.crn");
  std::vector<int> ids{16, 17, 18, 19, 20, 21};  // R17..R22
  std::vector<CoefVec> shifts;
  for (int id : ids) {
    auto it = m.translate_shifts.find(id);
    CoefVec s = it == m.translate_shifts.end() ? CoefVec(m.net.num_species(), 0) : it->second;
    s.resize(m.net.num_species(), 0);
    shifts.push_back(s);
  }
  GeneralizedNetwork g = translate(m.net, m.kin, ids, shifts);
  REQUIRE(g.vertices.size() == 6);
  std::set<std::string> kin_complexes;
  for (auto& v : g.vertices) kin_complexes.insert(complex_to_string(m.net, *v.ykin));
  std::set<std::string> expect{"X10 + X26", "X27", "X27 + X33", "X29", "X22 + X28", "X28"};
  CHECK(kin_complexes == expect);
  CHECK(weakly_reversible(g));
  CHECK(effective_deficiency(g) == 0);
  CHECK(kinetic_deficiency(g) == 0);
  CHECK(check_dynamic_equivalence(m.net, m.kin, g, 10, 99) < 1e-12);
}

TEST_CASE("dynamic equivalence holds for 200 random valid lifts") {
  std::mt19937_64 rng(0xABCD);
  int done = 0;
  while (done < 200) {
    // random small network
    int m = 2 + (int)(rng() % 3);
    int r = 1 + (int)(rng() % 4);
    std::ostringstream os;
    os << "species";
    for (int i = 0; i < m; ++i) os << " S" << i + 1;
    os << "\n";
    int made = 0, attempts = 0;
    while (made < r && ++attempts < 100) {
      CoefVec src(m, 0), dst(m, 0);
      for (int i = 0; i < m; ++i) {
        if (rng() % 3 == 0) src[i] = 1;
        if (rng() % 3 == 0) dst[i] = 1;
      }
      if (src == dst) continue;
      auto side = [&](const CoefVec& c) {
        std::string out;
        bool first = true;
        for (int i = 0; i < m; ++i) {
          if (!c[i]) continue;
          if (!first) out += " + ";
          first = false;
          out += "S" + std::to_string(i + 1);
        }
        return out.empty() ? std::string("0") : out;
      };
      os << "R" << ++made << ": " << side(src) << " -> " << side(dst) << " ; q" << made << "\n";
    }
    auto res = parse_network(os.str());
    if (!res.ok()) continue;
    Model& model = *res.model;
    // random non-negative shift per reaction keeps complexes valid
    std::vector<int> ids = all_reactions(model.net);
    std::vector<CoefVec> shifts;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      CoefVec s(m, 0);
      for (int i = 0; i < m; ++i) s[i] = (long long)(rng() % 2);
      shifts.push_back(s);
    }
    GeneralizedNetwork g = translate(model.net, model.kin, ids, shifts);
    CHECK(check_dynamic_equivalence(model.net, model.kin, g, 3, (unsigned)done) < 1e-12);
    ++done;
  }
}
