#pragma once

#include "crn/dsl.hpp"
#include "crn/kinetics.hpp"
#include "crn/network.hpp"

#include <optional>
#include <string>
#include <vector>

namespace crn {

struct GVertex {
  CoefVec y;                      // stoichiometric complex
  std::optional<CoefVec> ykin;    // kinetic complex (source vertices only)
};

struct GEdge {
  int tail = -1;
  int head = -1;
  bool phantom = false;
  SymId label = kNoSym;   // rate symbol for effective edges, sigma for phantom
  int reaction = -1;      // originating reaction (effective edges)
};

// A translated network: vertices carry stoichiometric complexes, source
// vertices carry kinetic complexes, effective edges preserve the original
// reaction vectors, phantom edges connect vertices sharing a stoichiometric
// complex. V*-directed by construction: effective edges enter class
// representatives, phantom edges leave them.
struct GeneralizedNetwork {
  const Network* net = nullptr;   // parent network (species list, symbols)
  std::vector<int> reaction_ids;  // the translated reaction subset
  std::vector<CoefVec> shifts;    // per reaction (parallel to reaction_ids)
  std::vector<GVertex> vertices;
  std::vector<GEdge> edges;
  std::vector<std::vector<int>> y_classes;  // vertex ids per stoichiometric class
  std::vector<int> representative;          // per class, the V* member
  std::vector<SymId> sigma_syms;            // phantom edge labels in edge order
  // definitions for fresh edge-rate symbols (rate / x^source) when the rate
  // law's constant part is not a single bare symbol
  std::map<SymId, ExprPtr> label_defs;

  bool all_sources() const {
    for (auto& v : vertices)
      if (!v.ykin) return false;
    return true;
  }
  int vertex_class(int v) const;
  std::string describe(const SymbolTable& tab) const;
};

struct TranslationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Build the GCRN for a reaction subset under per-reaction shifts. The rate
// symbol of an effective edge is a fresh symbol k_<label> unless the rate law
// is a mass-action monomial, in which case its own constant symbol is reused.
GeneralizedNetwork translate(const Network& net, const KineticAssignment& kin,
                             const std::vector<int>& reaction_ids,
                             const std::vector<CoefVec>& shifts);

// Deficiency of the stoichiometric CRN: distinct stoichiometric complexes,
// effective edges only.
StructuralSummary effective_structure(const GeneralizedNetwork& g);
long long effective_deficiency(const GeneralizedNetwork& g);

// Deficiency of the kinetic-order CRN: all vertices, all edges, rank of the
// kinetic differences. Requires every vertex to be a source.
StructuralSummary kinetic_structure(const GeneralizedNetwork& g);
long long kinetic_deficiency(const GeneralizedNetwork& g);

// Weak reversibility of the full vertex graph.
bool weakly_reversible(const GeneralizedNetwork& g);

// Max |f_original - f_translated| over seeded samples; exact structural
// verification (preserved reaction vectors) happens first and makes the
// symbolic difference identically zero.
double check_dynamic_equivalence(const Network& net, const KineticAssignment& kin,
                                 const GeneralizedNetwork& g, int samples, unsigned seed);

struct TranslationSearchResult {
  bool found = false;
  std::vector<CoefVec> shifts;  // per reaction in reaction_ids order
  GeneralizedNetwork gcrn;
  long long candidates_tried = 0;
};

// Searches per-linkage-class shift candidates (complex differences and single
// species, coordinate sum <= budget) for a translation that is weakly
// reversible with both deficiencies zero. Deterministic iteration order.
TranslationSearchResult search_translation(const Network& net, const KineticAssignment& kin,
                                           const std::vector<int>& reaction_ids,
                                           long long budget = 2,
                                           long long max_combinations = 200000);

} // namespace crn
