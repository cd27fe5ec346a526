#pragma once

#include "crn/kinetics.hpp"
#include "crn/network.hpp"

#include <vector>

namespace crn {

struct Decomposition {
  // Disjoint reaction-index sets covering all reactions, each sorted, parts
  // ordered by smallest contained reaction index.
  std::vector<std::vector<int>> parts;
  std::vector<StructuralSummary> summaries;
  bool independent = false;
};

// rank(S) == sum of part ranks, all exact.
bool is_independent(const Network& net, const std::vector<std::vector<int>>& partition);

// The unique finest independent decomposition: pick a maximal independent set
// of reaction vectors by exact pivoting in reaction order, express every
// reaction over that basis, connect basis elements that co-occur in a
// representation, and read parts off the connected components.
Decomposition finest_independent_decomposition(const Network& net);

struct PartKinetics {
  std::vector<int> reactions;
  bool pure_mass_action = false;
};

std::vector<PartKinetics> restrict_kinetics(const KineticAssignment& kin,
                                            const Decomposition& dec);

struct MassActionUnion {
  std::vector<int> pure_parts;    // indices into dec.parts
  std::vector<int> mixed_parts;
  std::vector<int> union_pure_reactions;
  std::vector<int> union_mixed_reactions;
  bool mutually_exclusive = false;
};

// N^M = union of pure mass-action parts, N^C = the rest; mutual exclusivity
// of the two species sets (complex occurrence plus rate-law occurrence).
MassActionUnion mass_action_union(const Network& net, const KineticAssignment& kin,
                                  const Decomposition& dec);

// Species occurring in the reactions' rate expressions.
std::set<int> rate_law_species(const Network& net, const KineticAssignment& kin,
                               const std::vector<int>& reaction_ids);

} // namespace crn
