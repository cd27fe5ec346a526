#pragma once

#include "crn/decomposition.hpp"
#include "crn/parametrization.hpp"

#include <string>
#include <vector>

namespace crn {

// Minimal labeled digraph for the tree-enumeration oracle. Kept separate from
// the production Matrix-Tree path on purpose.
struct DiGraph {
  struct Edge {
    int tail = 0;
    int head = 0;
    SymId label = kNoSym;
  };
  int n = 0;
  std::vector<Edge> edges;
};

struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All spanning trees directed toward the root, as edge-index sets, by
// exhaustive out-edge choice. n <= 8.
std::vector<std::vector<int>> enumerate_rooted_trees(const DiGraph& g, int root);

// Sum over those trees of the products of edge labels.
Poly tree_constant_by_enumeration(const DiGraph& g, int root);

DiGraph digraph_of(const GeneralizedNetwork& g);

// Finest independent decomposition by exhaustive partition search; r <= 10.
Decomposition exhaustive_finest(const Network& net);

struct HarnessReport {
  ResidualReport report;
  std::string rendered;  // byte-stable for a fixed seed
};

HarnessReport residual_harness(const Network& net, const KineticAssignment& kin,
                               const std::vector<int>& reaction_ids,
                               const std::map<int, ExprPtr>& exprs, unsigned seed, int samples,
                               double tol,
                               const std::map<std::string, double>& const_overrides = {});

} // namespace crn
