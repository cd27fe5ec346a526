#pragma once

#include "crn/polynomial.hpp"
#include "crn/ratfunc.hpp"
#include "crn/translation.hpp"

#include <vector>

namespace crn {

// Determinant by fraction-free Bareiss elimination; divisions are exact in
// the polynomial ring.
Poly poly_det(std::vector<std::vector<Poly>> a);

struct TreeConstantTable {
  std::vector<Poly> K;              // per vertex; 1 for isolated vertices
  std::vector<int> component;       // weak component index per vertex
};

// K_i = sum over spanning trees of the kinetic-order graph directed toward
// vertex i of the products of edge labels, via the Laplacian cofactor.
// Vertices whose component is not strongly connected get K_i = 0.
TreeConstantTable tree_constants(const GeneralizedNetwork& g);

// Forest edges are vertex pairs within one weak component; graph_edge points
// back at the traversed edge, or -1 for externally supplied pairs (the
// tree-constant relations hold for any pair).
struct ForestEdge {
  int tail = -1;
  int head = -1;
  int graph_edge = -1;
};

// Deterministic spanning forest: per component, BFS from the lowest vertex
// index, edges traversable in either direction, true orientation recorded.
std::vector<ForestEdge> spanning_forest(const GeneralizedNetwork& g);

struct KappaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// kappa_{i->i'} = K_{i'} / K_i. Throws KappaError on a zero tree constant
// (component not weakly reversible).
RatFunc kappa_of(const TreeConstantTable& K, const ForestEdge& e);
std::vector<RatFunc> kappa(const TreeConstantTable& K, const std::vector<ForestEdge>& forest);

// Rows = kinetic differences ykin(head) - ykin(tail) per forest edge, columns
// in species order (all m species).
RatMat kinetic_difference_matrix(const GeneralizedNetwork& g,
                                 const std::vector<ForestEdge>& forest);

} // namespace crn
