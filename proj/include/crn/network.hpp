#pragma once

#include "crn/matrix.hpp"
#include "crn/symtab.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace crn {

struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Stoichiometric coefficient vector over the species list; non-negative for
// complexes, signed when used as a shift or reaction vector.
using CoefVec = std::vector<long long>;

struct Species {
  std::string name;   // as written in the file, e.g. "X28", "AE"
  SymId conc_sym;     // concentration symbol, e.g. x28, ae
};

struct Complexe {
  CoefVec coeffs;
  bool is_zero() const {
    for (auto c : coeffs)
      if (c) return false;
    return true;
  }
  bool operator==(const Complexe& o) const { return coeffs == o.coeffs; }
};

struct Reaction {
  std::string label;
  int source = -1;   // complex index
  int product = -1;  // complex index
};

// The (S, C, R) triple. Complexes are deduplicated by coefficient vector;
// reaction order is canonical and preserved everywhere.
class Network {
public:
  std::vector<Species> species;
  std::vector<Complexe> complexes;
  std::vector<Reaction> reactions;
  std::shared_ptr<SymbolTable> symbols;

  std::size_t num_species() const { return species.size(); }
  std::size_t num_complexes() const { return complexes.size(); }
  std::size_t num_reactions() const { return reactions.size(); }

  int complex_index(const CoefVec& c) const;
  int add_complex(const CoefVec& c);  // dedups
  int species_index(const std::string& name) const;

  void validate() const;  // invariants of the definition
};

CoefVec reaction_vector(const Network& net, const Reaction& r);

// m x r integer matrix, column i = product - source of reaction i.
RatMat stoichiometric_matrix(const Network& net);
// Stoichiometric matrix restricted to a reaction subset (columns in subset order).
RatMat stoichiometric_matrix(const Network& net, const std::vector<int>& reaction_ids);

// Partitions of complex indices.
std::vector<std::vector<int>> linkage_classes(const Network& net);
std::vector<std::vector<int>> strong_linkage_classes(const Network& net);
bool is_weakly_reversible(const Network& net);

std::size_t exact_rank(const RatMat& m);

struct StructuralSummary {
  std::size_t m = 0;      // species
  std::size_t r = 0;      // reactions
  std::size_t n = 0;      // complexes
  std::size_t ell = 0;    // linkage classes
  std::size_t s = 0;      // rank of the stoichiometric matrix
  long long delta = 0;    // n - ell - s
  bool weakly_reversible = false;
};

StructuralSummary deficiency(const Network& net);

// Summary of the subnetwork induced by a reaction subset (complexes and
// linkage classes counted within the subset; species set unchanged).
StructuralSummary deficiency(const Network& net, const std::vector<int>& reaction_ids);

// Species indices that occur with nonzero coefficient in some complex used by
// the given reactions.
std::set<int> occurring_species(const Network& net, const std::vector<int>& reaction_ids);

std::string complex_to_string(const Network& net, const CoefVec& c);

} // namespace crn
