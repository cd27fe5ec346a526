#pragma once

#include "crn/dsl.hpp"
#include "crn/parametrization.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace crn {

struct EliminationStep {
  int species = -1;        // solved species
  int equation_row = -1;   // balance row used (species index of the balance)
};

struct EliminationPlan {
  std::vector<EliminationStep> steps;
  std::vector<int> free_vars;
};

struct Unsolvable {
  std::string reason;
};

// Direct steady-state solving for a (typically non-mass-action) subnetwork:
// successive linear isolation of dependent species whose coefficients carry a
// syntactic positivity certificate. No numeric root-finding.
std::variant<Parametrization, Unsolvable> solve_by_elimination(
    const Network& net, const KineticAssignment& kin, const std::vector<int>& reaction_ids,
    const std::vector<int>& preferred_free, const std::vector<int>& avoid_pivot);

struct ClearedSystem {
  Model derived;                      // mass-action network + kinetics
  Poly denominator;                   // shared positive denominator D
  // fresh composite rate constants with their definitions, e.g. kp1 = k2*k3
  std::vector<std::pair<SymId, ExprPtr>> substitutions;
};

struct Inapplicable {
  std::string reason;
};

// Multiplies the ODE right-hand side by the single shared positive
// denominator and reassembles the signed monomials into mass-action
// reactions. The positive steady-state sets of the two systems coincide.
std::variant<ClearedSystem, Inapplicable> clear_denominators(const Network& net,
                                                             const KineticAssignment& kin);

} // namespace crn
