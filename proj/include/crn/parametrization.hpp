#pragma once

#include "crn/treeconst.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace crn {

struct ParametrizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Closed-form positive steady-state parametrization of a reaction subset.
// Dependent species carry expressions over rate constants, free species
// concentrations and any remaining sigma symbols; free species and leftover
// sigmas are the parameters.
struct Parametrization {
  std::vector<int> reaction_ids;
  std::vector<int> support;              // species involved
  std::map<int, ExprPtr> exprs;          // dependent species -> expression
  std::vector<int> free_species;
  std::vector<SymId> free_symbols;       // sigma symbols that stay free
  std::map<SymId, ExprPtr> sigma_defs;   // resolved sigmas (in species/rate syms)
  std::string method;                    // "translation" | "elimination" | ...
  std::vector<std::string> notes;
};

// Theorem-form artifacts kept alongside the pipeline parametrization.
struct ParamSystem {
  std::vector<ForestEdge> forest;
  std::vector<RatFunc> kappas;
  TreeConstantTable tree;
  RatMat M;  // |F| x m kinetic differences
  RatMat H;  // m x |F|, M H M = M
  RatMat B;  // m x (m - rank), im B = ker M
  std::vector<SymId> tau_syms;
  std::map<int, ExprPtr> theorem_exprs;  // kappa^H . tau^B per species (support only)
};

struct ParametrizeOptions {
  // species indices to keep free when possible (directives, earlier parts)
  std::vector<int> prefer_free;
  // species indices that are already claimed as dependent elsewhere; avoided
  // as pivots when rank allows
  std::vector<int> avoid_pivot;
  std::optional<std::vector<ForestEdge>> forest_override;
  std::optional<RatMat> h_override;  // used for the theorem chart only
};

struct ParametrizeResult {
  Parametrization param;    // merge-ready chart
  ParamSystem system;       // theorem-form artifacts
};

// Requires: weakly reversible GCRN, all vertices sources, effective and
// kinetic deficiencies zero. Throws ParametrizationError naming the failed
// precondition otherwise.
ParametrizeResult parametrize(const GeneralizedNetwork& g, const KineticAssignment& kin,
                              const ParametrizeOptions& opts = {});

// Residual check report; deterministic for a fixed seed.
struct ResidualReport {
  double max_residual = 0.0;
  double median_residual = 0.0;
  int samples = 0;
  unsigned seed = 0;
  double tol = 0.0;
  bool pass = false;
  int worst_sample = -1;
  std::string failure;  // non-empty on hard failures (non-positive value, cycle)
};

// Draws rate constants and free parameters log-uniformly from [0.1, 10],
// evaluates the parametrization (entries may reference one another; they are
// resolved in dependency order), substitutes into the subnetwork RHS and
// reports max_j |f_j| / (1 + sum_j |terms|). Named constants default to
// alpha=beta=2, kbar=ktilde=1 unless overridden.
ResidualReport validate_parametrization(const Network& net, const KineticAssignment& kin,
                                        const std::vector<int>& reaction_ids,
                                        const std::map<int, ExprPtr>& exprs, int n_samples,
                                        double tol, unsigned seed,
                                        const std::map<std::string, double>& const_overrides = {});

// Named-constant defaults applied by the harness.
std::map<SymId, double> named_constant_bindings(const SymbolTable& tab,
                                                const std::map<std::string, double>& overrides);

} // namespace crn
