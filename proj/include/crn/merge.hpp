#pragma once

#include "crn/parametrization.hpp"

#include <map>
#include <string>
#include <vector>

namespace crn {

struct MergeConstraint {
  int species = -1;
  ExprPtr lhs, rhs;
  enum class Resolution { SolvedSymbol, Residual, Contradiction, Consistent } resolution =
      Resolution::Residual;
  SymId solved_symbol = kNoSym;
  ExprPtr solved_value;
};

struct MergeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MergeResult {
  Parametrization merged;
  std::vector<MergeConstraint> constraints;
  bool contradiction = false;
  std::string contradiction_message;
};

// Combines per-subnetwork parametrizations. Species with two expressions are
// equated; when one side is a monomial in a single unpinned free symbol, that
// symbol is solved for and substituted globally, to a fixpoint. Whatever
// cannot be resolved that way stays as a residual constraint.
MergeResult merge_parametrizations(const Network& net,
                                   const std::vector<Parametrization>& parts);

// ACR iff the (fully substituted) expression contains no free parameter.
// Free species trivially depend on themselves and are never ACR.
std::map<int, bool> acr_report(const Network& net, const Parametrization& merged);

// Concatenation of parametrizations over disjoint species sets; throws
// MergeError when the supports overlap.
Parametrization compose_exclusive(const Network& net, const Parametrization& mass_action_part,
                                  const Parametrization& complement_part);

} // namespace crn
