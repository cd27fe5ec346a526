#pragma once

#include "crn/expr.hpp"
#include "crn/network.hpp"

#include <map>
#include <string>
#include <vector>

namespace crn {

enum class KineticsTag : std::uint8_t { MassAction, PowerLaw, Rational, Other };

std::string to_string(KineticsTag t);

struct RateLaw {
  ExprPtr expr;
  KineticsTag tag = KineticsTag::Other;
};

// One rate law per reaction, in reaction order.
struct KineticAssignment {
  std::vector<RateLaw> rates;

  const RateLaw& for_reaction(std::size_t i) const { return rates.at(i); }
  bool all_mass_action(const std::vector<int>& reaction_ids) const {
    for (int id : reaction_ids)
      if (rates.at(id).tag != KineticsTag::MassAction) return false;
    return true;
  }
};

// Classification is purely syntactic. MassAction requires a single monomial
// whose concentration exponents equal the source complex exactly.
KineticsTag classify_rate(const ExprPtr& expr, const Complexe& source, const Network& net);

// Symbolic species formation rate f(x), one coordinate per species.
std::vector<ExprPtr> formation_rate(const Network& net, const KineticAssignment& kin);

// Same restricted to a reaction subset (the subnetwork's formation rate).
std::vector<ExprPtr> formation_rate(const Network& net, const KineticAssignment& kin,
                                    const std::vector<int>& reaction_ids);

struct ConfigurationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numeric f(x) at a symbol environment (indexed by SymId, NaN = unbound).
// Throws ConfigurationError on unbound symbols, EvalError naming the reaction
// on a vanishing denominator.
std::vector<double> evaluate_rhs(const Network& net, const KineticAssignment& kin,
                                 const std::vector<double>& env);
std::vector<double> evaluate_rhs(const Network& net, const KineticAssignment& kin,
                                 const std::vector<int>& reaction_ids,
                                 const std::vector<double>& env);

// Per-species sum of absolute term magnitudes |rate_i * stoich| used as the
// relative scale in residual checks.
std::vector<double> rhs_term_scale(const Network& net, const KineticAssignment& kin,
                                   const std::vector<int>& reaction_ids,
                                   const std::vector<double>& env);

} // namespace crn
