#include "crn/kinetics.hpp"

#include <cmath>

namespace crn {

std::string to_string(KineticsTag t) {
  switch (t) {
    case KineticsTag::MassAction: return "mass-action";
    case KineticsTag::PowerLaw: return "power-law";
    case KineticsTag::Rational: return "rational";
    case KineticsTag::Other: return "other";
  }
  return "?";
}

namespace {

// Power-product view allowing symbolic exponents on symbol bases:
// coeff * prod sym^(literal or symbol). Nullopt if the tree has sums or
// nested symbolic powers.
struct PowerProduct {
  Rat coeff{1};
  // (symbol, literal exponent) and (symbol, exponent symbol)
  std::map<SymId, Rat> lit;
  std::vector<std::pair<SymId, SymId>> symbolic;
};

bool collect_pp(const ExprPtr& e, const Rat& mult, PowerProduct& out) {
  switch (e->kind) {
    case ExprKind::Num: {
      if (mult == 1) {
        out.coeff *= e->value;
        return true;
      }
      if (!is_integer(mult)) return false;
      long long k = numerator(mult).convert_to<long long>();
      if (e->value == 0) return false;
      Rat acc(1);
      Rat b = e->value;
      long long n = k < 0 ? -k : k;
      for (long long i = 0; i < n; ++i) acc *= b;
      if (k < 0) acc = Rat(1) / acc;
      out.coeff *= acc;
      return true;
    }
    case ExprKind::Sym:
      out.lit[e->sym] += mult;
      return true;
    case ExprKind::Mul:
      for (auto& a : e->args)
        if (!collect_pp(a, mult, out)) return false;
      return true;
    case ExprKind::Pow: {
      if (e->expo->is_num()) return collect_pp(e->base, mult * e->expo->value, out);
      if (e->expo->is_sym() && e->base->is_sym() && mult == 1) {
        out.symbolic.push_back({e->base->sym, e->expo->sym});
        return true;
      }
      return false;
    }
    case ExprKind::Add:
      return false;
  }
  return false;
}

// Sums/products/powers with non-negative literal or symbolic exponents.
bool generalized_polynomial(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Num:
    case ExprKind::Sym:
      return true;
    case ExprKind::Add:
    case ExprKind::Mul:
      for (auto& a : e->args)
        if (!generalized_polynomial(a)) return false;
      return true;
    case ExprKind::Pow: {
      if (e->expo->is_num()) return e->expo->value >= 0 && generalized_polynomial(e->base);
      return e->expo->is_sym() && generalized_polynomial(e->base);
    }
  }
  return false;
}

// Splits top-level multiplicative factors into numerator parts and
// denominator bases (factors carrying a negative literal exponent).
void split_quotient(const ExprPtr& e, std::vector<ExprPtr>& numf, std::vector<ExprPtr>& denf) {
  if (e->kind == ExprKind::Mul) {
    for (auto& a : e->args) split_quotient(a, numf, denf);
    return;
  }
  if (e->kind == ExprKind::Pow && e->expo->is_num() && e->expo->value < 0) {
    Rat flipped = -e->expo->value;
    denf.push_back(flipped == 1 ? e->base : Expr::pow(e->base, flipped));
    return;
  }
  numf.push_back(e);
}

} // namespace

KineticsTag classify_rate(const ExprPtr& expr, const Complexe& source, const Network& net) {
  PowerProduct pp;
  if (collect_pp(expr, Rat(1), pp)) {
    if (pp.coeff <= 0) return KineticsTag::Other;
    if (pp.symbolic.empty()) {
      bool mass_action = true;
      CoefVec want = source.coeffs;
      for (auto& [sym, exp] : pp.lit) {
        if (net.symbols->kind(sym) != SymKind::Concentration) continue;
        // locate the species with this concentration symbol
        int sp = -1;
        for (std::size_t i = 0; i < net.species.size(); ++i)
          if (net.species[i].conc_sym == sym) sp = (int)i;
        if (sp < 0) {
          mass_action = false;
          break;
        }
        if (!is_integer(exp) || Rat(want[sp]) != exp) mass_action = false;
        want[sp] = 0;
      }
      if (mass_action)
        for (auto v : want)
          if (v != 0) mass_action = false;
      if (mass_action) return KineticsTag::MassAction;
    }
    return KineticsTag::PowerLaw;
  }
  std::vector<ExprPtr> numf, denf;
  split_quotient(expr, numf, denf);
  if (!denf.empty()) {
    bool ok = true;
    for (auto& f : numf) ok = ok && generalized_polynomial(f);
    for (auto& f : denf) ok = ok && generalized_polynomial(f);
    if (ok) return KineticsTag::Rational;
  }
  return KineticsTag::Other;
}

std::vector<ExprPtr> formation_rate(const Network& net, const KineticAssignment& kin) {
  std::vector<int> all(net.reactions.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = (int)i;
  return formation_rate(net, kin, all);
}

std::vector<ExprPtr> formation_rate(const Network& net, const KineticAssignment& kin,
                                    const std::vector<int>& ids) {
  std::vector<std::vector<ExprPtr>> acc(net.num_species());
  for (int id : ids) {
    CoefVec v = reaction_vector(net, net.reactions.at(id));
    const auto& rate = kin.rates.at(id).expr;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] == 0) continue;
      acc[j].push_back(Expr::mul({Expr::num(Rat(v[j])), rate}));
    }
  }
  std::vector<ExprPtr> out;
  out.reserve(acc.size());
  for (auto& terms : acc) out.push_back(Expr::add(std::move(terms)));
  return out;
}

namespace {

double eval_rate(const Network& net, const KineticAssignment& kin, int id,
                 const std::vector<double>& env) {
  try {
    return kin.rates.at(id).expr->eval(env);
  } catch (const UnboundSymbolError& u) {
    throw ConfigurationError("unbound symbol '" + net.symbols->name(u.sym) +
                             "' in rate of reaction " + net.reactions.at(id).label);
  } catch (const EvalError& e) {
    throw EvalError(std::string(e.what()) + " in rate of reaction " + net.reactions.at(id).label);
  }
}

} // namespace

std::vector<double> evaluate_rhs(const Network& net, const KineticAssignment& kin,
                                 const std::vector<double>& env) {
  std::vector<int> all(net.reactions.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = (int)i;
  return evaluate_rhs(net, kin, all, env);
}

std::vector<double> evaluate_rhs(const Network& net, const KineticAssignment& kin,
                                 const std::vector<int>& ids, const std::vector<double>& env) {
  std::vector<double> f(net.num_species(), 0.0);
  for (int id : ids) {
    double rate = eval_rate(net, kin, id, env);
    CoefVec v = reaction_vector(net, net.reactions.at(id));
    for (std::size_t j = 0; j < v.size(); ++j)
      if (v[j] != 0) f[j] += rate * (double)v[j];
  }
  return f;
}

std::vector<double> rhs_term_scale(const Network& net, const KineticAssignment& kin,
                                   const std::vector<int>& ids, const std::vector<double>& env) {
  std::vector<double> s(net.num_species(), 0.0);
  for (int id : ids) {
    double rate = eval_rate(net, kin, id, env);
    CoefVec v = reaction_vector(net, net.reactions.at(id));
    for (std::size_t j = 0; j < v.size(); ++j)
      if (v[j] != 0) s[j] += std::fabs(rate * (double)v[j]);
  }
  return s;
}

} // namespace crn
