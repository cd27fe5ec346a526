#include "crn/mixedsolver.hpp"

#include "crn/decomposition.hpp"
#include "crn/ratfunc.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace crn {

namespace {

// Distributes a sign flip into the numeric coefficient of each additive term
// so positivity certificates can look at literal signs.
ExprPtr negate_terms(const ExprPtr& e) {
  std::vector<ExprPtr> out;
  for (auto& t : additive_terms(e)) out.push_back(Expr::neg(t));
  return Expr::add(std::move(out));
}

} // namespace

std::variant<Parametrization, Unsolvable> solve_by_elimination(
    const Network& net, const KineticAssignment& kin, const std::vector<int>& reaction_ids,
    const std::vector<int>& preferred_free, const std::vector<int>& avoid_pivot) {
  // balance equations for an independent set of species rows
  RatMat S = stoichiometric_matrix(net, reaction_ids);
  std::vector<ExprPtr> f = formation_rate(net, kin, reaction_ids);
  std::vector<int> balance_rows;
  {
    RatMat acc(0, 0);
    std::vector<std::vector<Rat>> rows;
    std::size_t rank = 0;
    for (std::size_t j = 0; j < net.num_species(); ++j) {
      bool nonzero = false;
      for (std::size_t c = 0; c < S.cols(); ++c) nonzero |= S.at(j, c) != 0;
      if (!nonzero) continue;
      RatMat trial(rows.size() + 1, S.cols());
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t c = 0; c < S.cols(); ++c) trial.at(i, c) = rows[i][c];
      for (std::size_t c = 0; c < S.cols(); ++c) trial.at(rows.size(), c) = S.at(j, c);
      if (trial.rank() > rank) {
        rank = trial.rank();
        balance_rows.push_back((int)j);
        std::vector<Rat> r(S.cols());
        for (std::size_t c = 0; c < S.cols(); ++c) r[c] = S.at(j, c);
        rows.push_back(std::move(r));
      }
    }
  }

  std::set<int> support = occurring_species(net, reaction_ids);
  {
    auto extra = rate_law_species(net, kin, reaction_ids);
    support.insert(extra.begin(), extra.end());
  }
  // catalysts and rate-law-only species have a zero stoichiometric row: free
  std::set<int> free_set(preferred_free.begin(), preferred_free.end());
  for (int sp : support) {
    bool zero_row = true;
    for (std::size_t c = 0; c < S.cols(); ++c) zero_row &= S.at(sp, c) == 0;
    if (zero_row) free_set.insert(sp);
  }

  std::map<int, ExprPtr> equations;  // balance species -> current equation
  for (int b : balance_rows) equations[b] = f[b];
  std::map<int, ExprPtr> solved;
  std::set<int> avoid(avoid_pivot.begin(), avoid_pivot.end());
  EliminationPlan plan;

  auto try_solve = [&](int eq_row, int sp) -> bool {
    SymId conc = net.species[sp].conc_sym;
    auto ls = split_linear(equations[eq_row], conc);
    if (!ls) return false;
    ExprPtr x;
    ExprPtr negA = negate_terms(ls->coeff);
    ExprPtr negB = negate_terms(ls->rest);
    if (positivity_certified(negA) && positivity_certified(ls->rest)) {
      x = Expr::div(ls->rest, negA);
    } else if (positivity_certified(ls->coeff) && positivity_certified(negB)) {
      x = Expr::div(negB, ls->coeff);
    } else {
      return false;
    }
    solved[sp] = x;
    plan.steps.push_back({sp, eq_row});
    equations.erase(eq_row);
    std::unordered_map<SymId, ExprPtr> sub{{conc, x}};
    for (auto& [row, e] : equations) e = substitute(e, sub);
    for (auto& [s, e] : solved) e = substitute(e, sub);
    return true;
  };

  while (!equations.empty()) {
    bool progress = false;
    // deterministic scan: equations by balance species index, candidates by
    // species index, reluctant candidates last
    for (int reluctant = 0; reluctant < 2 && !progress; ++reluctant) {
      for (auto& [row, e] : equations) {
        for (int sp : support) {
          if (free_set.count(sp) || solved.count(sp)) continue;
          if (avoid.count(sp) != (std::size_t)reluctant) continue;
          if (!e->contains(net.species[sp].conc_sym)) continue;
          if (try_solve(row, sp)) {
            progress = true;
            break;
          }
        }
        if (progress) break;
      }
    }
    if (!progress) {
      std::ostringstream os;
      os << "no balance equation is linear with a positive coefficient in any remaining "
            "unknown (";
      for (auto& [row, e] : equations) os << net.species[row].name << " ";
      os << "left)";
      return Unsolvable{os.str()};
    }
  }

  Parametrization p;
  p.reaction_ids = reaction_ids;
  p.support.assign(support.begin(), support.end());
  p.method = "elimination";
  for (auto& [sp, e] : solved) p.exprs[sp] = e;
  for (int sp : support)
    if (!solved.count(sp)) p.free_species.push_back(sp);
  plan.free_vars = p.free_species;
  return p;
}

std::variant<ClearedSystem, Inapplicable> clear_denominators(const Network& net,
                                                             const KineticAssignment& kin) {
  std::vector<RatFunc> rates;
  for (std::size_t i = 0; i < net.num_reactions(); ++i) {
    auto rf = expr_to_ratfunc(kin.rates[i].expr);
    if (!rf)
      return Inapplicable{"rate of reaction " + net.reactions[i].label +
                          " is not a ratio of polynomials (symbolic exponent?)"};
    rates.push_back(std::move(*rf));
  }
  // single shared denominator
  Poly D(Rat(1));
  bool have = false;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (rates[i].is_polynomial()) continue;
    if (!have) {
      D = rates[i].den();
      have = true;
    } else if (!D.equal(rates[i].den())) {
      return Inapplicable{"rates carry different denominators"};
    }
  }
  auto is_conc = [&](SymId s) { return net.symbols->kind(s) == SymKind::Concentration; };
  if (have) {
    if (!D.all_coeffs_positive())
      return Inapplicable{"denominator has non-positive coefficients"};
    bool const_term = false;
    for (auto& t : D.terms()) {
      bool xfree = true;
      for (auto& [v, e] : t.m.factors) xfree &= !is_conc(v);
      const_term |= xfree;
    }
    if (!const_term)
      return Inapplicable{"denominator has no concentration-free term"};
  }

  // cleared RHS per species, as polynomials over everything
  const std::size_t m = net.num_species();
  std::vector<Poly> cleared(m);
  for (std::size_t r = 0; r < net.num_reactions(); ++r) {
    CoefVec v = reaction_vector(net, net.reactions[r]);
    Poly contrib = rates[r].is_polynomial() ? rates[r].num() * D : rates[r].num();
    if (rates[r].is_polynomial() && !rates[r].den().is_constant())
      return Inapplicable{"internal: unnormalized rate"};
    if (!rates[r].is_polynomial() && !D.equal(rates[r].den()))
      return Inapplicable{"rates carry different denominators"};
    for (std::size_t j = 0; j < m; ++j) {
      if (v[j] == 0) continue;
      cleared[j] = cleared[j] + contrib.scaled(Rat(v[j]));
    }
  }

  // group terms by concentration monomial
  struct MonoCmp {
    bool operator()(const Mono& a, const Mono& b) const { return mono_less(a, b); }
  };
  std::map<Mono, std::vector<Poly>, MonoCmp> groups;  // x-monomial -> per-species k-polys
  for (std::size_t j = 0; j < m; ++j) {
    for (auto& t : cleared[j].terms()) {
      Mono xpart, kpart;
      for (auto& [var, e] : t.m.factors)
        (is_conc(var) ? xpart : kpart).factors.push_back({var, e});
      auto it = groups.find(xpart);
      if (it == groups.end()) it = groups.emplace(xpart, std::vector<Poly>(m)).first;
      it->second[j] = it->second[j] + Poly::from_terms({{kpart, t.c}});
    }
  }

  ClearedSystem out;
  out.denominator = have ? D : Poly(Rat(1));
  out.derived.net.symbols = net.symbols;
  out.derived.net.species = net.species;

  auto conc_of_species = [&](std::size_t i) { return net.species[i].conc_sym; };
  auto mono_to_complex = [&](const Mono& x) {
    CoefVec c(m, 0);
    for (auto& [var, e] : x.factors) {
      for (std::size_t i = 0; i < m; ++i)
        if (conc_of_species(i) == var) c[i] = e;
    }
    return c;
  };

  int label_counter = 0;
  auto emit = [&](const CoefVec& src, const CoefVec& dst, const Poly& gamma) -> bool {
    for (auto c : dst)
      if (c < 0) return false;
    // rate constant symbol
    SymId ksym = kNoSym;
    if (gamma.term_count() == 1 && gamma.leading().c == 1 &&
        gamma.leading().m.factors.size() == 1 && gamma.leading().m.factors[0].second == 1) {
      ksym = gamma.leading().m.factors[0].first;
    } else {
      ksym = net.symbols->fresh("kp", SymKind::Parameter);
      out.substitutions.push_back({ksym, gamma.to_expr()});
    }
    Reaction rxn;
    rxn.label = "C" + std::to_string(++label_counter);
    rxn.source = out.derived.net.add_complex(src);
    rxn.product = out.derived.net.add_complex(dst);
    out.derived.net.reactions.push_back(rxn);
    std::vector<ExprPtr> fac{Expr::symbol(ksym)};
    for (std::size_t i = 0; i < m; ++i)
      if (src[i] != 0) fac.push_back(src[i] == 1 ? Expr::symbol(conc_of_species(i))
                                                 : Expr::pow(Expr::symbol(conc_of_species(i)),
                                                             Rat(src[i])));
    RateLaw rl;
    rl.expr = Expr::mul(std::move(fac));
    rl.tag = KineticsTag::MassAction;
    out.derived.kin.rates.push_back(rl);
    return true;
  };

  for (auto& [xmono, coeffs] : groups) {
    CoefVec src = mono_to_complex(xmono);
    // proportional-to-integer-vector factorization first
    int ref = -1;
    for (std::size_t j = 0; j < m; ++j)
      if (!coeffs[j].is_zero() && ref < 0) ref = (int)j;
    if (ref < 0) continue;
    std::vector<Rat> ratio(m, Rat(0));
    bool proportional = true;
    for (std::size_t j = 0; j < m; ++j) {
      if (coeffs[j].is_zero()) continue;
      Rat rj = coeffs[j].leading().c / coeffs[ref].leading().c;
      if (!coeffs[ref].scaled(rj).equal(coeffs[j])) {
        proportional = false;
        break;
      }
      ratio[j] = rj;
    }
    bool emitted = false;
    if (proportional) {
      BigInt L = 1, G = 0;
      for (std::size_t j = 0; j < m; ++j)
        if (ratio[j] != 0) L = lcm(L, denominator(ratio[j]));
      std::vector<BigInt> w(m, 0);
      for (std::size_t j = 0; j < m; ++j) {
        if (ratio[j] == 0) continue;
        w[j] = numerator(ratio[j]) * (L / denominator(ratio[j]));
        G = gcd(G, w[j]);
      }
      Poly gamma = coeffs[ref].scaled(Rat(G, L));
      CoefVec dst = src;
      bool overflow = false;
      for (std::size_t j = 0; j < m; ++j) {
        if (w[j] == 0) continue;
        BigInt step = w[j] / G;
        if (step < -1000 || step > 1000) overflow = true;
        else dst[j] += step.convert_to<long long>();
      }
      if (!gamma.all_coeffs_positive()) {
        gamma = -gamma;
        CoefVec dst2 = src;
        for (std::size_t j = 0; j < m; ++j) {
          if (w[j] == 0) continue;
          dst2[j] -= (w[j] / G).convert_to<long long>();
        }
        dst = dst2;
      }
      if (!overflow && gamma.all_coeffs_positive()) emitted = emit(src, dst, gamma);
    }
    if (!emitted) {
      // per-species splitting
      for (std::size_t j = 0; j < m; ++j) {
        if (coeffs[j].is_zero()) continue;
        Poly cj = coeffs[j];
        bool pos = cj.all_coeffs_positive();
        bool neg = (-cj).all_coeffs_positive();
        if (!pos && !neg)
          return Inapplicable{"mixed-sign coefficient for species " + net.species[j].name};
        CoefVec dst = src;
        dst[j] += pos ? 1 : -1;
        if (dst[j] < 0)
          return Inapplicable{"consumption monomial lacks the consumed species " +
                              net.species[j].name};
        if (!emit(src, dst, pos ? cj : -cj))
          return Inapplicable{"cannot emit reaction for species " + net.species[j].name};
      }
    }
  }
  out.derived.net.validate();
  return out;
}

} // namespace crn
