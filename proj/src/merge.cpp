#include "crn/merge.hpp"

#include <algorithm>
#include <cmath>

namespace crn {

namespace {

// Solvable symbols during a merge: free species concentrations and free
// sigma/tau parameters. Rate constants and named constants are never solved.
bool solvable_kind(SymKind k) {
  return k == SymKind::Concentration || k == SymKind::Sigma || k == SymKind::Tau;
}

} // namespace

MergeResult merge_parametrizations(const Network& net,
                                   const std::vector<Parametrization>& parts) {
  MergeResult out;
  const SymbolTable& tab = *net.symbols;

  std::map<int, ExprPtr> exprs;
  std::set<int> in_support;
  std::set<SymId> sigma_free;
  for (auto& p : parts) {
    for (int s : p.support) in_support.insert(s);
    for (int s : p.free_species) in_support.insert(s);
    for (SymId s : p.free_symbols) sigma_free.insert(s);
    for (auto& [sym, def] : p.sigma_defs) out.merged.sigma_defs[sym] = def;
  }

  std::set<SymId> pinned;  // symbols already given an expression
  auto conc_species = [&](SymId s) -> int {
    for (std::size_t i = 0; i < net.species.size(); ++i)
      if (net.species[i].conc_sym == s) return (int)i;
    return -1;
  };

  std::vector<MergeConstraint> pending;

  std::function<void(int, ExprPtr)> assign;
  std::function<void(SymId, ExprPtr)> pin_symbol;

  auto substitute_everywhere = [&](SymId sym, const ExprPtr& value) {
    std::unordered_map<SymId, ExprPtr> map{{sym, value}};
    for (auto& [sp, e] : exprs) e = substitute(e, map);
    for (auto& c : pending) {
      c.lhs = substitute(c.lhs, map);
      c.rhs = substitute(c.rhs, map);
    }
    for (auto& [s, d] : out.merged.sigma_defs) d = substitute(d, map);
  };

  pin_symbol = [&](SymId sym, ExprPtr value) {
    pinned.insert(sym);
    int sp = conc_species(sym);
    substitute_everywhere(sym, value);
    if (sp >= 0) {
      exprs[sp] = value;
    } else {
      sigma_free.erase(sym);
      out.merged.sigma_defs[sym] = value;
    }
  };

  assign = [&](int sp, ExprPtr e) {
    auto it = exprs.find(sp);
    if (it == exprs.end()) {
      exprs[sp] = e;
      pinned.insert(net.species[sp].conc_sym);
      return;
    }
    MergeConstraint c;
    c.species = sp;
    c.lhs = it->second;
    c.rhs = e;
    pending.push_back(c);
  };

  for (auto& p : parts)
    for (auto& [sp, e] : p.exprs) assign(sp, e);

  // fixpoint over pending constraints
  bool progress = true;
  while (progress && !out.contradiction) {
    progress = false;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      MergeConstraint c = pending[i];
      if (c.resolution != MergeConstraint::Resolution::Residual) continue;
      auto try_side = [&](const ExprPtr& side, const ExprPtr& other) -> bool {
        auto mv = as_monomial(side);
        if (!mv) return false;
        SymId cand = kNoSym;
        Rat power;
        for (auto& [sym, q] : mv->powers) {
          if (pinned.count(sym) || !solvable_kind(tab.kind(sym))) continue;
          if (cand != kNoSym) return false;  // more than one unpinned symbol
          cand = sym;
          power = q;
        }
        if (cand == kNoSym) return false;
        // side = rest * cand^power = other  ->  cand = (other / rest)^(1/power)
        std::vector<ExprPtr> restf{Expr::num(mv->coeff)};
        for (auto& [sym, q] : mv->powers)
          if (sym != cand) restf.push_back(Expr::pow(Expr::symbol(sym), q));
        ExprPtr value =
            Expr::pow(Expr::div(other, Expr::mul(std::move(restf))), Rat(1) / power);
        pending[i].resolution = MergeConstraint::Resolution::SolvedSymbol;
        pending[i].solved_symbol = cand;
        pending[i].solved_value = value;
        pin_symbol(cand, value);
        return true;
      };
      if (try_side(c.lhs, c.rhs) || try_side(c.rhs, c.lhs)) {
        progress = true;
        continue;
      }
      // constant vs constant: decide now
      if (c.lhs->symbols().empty() && c.rhs->symbols().empty()) {
        double a = c.lhs->eval({}), b = c.rhs->eval({});
        if (std::fabs(a - b) <= 1e-12 * (1 + std::fabs(a))) {
          pending[i].resolution = MergeConstraint::Resolution::Consistent;
        } else {
          pending[i].resolution = MergeConstraint::Resolution::Contradiction;
          out.contradiction = true;
          out.contradiction_message = "contradictory expressions for species " +
                                      net.species[c.species].name +
                                      ": no positive steady state";
        }
        progress = true;
      }
    }
  }

  // fully substitute dependent species into one another (topological)
  bool changed = true;
  int guard = 0;
  while (changed && ++guard < 64) {
    changed = false;
    std::unordered_map<SymId, ExprPtr> map;
    for (auto& [sp, e] : exprs) map[net.species[sp].conc_sym] = e;
    for (auto& [sp, e] : exprs) {
      ExprPtr next = e;
      for (SymId s : e->symbols()) {
        int o = conc_species(s);
        if (o >= 0 && o != sp && exprs.count(o)) {
          std::unordered_map<SymId, ExprPtr> one{{s, exprs.at(o)}};
          next = substitute(next, one);
          changed = true;
        }
      }
      e = next;
    }
  }
  if (guard >= 64) {
    out.contradiction = true;
    out.contradiction_message = "cyclic dependency between merged expressions";
  }

  out.merged.exprs = exprs;
  out.merged.method = "merge";
  for (std::size_t i = 0; i < net.num_species(); ++i) {
    out.merged.support.push_back((int)i);
    if (!exprs.count((int)i)) out.merged.free_species.push_back((int)i);
  }
  for (SymId s : sigma_free) out.merged.free_symbols.push_back(s);
  out.constraints = pending;
  return out;
}

std::map<int, bool> acr_report(const Network& net, const Parametrization& merged) {
  std::map<int, bool> out;
  std::set<SymId> free_param_syms;
  for (int f : merged.free_species) free_param_syms.insert(net.species[f].conc_sym);
  for (SymId s : merged.free_symbols) free_param_syms.insert(s);
  for (std::size_t i = 0; i < net.num_species(); ++i) {
    auto it = merged.exprs.find((int)i);
    if (it == merged.exprs.end()) {
      out[(int)i] = false;  // the species is itself a free parameter
      continue;
    }
    bool acr = true;
    for (SymId s : it->second->symbols())
      if (free_param_syms.count(s)) acr = false;
    out[(int)i] = acr;
  }
  return out;
}

Parametrization compose_exclusive(const Network& net, const Parametrization& a,
                                  const Parametrization& b) {
  std::set<int> sa(a.support.begin(), a.support.end());
  for (int s : b.support)
    if (sa.count(s))
      throw MergeError("subnetworks share species " + net.species[s].name +
                       "; mutual exclusivity violated");
  Parametrization out;
  out.method = "compose-exclusive";
  out.reaction_ids = a.reaction_ids;
  out.reaction_ids.insert(out.reaction_ids.end(), b.reaction_ids.begin(), b.reaction_ids.end());
  out.support = a.support;
  out.support.insert(out.support.end(), b.support.begin(), b.support.end());
  out.exprs = a.exprs;
  out.exprs.insert(b.exprs.begin(), b.exprs.end());
  out.free_species = a.free_species;
  out.free_species.insert(out.free_species.end(), b.free_species.begin(), b.free_species.end());
  out.free_symbols = a.free_symbols;
  out.free_symbols.insert(out.free_symbols.end(), b.free_symbols.begin(), b.free_symbols.end());
  out.sigma_defs = a.sigma_defs;
  out.sigma_defs.insert(b.sigma_defs.begin(), b.sigma_defs.end());
  std::sort(out.support.begin(), out.support.end());
  std::sort(out.free_species.begin(), out.free_species.end());
  return out;
}

} // namespace crn
