#include "crn/parametrization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace crn {

namespace {

// x^d as a rational function over concentration symbols.
RatFunc conc_monomial(const Network& net, const CoefVec& d) {
  Poly num(Rat(1)), den(Rat(1));
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] > 0) num = num * Poly::var(net.species[i].conc_sym, (std::uint32_t)d[i]);
    if (d[i] < 0) den = den * Poly::var(net.species[i].conc_sym, (std::uint32_t)(-d[i]));
  }
  return RatFunc(std::move(num), std::move(den));
}

struct SigmaResolution {
  std::map<SymId, RatFunc> defs;      // solved sigma -> rational function
  std::vector<SymId> unsolved;
  std::set<SymId> def_conc_vars;      // concentration symbols used by the defs
};

SigmaResolution resolve_sigmas(const GeneralizedNetwork& g, const TreeConstantTable& tree) {
  SigmaResolution out;
  const Network& net = *g.net;
  struct Raw {
    SymId sigma;
    RatFunc expr;          // may still contain other sigma symbols
    std::set<SymId> deps;  // sigma symbols inside
  };
  std::vector<Raw> raws;
  for (auto& e : g.edges) {
    if (!e.phantom) continue;
    const CoefVec& yr = *g.vertices[e.tail].ykin;
    const CoefVec& yv = *g.vertices[e.head].ykin;
    CoefVec d(net.num_species());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = yv[i] - yr[i];
    const Poly& Kv = tree.K.at(e.head);
    const Poly& Kr = tree.K.at(e.tail);
    // Kv is multilinear in the phantom label and every in-tree toward the
    // head uses it, so Kv = sigma * U with U sigma-free; Kr never contains a
    // phantom label leaving its own root.
    if (Kv.degree_in(e.label) != 1 || !Kv.coeff_of(e.label, 0).is_zero() ||
        Kr.contains_var(e.label)) {
      out.unsolved.push_back(e.label);
      continue;
    }
    Poly U = Kv.coeff_of(e.label, 1);
    RatFunc rf = conc_monomial(net, d) * RatFunc(Kr, U);
    std::set<SymId> deps;
    rf.collect_vars(deps);
    std::set<SymId> sdeps;
    for (SymId s : deps)
      if (net.symbols->kind(s) == SymKind::Sigma) sdeps.insert(s);
    raws.push_back({e.label, std::move(rf), std::move(sdeps)});
  }
  // substitute resolved sigmas until a fixpoint
  bool progress = true;
  while (progress) {
    progress = false;
    for (auto& raw : raws) {
      if (out.defs.count(raw.sigma)) continue;
      bool ready = true;
      for (SymId s : raw.deps)
        if (!out.defs.count(s)) ready = false;
      if (!ready) continue;
      RatFunc rf = raw.expr;
      for (SymId s : raw.deps) {
        RatFunc numsub = poly_substitute(rf.num(), s, out.defs.at(s));
        RatFunc densub = poly_substitute(rf.den(), s, out.defs.at(s));
        rf = numsub / densub;
      }
      out.defs.emplace(raw.sigma, std::move(rf));
      progress = true;
    }
  }
  for (auto& raw : raws)
    if (!out.defs.count(raw.sigma)) out.unsolved.push_back(raw.sigma);
  for (auto& [sym, rf] : out.defs) {
    std::set<SymId> vars;
    rf.collect_vars(vars);
    for (SymId v : vars)
      if (g.net->symbols->kind(v) == SymKind::Concentration) out.def_conc_vars.insert(v);
  }
  return out;
}

// One relation x^d = rho.
struct Relation {
  CoefVec d;
  RatFunc rho;
};

struct SolveResult {
  std::map<int, ExprPtr> exprs;   // pivot species -> expression
  std::vector<int> pivots;
  std::vector<int> free_species;  // support minus pivots, ascending
  // exponents over relations per pivot row, for H assembly
  std::vector<std::vector<Rat>> rho_exponents;  // parallel to pivots
  std::vector<int> dependent_rows;              // dropped (consistent by theorem)
  bool complete = true;  // false when a row could not be pivoted
};

ExprPtr build_power_product(const std::vector<std::pair<RatFunc, Rat>>& factors,
                            const std::vector<std::pair<SymId, Rat>>& monomial) {
  RatFunc whole(Poly(Rat(1)));
  std::vector<ExprPtr> extras;
  for (auto& [rf, q] : factors) {
    if (q == 0) continue;
    if (is_integer(q)) {
      whole = whole * rf.pow(numerator(q).convert_to<long long>());
    } else {
      extras.push_back(Expr::pow(rf.to_expr(), q));
    }
  }
  for (auto& [sym, q] : monomial) {
    if (q == 0) continue;
    if (is_integer(q) && numerator(q) >= 0 && numerator(q) <= 16) {
      whole = whole * RatFunc::var(sym).pow(numerator(q).convert_to<long long>());
    } else if (is_integer(q) && numerator(q) >= -16) {
      whole = whole * RatFunc::var(sym).pow(numerator(q).convert_to<long long>());
    } else {
      extras.push_back(Expr::pow(Expr::symbol(sym), q));
    }
  }
  ExprPtr base = whole.to_expr();
  if (extras.empty()) return base;
  std::vector<ExprPtr> prod{base};
  prod.insert(prod.end(), extras.begin(), extras.end());
  return Expr::mul(std::move(prod));
}

SolveResult solve_relations(const Network& net, const std::vector<Relation>& rels,
                            const std::vector<int>& support, const std::set<int>& forbidden,
                            const std::vector<int>& avoid_first,
                            const std::vector<int>& avoid_second) {
  SolveResult out;
  const std::size_t ms = support.size();
  const std::size_t nr = rels.size();
  std::map<int, std::size_t> col_of;  // species -> support column
  for (std::size_t j = 0; j < ms; ++j) col_of[support[j]] = j;

  // pivot candidate order: plain support columns, then reluctantly avoided
  std::vector<std::size_t> order;
  std::set<int> av1(avoid_first.begin(), avoid_first.end());
  std::set<int> av2(avoid_second.begin(), avoid_second.end());
  auto push_tier = [&](auto pred) {
    for (std::size_t j = 0; j < ms; ++j)
      if (!forbidden.count(support[j]) && pred(support[j])) order.push_back(j);
  };
  push_tier([&](int s) { return !av1.count(s) && !av2.count(s); });
  push_tier([&](int s) { return av1.count(s) && !av2.count(s); });
  push_tier([&](int s) { return av2.count(s); });

  // augmented matrix [D | -I]
  RatMat A(nr, ms + nr);
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < ms; ++j) {
      int sp = support[j];
      A.at(i, j) = rels[i].d.at(sp);
    }
    A.at(i, ms + i) = -1;
  }
  std::vector<std::size_t> piv;
  RatMat R = A.rref(&piv, &order);

  std::set<int> pivset;
  std::vector<std::pair<std::size_t, int>> pivot_rows;  // (row, species)
  for (std::size_t i = 0; i < piv.size(); ++i) {
    pivot_rows.push_back({i, support[piv[i]]});
    pivset.insert(support[piv[i]]);
  }
  for (std::size_t i = piv.size(); i < nr; ++i) {
    // leftover rows: species part must be zero; they are dependent relations
    bool zero = true;
    for (std::size_t j = 0; j < ms; ++j) zero &= R.at(i, j) == 0;
    if (!zero) out.complete = false;
    out.dependent_rows.push_back((int)i);
  }

  for (auto& [row, sp] : pivot_rows) {
    std::vector<std::pair<RatFunc, Rat>> rho_factors;
    std::vector<Rat> expo(nr, Rat(0));
    for (std::size_t e = 0; e < nr; ++e) {
      Rat q = -R.at(row, ms + e);
      expo[e] = q;
      if (q != 0) rho_factors.push_back({rels[e].rho, q});
    }
    std::vector<std::pair<SymId, Rat>> mono;
    for (std::size_t j = 0; j < ms; ++j) {
      int s = support[j];
      if (s == sp || pivset.count(s)) continue;
      Rat q = -R.at(row, j);
      if (q != 0) mono.push_back({net.species[s].conc_sym, q});
    }
    out.exprs[sp] = build_power_product(rho_factors, mono);
    out.pivots.push_back(sp);
    out.rho_exponents.push_back(std::move(expo));
  }
  for (int s : support)
    if (!pivset.count(s)) out.free_species.push_back(s);
  std::sort(out.free_species.begin(), out.free_species.end());
  return out;
}

std::vector<int> support_species(const GeneralizedNetwork& g) {
  std::set<int> s;
  for (auto& v : g.vertices) {
    if (!v.ykin) continue;
    for (std::size_t i = 0; i < v.ykin->size(); ++i)
      if ((*v.ykin)[i] != 0) s.insert((int)i);
  }
  return std::vector<int>(s.begin(), s.end());
}

ExprPtr apply_label_defs(const ExprPtr& e, const GeneralizedNetwork& g) {
  if (g.label_defs.empty()) return e;
  std::unordered_map<SymId, ExprPtr> map(g.label_defs.begin(), g.label_defs.end());
  return substitute(e, map);
}

} // namespace

ParametrizeResult parametrize(const GeneralizedNetwork& g, const KineticAssignment& kin,
                              const ParametrizeOptions& opts) {
  const Network& net = *g.net;
  if (!g.all_sources())
    throw ParametrizationError("translated network has a vertex without a kinetic complex");
  if (!weakly_reversible(g))
    throw ParametrizationError("translated network is not weakly reversible");
  if (long long d = effective_deficiency(g); d != 0)
    throw ParametrizationError("effective deficiency is " + std::to_string(d) + ", need 0");
  if (long long d = kinetic_deficiency(g); d != 0)
    throw ParametrizationError("kinetic deficiency is " + std::to_string(d) + ", need 0");

  ParametrizeResult res;
  ParamSystem& sys = res.system;
  sys.tree = tree_constants(g);
  sys.forest = opts.forest_override ? *opts.forest_override : spanning_forest(g);
  sys.kappas = kappa(sys.tree, sys.forest);
  sys.M = kinetic_difference_matrix(g, sys.forest);

  std::vector<int> support = support_species(g);

  // ----- theorem chart: kappa^H o tau^B over rate symbols and sigmas -----
  const std::size_t m = net.num_species();
  const std::size_t nf = sys.forest.size();
  if (opts.h_override) {
    sys.H = *opts.h_override;
    if (sys.H.rows() != m || sys.H.cols() != nf)
      throw ParametrizationError("supplied H has wrong shape");
    if (!((sys.M * sys.H * sys.M) - sys.M).is_zero())
      throw ParametrizationError("supplied H fails M H M = M");
    sys.B = sys.M.nullspace();
    for (int sp : support) {
      std::vector<std::pair<RatFunc, Rat>> factors;
      for (std::size_t e = 0; e < nf; ++e)
        if (sys.H.at(sp, e) != 0) factors.push_back({sys.kappas[e], sys.H.at(sp, e)});
      // tau factors only when the kernel is nontrivial
      std::vector<std::pair<SymId, Rat>> mono;
      for (std::size_t k = 0; k < sys.B.cols(); ++k) {
        if (sys.B.at(sp, k) == 0) continue;
        if (sys.tau_syms.size() <= k)
          sys.tau_syms.push_back(net.symbols->fresh("tau", SymKind::Tau));
        mono.push_back({sys.tau_syms[k], sys.B.at(sp, k)});
      }
      sys.theorem_exprs[sp] = build_power_product(factors, mono);
    }
  } else {
    std::vector<Relation> rels(nf);
    for (std::size_t e = 0; e < nf; ++e) {
      rels[e].rho = sys.kappas[e];
      rels[e].d.assign(m, 0);
      for (std::size_t j = 0; j < m; ++j)
        rels[e].d[j] = sys.M.at(e, j).convert_to<long long>();
    }
    SolveResult sr =
        solve_relations(net, rels, support, {}, opts.prefer_free, opts.avoid_pivot);
    // H: pivot rows carry the rho exponents, everything else zero
    sys.H = RatMat(m, nf);
    for (std::size_t i = 0; i < sr.pivots.size(); ++i)
      for (std::size_t e = 0; e < nf; ++e) sys.H.at(sr.pivots[i], e) = sr.rho_exponents[i][e];
    sys.B = sys.M.nullspace();
    for (auto& [sp, ex] : sr.exprs) sys.theorem_exprs[sp] = ex;
    for (int f : sr.free_species)
      sys.theorem_exprs[f] = Expr::symbol(net.species[f].conc_sym);
  }

  // ----- merge chart: sigmas expressed through species, then a log-linear
  // solve of the effective relations -----
  Parametrization& p = res.param;
  p.reaction_ids = g.reaction_ids;
  p.support = support;
  p.method = "translation";

  bool overridden = opts.h_override.has_value() || opts.forest_override.has_value();
  SigmaResolution sig;
  if (!overridden) sig = resolve_sigmas(g, sys.tree);

  bool fallback = overridden || !sig.unsolved.empty();
  std::set<int> required_free;
  if (!fallback) {
    for (SymId c : sig.def_conc_vars)
      for (std::size_t i = 0; i < net.species.size(); ++i)
        if (net.species[i].conc_sym == c) required_free.insert((int)i);
    // effective relations with sigmas substituted
    std::vector<Relation> rels;
    for (std::size_t e = 0; e < nf; ++e) {
      const auto& fe = sys.forest[e];
      if (fe.graph_edge >= 0 && g.edges[fe.graph_edge].phantom) continue;
      Relation rel;
      rel.d.assign(m, 0);
      for (std::size_t j = 0; j < m; ++j) rel.d[j] = sys.M.at(e, j).convert_to<long long>();
      RatFunc rho = sys.kappas[e];
      for (auto& [s, def] : sig.defs) {
        if (!rho.num().contains_var(s) && !rho.den().contains_var(s)) continue;
        RatFunc nn = poly_substitute(rho.num(), s, def);
        RatFunc dd = poly_substitute(rho.den(), s, def);
        rho = nn / dd;
      }
      rel.rho = rho;
      rels.push_back(std::move(rel));
    }
    // feasibility: the required-free columns must not be needed as pivots
    RatMat D(rels.size(), support.size());
    RatMat Dallow(rels.size(), 0);
    std::vector<std::size_t> allowed_cols;
    for (std::size_t i = 0; i < rels.size(); ++i)
      for (std::size_t j = 0; j < support.size(); ++j) D.at(i, j) = rels[i].d[support[j]];
    std::size_t full = D.rank();
    {
      std::vector<std::size_t> keep;
      for (std::size_t j = 0; j < support.size(); ++j)
        if (!required_free.count(support[j])) keep.push_back(j);
      RatMat Dk(rels.size(), keep.size());
      for (std::size_t i = 0; i < rels.size(); ++i)
        for (std::size_t j = 0; j < keep.size(); ++j) Dk.at(i, j) = D.at(i, keep[j]);
      if (Dk.rank() != full) fallback = true;
    }
    if (!fallback) {
      SolveResult sr = solve_relations(net, rels, support, required_free, opts.avoid_pivot,
                                       opts.prefer_free);
      if (!sr.complete) {
        fallback = true;
      } else {
        for (auto& [sp, ex] : sr.exprs) p.exprs[sp] = apply_label_defs(ex, g);
        p.free_species = sr.free_species;
        for (auto& [sym, rf] : sig.defs)
          p.sigma_defs[sym] = apply_label_defs(rf.to_expr(), g);
        if (!sr.dependent_rows.empty())
          p.notes.push_back(std::to_string(sr.dependent_rows.size()) +
                            " dependent relation(s) dropped (consistent at deficiency zero)");
      }
    }
  }
  if (fallback) {
    // keep sigmas as free parameters; expressions come from the theorem chart
    for (int sp : support) {
      auto it = sys.theorem_exprs.find(sp);
      if (it == sys.theorem_exprs.end()) continue;
      if (it->second->is_sym() && it->second->sym == net.species[sp].conc_sym) {
        p.free_species.push_back(sp);
      } else {
        p.exprs[sp] = apply_label_defs(it->second, g);
      }
    }
    for (SymId s : g.sigma_syms) p.free_symbols.push_back(s);
    for (SymId t : sys.tau_syms) p.free_symbols.push_back(t);
    if (!overridden)
      p.notes.push_back("sigma elimination not possible; sigmas remain free parameters");
  }
  return res;
}

std::map<SymId, double> named_constant_bindings(const SymbolTable& tab,
                                                const std::map<std::string, double>& overrides) {
  std::map<SymId, double> out;
  static const std::pair<const char*, double> defaults[] = {
      {"alpha", 2.0}, {"beta", 2.0}, {"kbar", 1.0}, {"ktilde", 1.0}};
  for (auto& [name, v] : defaults) {
    SymId s = tab.lookup(name);
    if (s != kNoSym) out[s] = v;
  }
  for (auto& [name, v] : overrides) {
    SymId s = tab.lookup(name);
    if (s != kNoSym) out[s] = v;
  }
  return out;
}

ResidualReport validate_parametrization(const Network& net, const KineticAssignment& kin,
                                        const std::vector<int>& reaction_ids,
                                        const std::map<int, ExprPtr>& exprs, int n_samples,
                                        double tol, unsigned seed,
                                        const std::map<std::string, double>& const_overrides) {
  ResidualReport rep;
  rep.samples = n_samples;
  rep.seed = seed;
  rep.tol = tol;

  const SymbolTable& tab = *net.symbols;
  std::set<SymId> referenced;
  for (int id : reaction_ids) kin.rates.at(id).expr->collect_symbols(referenced);
  for (auto& [sp, ex] : exprs) ex->collect_symbols(referenced);
  std::set<SymId> dependent_conc;
  for (auto& [sp, ex] : exprs) dependent_conc.insert(net.species[sp].conc_sym);
  auto named = named_constant_bindings(tab, const_overrides);

  std::vector<SymId> to_sample;
  for (SymId s : referenced) {
    if (dependent_conc.count(s) || named.count(s)) continue;
    to_sample.push_back(s);
  }
  std::sort(to_sample.begin(), to_sample.end());

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> residuals;
  residuals.reserve(n_samples);

  for (int it = 0; it < n_samples; ++it) {
    std::vector<double> env(tab.size(), std::numeric_limits<double>::quiet_NaN());
    for (auto& [s, v] : named) env[s] = v;
    for (SymId s : to_sample) env[s] = std::pow(10.0, 2.0 * uni(rng) - 1.0);
    // resolve entries in dependency order
    std::map<int, ExprPtr> pending = exprs;
    bool progress = true;
    while (!pending.empty() && progress) {
      progress = false;
      for (auto pit = pending.begin(); pit != pending.end();) {
        bool ready = true;
        for (SymId s : pit->second->symbols())
          if (s >= env.size() || std::isnan(env[s])) ready = false;
        if (!ready) {
          ++pit;
          continue;
        }
        double v;
        try {
          v = pit->second->eval(env);
        } catch (const EvalError& e) {
          rep.failure = std::string("evaluation failure for ") +
                        net.species[pit->first].name + ": " + e.what();
          rep.pass = false;
          rep.worst_sample = it;
          return rep;
        }
        if (!(v > 0.0) || !std::isfinite(v)) {
          rep.failure = "non-positive steady-state value for species " +
                        net.species[pit->first].name;
          rep.pass = false;
          rep.worst_sample = it;
          return rep;
        }
        env[net.species[pit->first].conc_sym] = v;
        pit = pending.erase(pit);
        progress = true;
      }
    }
    if (!pending.empty()) {
      rep.failure = "cyclic or unresolvable parametrization entries";
      rep.pass = false;
      rep.worst_sample = it;
      return rep;
    }
    std::vector<double> f, scale;
    try {
      f = evaluate_rhs(net, kin, reaction_ids, env);
      scale = rhs_term_scale(net, kin, reaction_ids, env);
    } catch (const std::exception& e) {
      rep.failure = e.what();
      rep.pass = false;
      rep.worst_sample = it;
      return rep;
    }
    double worst = 0;
    for (std::size_t j = 0; j < f.size(); ++j)
      worst = std::max(worst, std::fabs(f[j]) / (1.0 + scale[j]));
    residuals.push_back(worst);
    if (worst > rep.max_residual) {
      rep.max_residual = worst;
      rep.worst_sample = it;
    }
  }
  std::vector<double> sorted = residuals;
  std::sort(sorted.begin(), sorted.end());
  rep.median_residual = sorted.empty() ? 0.0 : sorted[sorted.size() / 2];
  rep.pass = rep.max_residual <= tol && rep.failure.empty();
  return rep;
}

} // namespace crn
