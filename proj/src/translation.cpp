#include "crn/translation.hpp"

#include "crn/decomposition.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <sstream>

namespace crn {

namespace {

std::vector<std::vector<int>> graph_components(std::size_t n,
                                               const std::vector<std::pair<int, int>>& edges,
                                               bool strong) {
  if (!strong) {
    std::vector<int> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = (int)i;
    std::function<int(int)> find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (auto& [a, b] : edges) parent[find(a)] = find(b);
    std::map<int, std::vector<int>> g;
    for (std::size_t i = 0; i < n; ++i) g[find((int)i)].push_back((int)i);
    std::vector<std::vector<int>> out;
    for (auto& [k, v] : g) out.push_back(v);
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.front() < b.front(); });
    return out;
  }
  std::vector<std::vector<int>> adj(n);
  for (auto& [a, b] : edges) adj[a].push_back(b);
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<bool> onstack(n, false);
  std::vector<std::vector<int>> sccs;
  int counter = 0;
  std::function<void(int)> dfs = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    onstack[v] = true;
    for (int w : adj[v]) {
      if (index[w] < 0) {
        dfs(w);
        low[v] = std::min(low[v], low[w]);
      } else if (onstack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<int> comp;
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        onstack[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      sccs.push_back(std::move(comp));
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (index[v] < 0) dfs(v);
  std::sort(sccs.begin(), sccs.end(), [](auto& a, auto& b) { return a.front() < b.front(); });
  return sccs;
}

// Rate symbol for an effective edge. Mass-action monomials contribute their
// own constant; anything else gets a fresh symbol with a recorded definition.
SymId edge_rate_symbol(const Network& net, const RateLaw& rl, const Reaction& rxn,
                       std::map<SymId, ExprPtr>& defs) {
  if (rl.tag == KineticsTag::MassAction) {
    auto mv = as_monomial(rl.expr);
    if (mv) {
      SymId only = kNoSym;
      bool clean = mv->coeff == 1;
      for (auto& [sym, exp] : mv->powers) {
        if (net.symbols->kind(sym) == SymKind::Concentration) continue;
        if (only != kNoSym || exp != 1 || net.symbols->kind(sym) != SymKind::Parameter) {
          clean = false;
          break;
        }
        only = sym;
      }
      if (clean && only != kNoSym) return only;
    }
  }
  // fresh symbol standing for the full parameter part of the rate
  SymId w = net.symbols->fresh("w", SymKind::Parameter);
  // definition: rate / x^{source}
  ExprPtr def = rl.expr;
  const auto& src = net.complexes[rxn.source].coeffs;
  std::vector<ExprPtr> fac{def};
  for (std::size_t i = 0; i < src.size(); ++i)
    if (src[i] != 0)
      fac.push_back(Expr::pow(Expr::symbol(net.species[i].conc_sym), Rat(-src[i])));
  defs[w] = Expr::mul(std::move(fac));
  return w;
}

} // namespace

int GeneralizedNetwork::vertex_class(int v) const {
  for (std::size_t c = 0; c < y_classes.size(); ++c)
    for (int u : y_classes[c])
      if (u == v) return (int)c;
  return -1;
}

std::string GeneralizedNetwork::describe(const SymbolTable& tab) const {
  std::ostringstream os;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    os << "v" << i + 1 << ": " << complex_to_string(*net, vertices[i].y);
    if (vertices[i].ykin) os << " (" << complex_to_string(*net, *vertices[i].ykin) << ")";
    bool rep = false;
    for (int r : representative)
      if (r == (int)i) rep = true;
    if (rep) os << " *";
    os << "\n";
  }
  for (auto& e : edges) {
    os << "  v" << e.tail + 1 << " -> v" << e.head + 1 << "  [" << tab.name(e.label) << "]";
    if (e.phantom) os << " phantom";
    else os << " from " << net->reactions[e.reaction].label;
    os << "\n";
  }
  return os.str();
}

GeneralizedNetwork translate(const Network& net, const KineticAssignment& kin,
                             const std::vector<int>& reaction_ids,
                             const std::vector<CoefVec>& shifts) {
  if (shifts.size() != reaction_ids.size())
    throw TranslationError("one shift per reaction required");
  GeneralizedNetwork g;
  g.net = &net;
  g.reaction_ids = reaction_ids;
  g.shifts = shifts;
  const std::size_t m = net.num_species();

  auto shifted = [&](const CoefVec& c, const CoefVec& s, const std::string& label) {
    CoefVec out(m);
    for (std::size_t i = 0; i < m; ++i) {
      out[i] = c[i] + s[i];
      if (out[i] < 0)
        throw TranslationError("shift produces negative coordinate in reaction " + label);
    }
    return out;
  };

  struct PerReaction {
    CoefVec ssrc, sprod;
    int src_vertex = -1;
  };
  std::vector<PerReaction> pr(reaction_ids.size());

  // source vertices keyed by (shifted source, kinetic complex)
  for (std::size_t k = 0; k < reaction_ids.size(); ++k) {
    const Reaction& rxn = net.reactions.at(reaction_ids[k]);
    CoefVec sh = shifts[k];
    sh.resize(m, 0);
    pr[k].ssrc = shifted(net.complexes[rxn.source].coeffs, sh, rxn.label);
    pr[k].sprod = shifted(net.complexes[rxn.product].coeffs, sh, rxn.label);
    const CoefVec& kinc = net.complexes[rxn.source].coeffs;
    int found = -1;
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
      if (g.vertices[v].ykin && g.vertices[v].y == pr[k].ssrc && *g.vertices[v].ykin == kinc)
        found = (int)v;
    if (found < 0) {
      g.vertices.push_back({pr[k].ssrc, kinc});
      found = (int)g.vertices.size() - 1;
    }
    pr[k].src_vertex = found;
  }
  // sink vertices for product complexes with no source vertex
  for (std::size_t k = 0; k < reaction_ids.size(); ++k) {
    bool exists = false;
    for (auto& v : g.vertices) exists |= v.y == pr[k].sprod;
    if (!exists) g.vertices.push_back({pr[k].sprod, std::nullopt});
  }

  // stoichiometric classes, representatives
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    int cls = -1;
    for (std::size_t c = 0; c < g.y_classes.size(); ++c)
      if (g.vertices[g.y_classes[c].front()].y == g.vertices[v].y) cls = (int)c;
    if (cls < 0) {
      g.y_classes.push_back({(int)v});
    } else {
      g.y_classes[cls].push_back((int)v);
    }
  }
  for (auto& cls : g.y_classes) {
    int rep = -1;
    for (int v : cls)
      if (g.vertices[v].ykin) {
        rep = v;
        break;
      }
    if (rep < 0) rep = cls.front();
    g.representative.push_back(rep);
  }

  // effective edges (reaction order), heads at representatives
  for (std::size_t k = 0; k < reaction_ids.size(); ++k) {
    const Reaction& rxn = net.reactions.at(reaction_ids[k]);
    int head = -1;
    for (std::size_t c = 0; c < g.y_classes.size(); ++c)
      if (g.vertices[g.y_classes[c].front()].y == pr[k].sprod) head = g.representative[c];
    GEdge e;
    e.tail = pr[k].src_vertex;
    e.head = head;
    e.phantom = false;
    e.reaction = reaction_ids[k];
    e.label = edge_rate_symbol(net, kin.rates.at(reaction_ids[k]), rxn, g.label_defs);
    g.edges.push_back(e);
  }
  // phantom edges: representative -> each other class member
  for (std::size_t c = 0; c < g.y_classes.size(); ++c) {
    for (int v : g.y_classes[c]) {
      if (v == g.representative[c]) continue;
      GEdge e;
      e.tail = g.representative[c];
      e.head = v;
      e.phantom = true;
      e.label = net.symbols->fresh("sigma", SymKind::Sigma);
      g.sigma_syms.push_back(e.label);
      g.edges.push_back(e);
    }
  }
  return g;
}

StructuralSummary effective_structure(const GeneralizedNetwork& g) {
  StructuralSummary out;
  const Network& net = *g.net;
  out.m = net.num_species();
  // class graph with effective edges
  std::vector<std::pair<int, int>> edges;
  std::set<int> used;
  std::vector<int> vclass(g.vertices.size());
  for (std::size_t c = 0; c < g.y_classes.size(); ++c)
    for (int v : g.y_classes[c]) vclass[v] = (int)c;
  RatMat vecs(net.num_species(), g.edges.size());
  std::size_t ecount = 0;
  for (auto& e : g.edges) {
    if (e.phantom) continue;
    edges.push_back({vclass[e.tail], vclass[e.head]});
    used.insert(vclass[e.tail]);
    used.insert(vclass[e.head]);
    for (std::size_t i = 0; i < net.num_species(); ++i)
      vecs.at(i, ecount) = g.vertices[e.head].y[i] - g.vertices[e.tail].y[i];
    ++ecount;
  }
  out.r = ecount;
  RatMat trimmed(net.num_species(), ecount);
  for (std::size_t i = 0; i < net.num_species(); ++i)
    for (std::size_t j = 0; j < ecount; ++j) trimmed.at(i, j) = vecs.at(i, j);
  // compress classes touched by effective edges
  std::map<int, int> remap;
  for (int c : used) remap.emplace(c, (int)remap.size());
  std::vector<std::pair<int, int>> redges;
  for (auto& [a, b] : edges) redges.push_back({remap[a], remap[b]});
  out.n = used.size();
  out.ell = graph_components(used.size(), redges, false).size();
  out.s = exact_rank(trimmed);
  out.delta = (long long)out.n - (long long)out.ell - (long long)out.s;
  out.weakly_reversible =
      graph_components(used.size(), redges, true).size() == out.ell;
  return out;
}

long long effective_deficiency(const GeneralizedNetwork& g) {
  return effective_structure(g).delta;
}

StructuralSummary kinetic_structure(const GeneralizedNetwork& g) {
  if (!g.all_sources())
    throw TranslationError("kinetic structure undefined: some vertex has no kinetic complex");
  StructuralSummary out;
  const Network& net = *g.net;
  out.m = net.num_species();
  out.n = g.vertices.size();
  out.r = g.edges.size();
  std::vector<std::pair<int, int>> edges;
  RatMat diffs(net.num_species(), g.edges.size());
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    edges.push_back({e.tail, e.head});
    const CoefVec& a = *g.vertices[e.tail].ykin;
    const CoefVec& b = *g.vertices[e.head].ykin;
    for (std::size_t i = 0; i < net.num_species(); ++i) diffs.at(i, k) = b[i] - a[i];
  }
  out.ell = graph_components(g.vertices.size(), edges, false).size();
  out.s = exact_rank(diffs);
  out.delta = (long long)out.n - (long long)out.ell - (long long)out.s;
  out.weakly_reversible = graph_components(g.vertices.size(), edges, true).size() == out.ell;
  return out;
}

long long kinetic_deficiency(const GeneralizedNetwork& g) {
  return kinetic_structure(g).delta;
}

bool weakly_reversible(const GeneralizedNetwork& g) {
  std::vector<std::pair<int, int>> edges;
  for (auto& e : g.edges) edges.push_back({e.tail, e.head});
  return graph_components(g.vertices.size(), edges, false).size() ==
         graph_components(g.vertices.size(), edges, true).size();
}

double check_dynamic_equivalence(const Network& net, const KineticAssignment& kin,
                                 const GeneralizedNetwork& g, int samples, unsigned seed) {
  // structural part: every effective edge must reproduce its reaction vector
  for (auto& e : g.edges) {
    if (e.phantom) continue;
    CoefVec rv = reaction_vector(net, net.reactions.at(e.reaction));
    for (std::size_t i = 0; i < rv.size(); ++i)
      if (g.vertices[e.head].y[i] - g.vertices[e.tail].y[i] != rv[i])
        throw TranslationError("translation does not preserve the vector of reaction " +
                               net.reactions[e.reaction].label);
  }
  // numeric part
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::set<SymId> syms;
  for (int id : g.reaction_ids) kin.rates.at(id).expr->collect_symbols(syms);
  for (auto& sp : net.species) syms.insert(sp.conc_sym);
  double worst = 0;
  for (int it = 0; it < samples; ++it) {
    std::vector<double> env(net.symbols->size(), std::numeric_limits<double>::quiet_NaN());
    for (SymId s : syms) env[s] = std::pow(10.0, 2.0 * uni(rng) - 1.0);
    std::vector<double> f_orig = evaluate_rhs(net, kin, g.reaction_ids, env);
    std::vector<double> f_tr(net.num_species(), 0.0);
    for (auto& e : g.edges) {
      if (e.phantom) continue;
      double rate = kin.rates.at(e.reaction).expr->eval(env);
      for (std::size_t i = 0; i < net.num_species(); ++i)
        f_tr[i] += rate * (double)(g.vertices[e.head].y[i] - g.vertices[e.tail].y[i]);
    }
    for (std::size_t i = 0; i < net.num_species(); ++i)
      worst = std::max(worst, std::fabs(f_orig[i] - f_tr[i]));
  }
  return worst;
}

namespace {

std::vector<CoefVec> shift_candidates(const Network& net, const KineticAssignment& kin,
                                      const std::vector<int>& ids, long long budget) {
  const std::size_t m = net.num_species();
  std::set<int> cxs;
  for (int id : ids) {
    cxs.insert(net.reactions[id].source);
    cxs.insert(net.reactions[id].product);
  }
  std::set<CoefVec> seen;
  std::vector<CoefVec> out;
  auto push = [&](CoefVec v) {
    long long l1 = 0;
    for (auto x : v) l1 += x < 0 ? -x : x;
    if (l1 > budget) return;
    if (seen.insert(v).second) out.push_back(std::move(v));
  };
  push(CoefVec(m, 0));
  std::set<int> sp = occurring_species(net, ids);
  auto rsp = rate_law_species(net, kin, ids);
  sp.insert(rsp.begin(), rsp.end());
  for (int i : sp) {
    CoefVec plus(m, 0), minus(m, 0);
    plus[i] = 1;
    minus[i] = -1;
    push(plus);
    push(minus);
  }
  for (int a : cxs)
    for (int b : cxs) {
      if (a == b) continue;
      CoefVec d(m);
      for (std::size_t i = 0; i < m; ++i)
        d[i] = net.complexes[a].coeffs[i] - net.complexes[b].coeffs[i];
      push(d);
    }
  std::sort(out.begin(), out.end(), [](const CoefVec& a, const CoefVec& b) {
    long long la = 0, lb = 0;
    for (auto x : a) la += x < 0 ? -x : x;
    for (auto x : b) lb += x < 0 ? -x : x;
    if (la != lb) return la < lb;
    return a < b;
  });
  return out;
}

} // namespace

TranslationSearchResult search_translation(const Network& net, const KineticAssignment& kin,
                                           const std::vector<int>& reaction_ids,
                                           long long budget, long long max_combinations) {
  TranslationSearchResult res;
  // linkage classes of the subnetwork
  std::set<int> cxset;
  for (int id : reaction_ids) {
    cxset.insert(net.reactions[id].source);
    cxset.insert(net.reactions[id].product);
  }
  std::map<int, int> remap;
  for (int c : cxset) remap.emplace(c, (int)remap.size());
  std::vector<std::pair<int, int>> edges;
  for (int id : reaction_ids)
    edges.push_back({remap[net.reactions[id].source], remap[net.reactions[id].product]});
  auto comps = graph_components(cxset.size(), edges, false);
  // reaction -> component
  std::vector<int> rxn_comp(reaction_ids.size());
  std::vector<int> cx_comp(cxset.size());
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (int v : comps[c]) cx_comp[v] = (int)c;
  for (std::size_t k = 0; k < reaction_ids.size(); ++k)
    rxn_comp[k] = cx_comp[remap[net.reactions[reaction_ids[k]].source]];

  auto cands = shift_candidates(net, kin, reaction_ids, budget);
  std::vector<std::size_t> choice(comps.size(), 0);
  long long tried = 0;

  std::function<bool(std::size_t)> dfs = [&](std::size_t ci) -> bool {
    if (tried >= max_combinations) return false;
    if (ci == comps.size()) {
      ++tried;
      std::vector<CoefVec> shifts(reaction_ids.size());
      for (std::size_t k = 0; k < reaction_ids.size(); ++k)
        shifts[k] = cands[choice[rxn_comp[k]]];
      try {
        GeneralizedNetwork g = translate(net, kin, reaction_ids, shifts);
        if (!g.all_sources() || !weakly_reversible(g)) return false;
        if (effective_deficiency(g) != 0) return false;
        if (kinetic_deficiency(g) != 0) return false;
        res.found = true;
        res.shifts = std::move(shifts);
        res.gcrn = std::move(g);
        return true;
      } catch (const TranslationError&) {
        return false;
      }
    }
    for (std::size_t j = 0; j < cands.size(); ++j) {
      // prune: shifted complexes of this component stay non-negative
      bool ok = true;
      for (std::size_t k = 0; k < reaction_ids.size() && ok; ++k) {
        if (rxn_comp[k] != (int)ci) continue;
        const Reaction& rxn = net.reactions[reaction_ids[k]];
        for (int cx : {rxn.source, rxn.product}) {
          const auto& c = net.complexes[cx].coeffs;
          for (std::size_t i = 0; i < c.size(); ++i)
            if (c[i] + cands[j][i] < 0) {
              ok = false;
              break;
            }
          if (!ok) break;
        }
      }
      if (!ok) continue;
      choice[ci] = j;
      if (dfs(ci + 1)) return true;
      if (tried >= max_combinations) return false;
    }
    return false;
  };
  dfs(0);
  res.candidates_tried = tried;
  return res;
}

} // namespace crn
