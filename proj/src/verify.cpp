#include "crn/verify.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>

namespace crn {

std::vector<std::vector<int>> enumerate_rooted_trees(const DiGraph& g, int root) {
  if (g.n > 8) throw OracleError("tree enumeration oracle capped at 8 vertices");
  if (root < 0 || root >= g.n) throw OracleError("bad root");
  std::vector<std::vector<int>> out_edges(g.n);
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    out_edges[g.edges[i].tail].push_back((int)i);
  std::vector<int> verts;
  for (int v = 0; v < g.n; ++v)
    if (v != root) verts.push_back(v);
  std::vector<std::vector<int>> trees;
  std::vector<int> pick(g.n, -1);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == verts.size()) {
      // each non-root vertex must reach the root through its picked edge
      for (int v : verts) {
        int cur = v, steps = 0;
        while (cur != root) {
          if (pick[cur] < 0 || ++steps > g.n) return;
          cur = g.edges[pick[cur]].head;
        }
      }
      std::vector<int> tree;
      for (int v : verts) tree.push_back(pick[v]);
      std::sort(tree.begin(), tree.end());
      trees.push_back(std::move(tree));
      return;
    }
    int v = verts[k];
    for (int e : out_edges[v]) {
      pick[v] = e;
      rec(k + 1);
    }
    pick[v] = -1;
  };
  rec(0);
  return trees;
}

Poly tree_constant_by_enumeration(const DiGraph& g, int root) {
  Poly sum;
  for (auto& tree : enumerate_rooted_trees(g, root)) {
    Poly prod(Rat(1));
    for (int e : tree) prod = prod * Poly::var(g.edges[e].label);
    sum = sum + prod;
  }
  return sum;
}

DiGraph digraph_of(const GeneralizedNetwork& g) {
  DiGraph d;
  d.n = (int)g.vertices.size();
  for (auto& e : g.edges) d.edges.push_back({e.tail, e.head, e.label});
  return d;
}

Decomposition exhaustive_finest(const Network& net) {
  const std::size_t r = net.num_reactions();
  if (r > 10) throw OracleError("exhaustive decomposition oracle capped at 10 reactions");
  // rank per reaction subset
  std::vector<std::size_t> subset_rank(1u << r, 0);
  for (std::size_t mask = 1; mask < (1u << r); ++mask) {
    std::vector<int> ids;
    for (std::size_t i = 0; i < r; ++i)
      if (mask & (1u << i)) ids.push_back((int)i);
    subset_rank[mask] = exact_rank(stoichiometric_matrix(net, ids));
  }
  std::size_t total = subset_rank[(1u << r) - 1];

  // restricted growth strings enumerate set partitions
  std::vector<int> a(r, 0);
  std::vector<std::vector<int>> best;
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int maxv) {
    if (i == r) {
      int parts = maxv + 1;
      if ((std::size_t)parts <= best.size() && !best.empty()) return;
      std::vector<std::size_t> masks(parts, 0);
      for (std::size_t k = 0; k < r; ++k) masks[a[k]] |= 1u << k;
      std::size_t sum = 0;
      for (auto m : masks) sum += subset_rank[m];
      if (sum != total) return;
      std::vector<std::vector<int>> parts_v(parts);
      for (std::size_t k = 0; k < r; ++k) parts_v[a[k]].push_back((int)k);
      if (parts_v.size() > best.size()) best = parts_v;
      return;
    }
    for (int v = 0; v <= maxv + 1; ++v) {
      a[i] = v;
      rec(i + 1, std::max(maxv, v));
    }
  };
  rec(1, 0);  // a[0] = 0 fixed

  Decomposition dec;
  std::sort(best.begin(), best.end(),
            [](auto& x, auto& y) { return x.front() < y.front(); });
  dec.parts = best;
  for (auto& part : dec.parts) dec.summaries.push_back(deficiency(net, part));
  dec.independent = is_independent(net, dec.parts);
  return dec;
}

HarnessReport residual_harness(const Network& net, const KineticAssignment& kin,
                               const std::vector<int>& reaction_ids,
                               const std::map<int, ExprPtr>& exprs, unsigned seed, int samples,
                               double tol, const std::map<std::string, double>& overrides) {
  HarnessReport hr;
  hr.report =
      validate_parametrization(net, kin, reaction_ids, exprs, samples, tol, seed, overrides);
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "seed=%u samples=%d tol=%.17g max_residual=%.17g median_residual=%.17g "
                "pass=%s worst_sample=%d%s%s",
                hr.report.seed, hr.report.samples, hr.report.tol, hr.report.max_residual,
                hr.report.median_residual, hr.report.pass ? "yes" : "no",
                hr.report.worst_sample, hr.report.failure.empty() ? "" : " failure=",
                hr.report.failure.c_str());
  hr.rendered = buf;
  return hr;
}

} // namespace crn
