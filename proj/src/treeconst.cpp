#include "crn/treeconst.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace crn {

Poly poly_det(std::vector<std::vector<Poly>> a) {
  const std::size_t n = a.size();
  if (n == 0) return Poly(Rat(1));
  int sign = 1;
  Poly prev(Rat(1));
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t p = k;
    while (p < n && a[p][k].is_zero()) ++p;
    if (p == n) return Poly();  // singular
    if (p != k) {
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Poly num = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        auto q = num.divide_exact(prev);
        if (!q) throw std::logic_error("Bareiss division not exact");
        a[i][j] = std::move(*q);
      }
      a[i][k] = Poly();
    }
    prev = a[k][k];
  }
  Poly det = a[n - 1][n - 1];
  return sign < 0 ? -det : det;
}

TreeConstantTable tree_constants(const GeneralizedNetwork& g) {
  TreeConstantTable out;
  const std::size_t n = g.vertices.size();
  out.K.assign(n, Poly(Rat(1)));
  out.component.assign(n, 0);

  // weak components
  std::vector<int> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = (int)i;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto& e : g.edges) parent[find(e.tail)] = find(e.head);
  std::map<int, std::vector<int>> comps;
  for (std::size_t i = 0; i < n; ++i) comps[find((int)i)].push_back((int)i);

  int cidx = 0;
  for (auto& [root, verts] : comps) {
    for (int v : verts) out.component[v] = cidx;
    ++cidx;
    if (verts.size() == 1) continue;  // empty product
    std::map<int, int> local;
    for (std::size_t i = 0; i < verts.size(); ++i) local[verts[i]] = (int)i;
    const std::size_t c = verts.size();
    // Laplacian L = D_out - A over edge-label polynomials
    std::vector<std::vector<Poly>> L(c, std::vector<Poly>(c));
    for (auto& e : g.edges) {
      auto ti = local.find(e.tail);
      if (ti == local.end()) continue;
      int t = ti->second, h = local.at(e.head);
      Poly w = Poly::var(e.label);
      L[t][t] = L[t][t] + w;
      if (t != h) L[t][h] = L[t][h] - w;
    }
    for (std::size_t r = 0; r < c; ++r) {
      // principal minor deleting row r and column r
      std::vector<std::vector<Poly>> minor(c - 1, std::vector<Poly>(c - 1));
      std::size_t ii = 0;
      for (std::size_t i = 0; i < c; ++i) {
        if (i == r) continue;
        std::size_t jj = 0;
        for (std::size_t j = 0; j < c; ++j) {
          if (j == r) continue;
          minor[ii][jj] = L[i][j];
          ++jj;
        }
        ++ii;
      }
      out.K[verts[r]] = poly_det(std::move(minor));
    }
  }
  return out;
}

std::vector<ForestEdge> spanning_forest(const GeneralizedNetwork& g) {
  const std::size_t n = g.vertices.size();
  std::vector<std::vector<std::pair<int, int>>> incident(n);  // (edge idx, other endpoint)
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    incident[g.edges[k].tail].push_back({(int)k, g.edges[k].head});
    incident[g.edges[k].head].push_back({(int)k, g.edges[k].tail});
  }
  std::vector<bool> seen(n, false);
  std::vector<ForestEdge> forest;
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    seen[start] = true;
    std::vector<int> queue{(int)start};
    std::size_t qi = 0;
    while (qi < queue.size()) {
      int v = queue[qi++];
      for (auto& [ei, other] : incident[v]) {
        if (seen[other]) continue;
        seen[other] = true;
        forest.push_back({g.edges[ei].tail, g.edges[ei].head, ei});
        queue.push_back(other);
      }
    }
  }
  return forest;
}

RatFunc kappa_of(const TreeConstantTable& K, const ForestEdge& e) {
  if (K.component.at(e.tail) != K.component.at(e.head))
    throw KappaError("kappa across components");
  if (K.K.at(e.tail).is_zero() || K.K.at(e.head).is_zero())
    throw KappaError("zero tree constant: kinetic-order graph is not weakly reversible");
  return RatFunc(K.K.at(e.head), K.K.at(e.tail));
}

std::vector<RatFunc> kappa(const TreeConstantTable& K, const std::vector<ForestEdge>& forest) {
  std::vector<RatFunc> out;
  out.reserve(forest.size());
  for (auto& e : forest) out.push_back(kappa_of(K, e));
  return out;
}

RatMat kinetic_difference_matrix(const GeneralizedNetwork& g,
                                 const std::vector<ForestEdge>& forest) {
  const std::size_t m = g.net->num_species();
  RatMat M(forest.size(), m);
  for (std::size_t r = 0; r < forest.size(); ++r) {
    const auto& t = g.vertices.at(forest[r].tail);
    const auto& h = g.vertices.at(forest[r].head);
    if (!t.ykin || !h.ykin)
      throw TranslationError("kinetic difference needs kinetic complexes on both endpoints");
    for (std::size_t j = 0; j < m; ++j) M.at(r, j) = (*h.ykin)[j] - (*t.ykin)[j];
  }
  return M;
}

} // namespace crn
