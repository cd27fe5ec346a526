#include "crn/network.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace crn {

int Network::complex_index(const CoefVec& c) const {
  for (std::size_t i = 0; i < complexes.size(); ++i)
    if (complexes[i].coeffs == c) return (int)i;
  return -1;
}

int Network::add_complex(const CoefVec& c) {
  int idx = complex_index(c);
  if (idx >= 0) return idx;
  for (auto v : c)
    if (v < 0) throw StructuralError("complex with negative coefficient");
  complexes.push_back(Complexe{c});
  return (int)complexes.size() - 1;
}

int Network::species_index(const std::string& name) const {
  for (std::size_t i = 0; i < species.size(); ++i)
    if (species[i].name == name) return (int)i;
  return -1;
}

void Network::validate() const {
  std::set<std::string> labels;
  std::vector<bool> used(complexes.size(), false);
  for (auto& r : reactions) {
    if (r.source < 0 || r.product < 0 || r.source >= (int)complexes.size() ||
        r.product >= (int)complexes.size())
      throw StructuralError("reaction references unknown complex");
    if (r.source == r.product)
      throw StructuralError("self-loop complex in reaction " + r.label);
    if (!labels.insert(r.label).second)
      throw StructuralError("duplicate reaction label " + r.label);
    used[r.source] = used[r.product] = true;
  }
  for (std::size_t i = 0; i < complexes.size(); ++i)
    if (!used[i]) throw StructuralError("complex not used by any reaction");
  for (auto& c : complexes) {
    if (c.coeffs.size() != species.size())
      throw StructuralError("complex dimension mismatch");
    for (auto v : c.coeffs)
      if (v < 0) throw StructuralError("complex with negative coefficient");
  }
}

CoefVec reaction_vector(const Network& net, const Reaction& r) {
  const auto& s = net.complexes.at(r.source).coeffs;
  const auto& p = net.complexes.at(r.product).coeffs;
  if (s.size() != p.size()) throw StructuralError("reaction vector dimension mismatch");
  CoefVec v(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) v[i] = p[i] - s[i];
  return v;
}

RatMat stoichiometric_matrix(const Network& net) {
  std::vector<int> all(net.reactions.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = (int)i;
  return stoichiometric_matrix(net, all);
}

RatMat stoichiometric_matrix(const Network& net, const std::vector<int>& ids) {
  RatMat m(net.num_species(), ids.size());
  for (std::size_t j = 0; j < ids.size(); ++j) {
    CoefVec v = reaction_vector(net, net.reactions.at(ids[j]));
    for (std::size_t i = 0; i < v.size(); ++i) m.at(i, j) = v[i];
  }
  return m;
}

namespace {

std::vector<std::vector<int>> components_of(std::size_t n,
                                            const std::vector<std::pair<int, int>>& edges,
                                            bool directed_strong) {
  if (!directed_strong) {
    // union-find
    std::vector<int> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = (int)i;
    std::function<int(int)> find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (auto& [a, b] : edges) parent[find(a)] = find(b);
    std::map<int, std::vector<int>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[find((int)i)].push_back((int)i);
    std::vector<std::vector<int>> out;
    std::vector<std::pair<int, std::vector<int>>> sorted(groups.begin(), groups.end());
    std::sort(sorted.begin(), sorted.end(),
              [](auto& a, auto& b) { return a.second.front() < b.second.front(); });
    for (auto& [k, v] : sorted) out.push_back(v);
    return out;
  }
  // Tarjan SCC
  std::vector<std::vector<int>> adj(n);
  for (auto& [a, b] : edges) adj[a].push_back(b);
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<bool> onstack(n, false);
  std::vector<std::vector<int>> sccs;
  int counter = 0;
  std::function<void(int)> strongconnect = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    onstack[v] = true;
    for (int w : adj[v]) {
      if (index[w] < 0) {
        strongconnect(w);
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
    if (index[v] < 0) strongconnect((int)v);
  std::sort(sccs.begin(), sccs.end(),
            [](auto& a, auto& b) { return a.front() < b.front(); });
  return sccs;
}

} // namespace

std::vector<std::vector<int>> linkage_classes(const Network& net) {
  std::vector<std::pair<int, int>> edges;
  for (auto& r : net.reactions) edges.push_back({r.source, r.product});
  return components_of(net.num_complexes(), edges, false);
}

std::vector<std::vector<int>> strong_linkage_classes(const Network& net) {
  std::vector<std::pair<int, int>> edges;
  for (auto& r : net.reactions) edges.push_back({r.source, r.product});
  return components_of(net.num_complexes(), edges, true);
}

bool is_weakly_reversible(const Network& net) {
  auto weak = linkage_classes(net);
  auto strong = strong_linkage_classes(net);
  if (weak.size() != strong.size()) return false;
  std::sort(weak.begin(), weak.end());
  std::sort(strong.begin(), strong.end());
  return weak == strong;
}

std::size_t exact_rank(const RatMat& m) { return m.rank(); }

StructuralSummary deficiency(const Network& net) {
  std::vector<int> all(net.reactions.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = (int)i;
  return deficiency(net, all);
}

StructuralSummary deficiency(const Network& net, const std::vector<int>& ids) {
  StructuralSummary out;
  out.m = net.num_species();
  out.r = ids.size();
  std::set<int> cx;
  std::vector<std::pair<int, int>> edges;
  for (int id : ids) {
    const auto& r = net.reactions.at(id);
    cx.insert(r.source);
    cx.insert(r.product);
    edges.push_back({r.source, r.product});
  }
  out.n = cx.size();
  // remap complexes to a compact index space for component counting
  std::map<int, int> remap;
  int k = 0;
  for (int c : cx) remap[c] = k++;
  std::vector<std::pair<int, int>> redges, sedges;
  for (auto& [a, b] : edges) redges.push_back({remap[a], remap[b]});
  out.ell = components_of(cx.size(), redges, false).size();
  out.s = exact_rank(stoichiometric_matrix(net, ids));
  out.delta = (long long)out.n - (long long)out.ell - (long long)out.s;
  if (out.delta < 0) throw StructuralError("negative deficiency (internal error)");
  auto strong = components_of(cx.size(), redges, true);
  out.weakly_reversible = strong.size() == out.ell;
  return out;
}

std::set<int> occurring_species(const Network& net, const std::vector<int>& ids) {
  std::set<int> out;
  for (int id : ids) {
    const auto& r = net.reactions.at(id);
    for (int cx : {r.source, r.product}) {
      const auto& c = net.complexes.at(cx).coeffs;
      for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] != 0) out.insert((int)i);
    }
  }
  return out;
}

std::string complex_to_string(const Network& net, const CoefVec& c) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    long long v = c[i];
    if (first) {
      if (v < 0) os << "-";
    } else {
      os << (v < 0 ? " - " : " + ");
    }
    first = false;
    long long a = v < 0 ? -v : v;
    if (a != 1) os << a;
    os << net.species[i].name;
  }
  if (first) os << "0";
  return os.str();
}

} // namespace crn
