#include "crn/decomposition.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace crn {

bool is_independent(const Network& net, const std::vector<std::vector<int>>& partition) {
  std::vector<bool> seen(net.num_reactions(), false);
  std::size_t covered = 0;
  for (auto& part : partition) {
    if (part.empty()) throw StructuralError("empty part in partition");
    for (int id : part) {
      if (id < 0 || id >= (int)net.num_reactions() || seen[id])
        throw StructuralError("partition is not a partition of the reaction set");
      seen[id] = true;
      ++covered;
    }
  }
  if (covered != net.num_reactions())
    throw StructuralError("partition does not cover all reactions");
  std::size_t total = exact_rank(stoichiometric_matrix(net));
  std::size_t sum = 0;
  for (auto& part : partition) sum += exact_rank(stoichiometric_matrix(net, part));
  return sum == total;
}

Decomposition finest_independent_decomposition(const Network& net) {
  const std::size_t r = net.num_reactions();
  const std::size_t m = net.num_species();
  if (r == 0) throw StructuralError("network has no reactions");

  std::vector<std::vector<Rat>> vecs(r, std::vector<Rat>(m));
  for (std::size_t i = 0; i < r; ++i) {
    CoefVec v = reaction_vector(net, net.reactions[i]);
    bool nonzero = false;
    for (std::size_t j = 0; j < m; ++j) {
      vecs[i][j] = v[j];
      nonzero |= v[j] != 0;
    }
    if (!nonzero)
      throw StructuralError("zero reaction vector for reaction " + net.reactions[i].label);
  }

  // incremental exact elimination in reaction order. Each basis row keeps its
  // reduced form together with an expansion of that reduced form over the
  // ORIGINAL basis reaction vectors, so every reaction's coordinates are over
  // the pivot reactions themselves (a basis reaction's representation is just
  // itself, never the triangular-factor coefficients).
  struct BasisRow {
    std::vector<Rat> reduced;
    std::map<int, Rat> expansion;  // reduced = sum expansion[b] * original_b
    int pivot_col = -1;
    int reaction = -1;
  };
  std::vector<BasisRow> basis;
  std::vector<std::vector<std::pair<int, Rat>>> coords(r);  // reaction -> (basis idx, coeff)

  for (std::size_t i = 0; i < r; ++i) {
    std::vector<Rat> row = vecs[i];
    std::map<int, Rat> combo;  // combination over original basis vectors
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const auto& br = basis[b];
      Rat f = row[br.pivot_col] / br.reduced[br.pivot_col];
      if (f == 0) continue;
      for (std::size_t j = 0; j < m; ++j) row[j] -= f * br.reduced[j];
      for (auto& [ob, c] : br.expansion) {
        combo[ob] += f * c;
        if (combo[ob] == 0) combo.erase(ob);
      }
    }
    int pc = -1;
    for (std::size_t j = 0; j < m; ++j)
      if (row[j] != 0) {
        pc = (int)j;
        break;
      }
    if (pc >= 0) {
      int k = (int)basis.size();
      BasisRow br;
      br.reduced = std::move(row);
      br.pivot_col = pc;
      br.reaction = (int)i;
      // reduced = original_k - combo
      br.expansion[k] = Rat(1);
      for (auto& [ob, c] : combo) br.expansion[ob] -= c;
      for (auto it = br.expansion.begin(); it != br.expansion.end();) {
        if (it->second == 0) it = br.expansion.erase(it);
        else ++it;
      }
      basis.push_back(std::move(br));
      coords[i] = {{k, Rat(1)}};
    } else {
      std::vector<std::pair<int, Rat>> rep(combo.begin(), combo.end());
      coords[i] = std::move(rep);
    }
  }

  // union-find over basis indices; each reaction's representation forms a clique
  std::vector<int> parent(basis.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = (int)i;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 1; k < coords[i].size(); ++k)
      parent[find(coords[i][k].first)] = find(coords[i][0].first);

  std::map<int, std::vector<int>> groups;  // root -> reactions
  for (std::size_t i = 0; i < r; ++i) groups[find(coords[i][0].first)].push_back((int)i);

  Decomposition dec;
  std::vector<std::vector<int>> parts;
  for (auto& [root, rs] : groups) parts.push_back(rs);
  std::sort(parts.begin(), parts.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              return a.front() < b.front();
            });
  dec.parts = std::move(parts);
  for (auto& part : dec.parts) dec.summaries.push_back(deficiency(net, part));
  dec.independent = is_independent(net, dec.parts);
  return dec;
}

std::vector<PartKinetics> restrict_kinetics(const KineticAssignment& kin,
                                            const Decomposition& dec) {
  std::vector<PartKinetics> out;
  for (auto& part : dec.parts) {
    PartKinetics pk;
    pk.reactions = part;
    pk.pure_mass_action = kin.all_mass_action(part);
    out.push_back(std::move(pk));
  }
  return out;
}

std::set<int> rate_law_species(const Network& net, const KineticAssignment& kin,
                               const std::vector<int>& ids) {
  std::set<int> out;
  std::map<SymId, int> conc_to_species;
  for (std::size_t i = 0; i < net.species.size(); ++i)
    conc_to_species[net.species[i].conc_sym] = (int)i;
  for (int id : ids) {
    for (SymId s : kin.rates.at(id).expr->symbols()) {
      auto it = conc_to_species.find(s);
      if (it != conc_to_species.end()) out.insert(it->second);
    }
  }
  return out;
}

MassActionUnion mass_action_union(const Network& net, const KineticAssignment& kin,
                                  const Decomposition& dec) {
  if (!dec.independent) throw StructuralError("mass_action_union requires an independent decomposition");
  MassActionUnion u;
  auto parts = restrict_kinetics(kin, dec);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    auto& bucket = parts[i].pure_mass_action ? u.pure_parts : u.mixed_parts;
    bucket.push_back((int)i);
    auto& rs = parts[i].pure_mass_action ? u.union_pure_reactions : u.union_mixed_reactions;
    rs.insert(rs.end(), parts[i].reactions.begin(), parts[i].reactions.end());
  }
  std::sort(u.union_pure_reactions.begin(), u.union_pure_reactions.end());
  std::sort(u.union_mixed_reactions.begin(), u.union_mixed_reactions.end());

  auto species_of = [&](const std::vector<int>& ids) {
    std::set<int> s = occurring_species(net, ids);
    auto rs = rate_law_species(net, kin, ids);
    s.insert(rs.begin(), rs.end());
    return s;
  };
  std::set<int> sm = species_of(u.union_pure_reactions);
  std::set<int> sc = species_of(u.union_mixed_reactions);
  u.mutually_exclusive = true;
  for (int s : sm)
    if (sc.count(s)) u.mutually_exclusive = false;
  return u;
}

} // namespace crn
