#include "crn/pipeline.hpp"

#include <algorithm>

namespace crn {

namespace {

std::vector<int> directive_free_in(const Model& model, const std::set<int>& support) {
  std::vector<int> out;
  for (int s : model.free_species)
    if (support.count(s)) out.push_back(s);
  return out;
}

} // namespace

PipelineResult run_pipeline(const Model& model, const PipelineOptions& opts) {
  PipelineResult res;
  const Network& net = model.net;
  const KineticAssignment& kin = model.kin;
  res.summary = deficiency(net);

  try {
    res.decomposition = finest_independent_decomposition(net);
  } catch (const StructuralError& e) {
    res.errors.push_back(std::string("S1 decomposition: ") + e.what());
    return res;
  }
  auto part_kin = restrict_kinetics(kin, res.decomposition);
  res.mau = mass_action_union(net, kin, res.decomposition);

  std::set<int> claimed;  // species already dependent in an earlier part
  std::vector<Parametrization> for_merge;

  for (std::size_t pi = 0; pi < res.decomposition.parts.size(); ++pi) {
    PartOutcome out;
    out.index = (int)pi;
    out.reactions = res.decomposition.parts[pi];
    out.pure_mass_action = part_kin[pi].pure_mass_action;

    std::set<int> support = occurring_species(net, out.reactions);
    {
      auto extra = rate_law_species(net, kin, out.reactions);
      support.insert(extra.begin(), extra.end());
    }
    std::vector<int> prefer_free;
    for (int s : model.free_species)
      if (support.count(s)) prefer_free.push_back(s);
    std::vector<int> avoid(claimed.begin(), claimed.end());

    bool done = false;
    if (out.pure_mass_action) {
      // S2a: translate (directives bypass the search) and parametrize
      std::vector<CoefVec> shifts(out.reactions.size(), CoefVec(net.num_species(), 0));
      bool have_directives = false;
      for (std::size_t k = 0; k < out.reactions.size(); ++k) {
        auto it = model.translate_shifts.find(out.reactions[k]);
        if (it != model.translate_shifts.end()) {
          shifts[k] = it->second;
          shifts[k].resize(net.num_species(), 0);
          have_directives = true;
        }
      }
      std::optional<GeneralizedNetwork> g;
      if (have_directives) {
        try {
          g = translate(net, kin, out.reactions, shifts);
        } catch (const TranslationError& e) {
          out.notes.push_back(std::string("user translation rejected: ") + e.what());
        }
      } else {
        auto sr = search_translation(net, kin, out.reactions, opts.translation_budget);
        if (sr.found) {
          g = std::move(sr.gcrn);
        } else {
          out.notes.push_back("translation search: NotFound after " +
                              std::to_string(sr.candidates_tried) + " candidates");
        }
      }
      if (g) {
        try {
          double eq = check_dynamic_equivalence(net, kin, *g, 5, opts.seed);
          if (eq > 1e-9)
            throw TranslationError("dynamic equivalence residual " + std::to_string(eq));
          ParametrizeOptions popts;
          popts.prefer_free = prefer_free;
          popts.avoid_pivot = avoid;
          ParametrizeResult pr = parametrize(*g, kin, popts);
          out.effective = effective_structure(*g);
          out.kinetic = kinetic_structure(*g);
          out.system = std::move(pr.system);
          out.param = std::move(pr.param);
          out.gcrn = std::move(*g);
          out.method = "translation";
          done = true;
        } catch (const std::runtime_error& e) {
          out.notes.push_back(std::string("translation path failed: ") + e.what());
        }
      }
    }
    if (!done) {
      auto r = solve_by_elimination(net, kin, out.reactions, prefer_free, avoid);
      if (std::holds_alternative<Parametrization>(r)) {
        out.param = std::get<Parametrization>(std::move(r));
        out.method = "elimination";
        done = true;
      } else {
        out.method = "failed";
        out.error = std::get<Unsolvable>(r).reason;
      }
    }
    if (done) {
      out.residual =
          validate_parametrization(net, kin, out.reactions, out.param.exprs, opts.part_samples,
                                   std::max(opts.tol, 1e-9), opts.seed + (unsigned)pi + 1,
                                   opts.const_overrides);
      out.ok = out.residual.pass;
      if (!out.ok)
        out.error = "subnetwork parametrization failed residual check: " +
                    (out.residual.failure.empty()
                         ? "max residual " + std::to_string(out.residual.max_residual)
                         : out.residual.failure);
      for (auto& [sp, e] : out.param.exprs) claimed.insert(sp);
      for_merge.push_back(out.param);
    } else {
      res.method_inapplicable = true;
      res.errors.push_back("S2 subnetwork " + std::to_string(pi + 1) + ": " + out.error);
    }
    res.parts.push_back(std::move(out));
  }

  res.merge = merge_parametrizations(net, for_merge);
  if (res.merge.contradiction) {
    res.errors.push_back("S3 merge: " + res.merge.contradiction_message);
    res.method_inapplicable = true;
  }
  res.acr = acr_report(net, res.merge.merged);

  std::vector<int> all(net.num_reactions());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = (int)i;
  res.merged_residual =
      validate_parametrization(net, kin, all, res.merge.merged.exprs, opts.samples, opts.tol,
                               opts.seed, opts.const_overrides);

  bool parts_ok = true;
  for (auto& p : res.parts) parts_ok &= p.ok;
  res.ok = parts_ok && !res.merge.contradiction && res.merged_residual.pass &&
           res.errors.empty();
  if (!res.merged_residual.pass)
    res.errors.push_back("verification: merged parametrization failed residual check");
  return res;
}

} // namespace crn
