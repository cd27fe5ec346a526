#include "crn/report.hpp"

#include <sstream>

namespace crn {

using nlohmann::json;

namespace {

json summary_json(const StructuralSummary& s) {
  return json{{"species", s.m},
              {"reactions", s.r},
              {"complexes", s.n},
              {"linkage_classes", s.ell},
              {"rank", s.s},
              {"deficiency", s.delta},
              {"weakly_reversible", s.weakly_reversible}};
}

json residual_json(const ResidualReport& r) {
  return json{{"seed", r.seed},
              {"samples", r.samples},
              {"tol", r.tol},
              {"max_residual", r.max_residual},
              {"median_residual", r.median_residual},
              {"pass", r.pass},
              {"worst_sample", r.worst_sample},
              {"failure", r.failure}};
}

std::vector<std::string> labels_of(const Network& net, const std::vector<int>& ids) {
  std::vector<std::string> out;
  for (int id : ids) out.push_back(net.reactions.at(id).label);
  return out;
}

json param_json(const Model& model, const Parametrization& p) {
  const Network& net = model.net;
  json exprs = json::object();
  for (auto& [sp, e] : p.exprs)
    exprs[net.species[sp].name] = to_string(e, *net.symbols);
  json free_sp = json::array();
  for (int f : p.free_species) free_sp.push_back(net.species[f].name);
  json free_sym = json::array();
  for (SymId s : p.free_symbols) free_sym.push_back(net.symbols->name(s));
  json sig = json::object();
  for (auto& [s, e] : p.sigma_defs) sig[net.symbols->name(s)] = to_string(e, *net.symbols);
  return json{{"method", p.method},
              {"expressions", exprs},
              {"free_species", free_sp},
              {"free_symbols", free_sym},
              {"sigma_definitions", sig},
              {"notes", p.notes}};
}

} // namespace

json analyze_report(const Model& model) {
  const Network& net = model.net;
  StructuralSummary s = deficiency(net);
  json species = json::array();
  for (auto& sp : net.species) species.push_back(sp.name);
  json complexes = json::array();
  for (auto& c : net.complexes) complexes.push_back(complex_to_string(net, c.coeffs));
  json reactions = json::array();
  int ma = 0, pl = 0, ra = 0, ot = 0;
  for (std::size_t i = 0; i < net.reactions.size(); ++i) {
    const auto& r = net.reactions[i];
    const auto& k = model.kin.rates[i];
    switch (k.tag) {
      case KineticsTag::MassAction: ++ma; break;
      case KineticsTag::PowerLaw: ++pl; break;
      case KineticsTag::Rational: ++ra; break;
      case KineticsTag::Other: ++ot; break;
    }
    reactions.push_back(json{{"label", r.label},
                             {"source", complex_to_string(net, net.complexes[r.source].coeffs)},
                             {"product", complex_to_string(net, net.complexes[r.product].coeffs)},
                             {"rate", to_string(k.expr, *net.symbols)},
                             {"kinetics", to_string(k.tag)}});
  }
  return json{{"schema_version", kReportSchemaVersion},
              {"kind", "analyze"},
              {"summary", summary_json(s)},
              {"species", species},
              {"complexes", complexes},
              {"reactions", reactions},
              {"kinetics_counts",
               json{{"mass_action", ma}, {"power_law", pl}, {"rational", ra}, {"other", ot}}}};
}

std::string analyze_text(const Model& model) {
  StructuralSummary s = deficiency(model.net);
  std::ostringstream os;
  os << "species (m)           " << s.m << "\n"
     << "reactions (r)         " << s.r << "\n"
     << "complexes (n)         " << s.n << "\n"
     << "linkage classes (l)   " << s.ell << "\n"
     << "rank (s)              " << s.s << "\n"
     << "deficiency (delta)    " << s.delta << "\n"
     << "weakly reversible     " << (s.weakly_reversible ? "yes" : "no") << "\n";
  return os.str();
}

json decomposition_report(const Model& model, const Decomposition& dec) {
  const Network& net = model.net;
  json parts = json::array();
  auto pk = restrict_kinetics(model.kin, dec);
  for (std::size_t i = 0; i < dec.parts.size(); ++i) {
    parts.push_back(json{{"reactions", labels_of(net, dec.parts[i])},
                         {"summary", summary_json(dec.summaries[i])},
                         {"pure_mass_action", pk[i].pure_mass_action}});
  }
  return json{{"schema_version", kReportSchemaVersion},
              {"kind", "decompose"},
              {"independent", dec.independent},
              {"part_count", dec.parts.size()},
              {"parts", parts}};
}

std::string decomposition_text(const Model& model, const Decomposition& dec) {
  std::ostringstream os;
  auto pk = restrict_kinetics(model.kin, dec);
  os << dec.parts.size() << " independent subnetwork(s); rank additivity "
     << (dec.independent ? "holds" : "FAILS") << "\n";
  for (std::size_t i = 0; i < dec.parts.size(); ++i) {
    os << "  N" << i + 1 << " [" << (pk[i].pure_mass_action ? "mass-action" : "mixed") << "]";
    for (int id : dec.parts[i]) os << " " << model.net.reactions[id].label;
    const auto& s = dec.summaries[i];
    os << "  (n=" << s.n << " l=" << s.ell << " s=" << s.s << " delta=" << s.delta << ")\n";
  }
  return os.str();
}

json pipeline_report(const Model& model, const PipelineResult& res) {
  const Network& net = model.net;
  json parts = json::array();
  for (auto& p : res.parts) {
    json pj{{"reactions", labels_of(net, p.reactions)},
            {"pure_mass_action", p.pure_mass_action},
            {"method", p.method},
            {"ok", p.ok},
            {"notes", p.notes},
            {"parametrization", param_json(model, p.param)}};
    if (!p.error.empty()) pj["error"] = p.error;
    if (p.effective) pj["effective_deficiency"] = p.effective->delta;
    if (p.kinetic) pj["kinetic_deficiency"] = p.kinetic->delta;
    if (p.gcrn) {
      json shifts = json::object();
      for (std::size_t k = 0; k < p.gcrn->reaction_ids.size(); ++k) {
        bool nz = false;
        for (auto v : p.gcrn->shifts[k]) nz |= v != 0;
        if (nz)
          shifts[net.reactions[p.gcrn->reaction_ids[k]].label] =
              complex_to_string(net, p.gcrn->shifts[k]);
      }
      pj["shifts"] = shifts;
    }
    parts.push_back(std::move(pj));
  }
  json acr = json::object();
  for (auto& [sp, flag] : res.acr) acr[net.species[sp].name] = flag;
  json constraints = json::array();
  for (auto& c : res.merge.constraints) {
    std::string res_str;
    switch (c.resolution) {
      case MergeConstraint::Resolution::SolvedSymbol: res_str = "solved"; break;
      case MergeConstraint::Resolution::Residual: res_str = "residual"; break;
      case MergeConstraint::Resolution::Contradiction: res_str = "contradiction"; break;
      case MergeConstraint::Resolution::Consistent: res_str = "consistent"; break;
    }
    json cj{{"species", net.species[c.species].name},
            {"lhs", to_string(c.lhs, *net.symbols)},
            {"rhs", to_string(c.rhs, *net.symbols)},
            {"resolution", res_str}};
    if (c.solved_symbol != kNoSym) cj["solved_symbol"] = net.symbols->name(c.solved_symbol);
    constraints.push_back(std::move(cj));
  }
  return json{{"schema_version", kReportSchemaVersion},
              {"kind", "pipeline"},
              {"summary", summary_json(res.summary)},
              {"decomposition", decomposition_report(model, res.decomposition)},
              {"mass_action_union",
               json{{"pure_parts", res.mau.pure_parts},
                    {"mixed_parts", res.mau.mixed_parts},
                    {"mutually_exclusive", res.mau.mutually_exclusive}}},
              {"parts", parts},
              {"merged", param_json(model, res.merge.merged)},
              {"merge_constraints", constraints},
              {"acr", acr},
              {"residuals",
               json{{"merged", residual_json(res.merged_residual)}}},
              {"ok", res.ok},
              {"errors", res.errors}};
}

std::string pipeline_text(const Model& model, const PipelineResult& res) {
  const Network& net = model.net;
  std::ostringstream os;
  os << "== structure ==\n" << analyze_text(model);
  os << "== S1 decomposition ==\n" << decomposition_text(model, res.decomposition);
  os << "mass-action union mutually exclusive with complement: "
     << (res.mau.mutually_exclusive ? "yes" : "no") << "\n";
  os << "== S2 subnetworks ==\n";
  for (std::size_t i = 0; i < res.parts.size(); ++i) {
    const auto& p = res.parts[i];
    os << "N" << i + 1 << " (" << p.method << ")";
    if (p.effective) os << " eff.deficiency=" << p.effective->delta;
    if (p.kinetic) os << " kin.deficiency=" << p.kinetic->delta;
    if (!p.error.empty()) os << "  ERROR: " << p.error;
    os << "\n";
    for (auto& [sp, e] : p.param.exprs)
      os << "    " << net.species[sp].name << " = " << to_string(e, *net.symbols) << "\n";
    if (!p.param.free_species.empty()) {
      os << "    free:";
      for (int f : p.param.free_species) os << " " << net.species[f].name;
      os << "\n";
    }
  }
  os << "== S3 merged steady state ==\n";
  for (auto& [sp, e] : res.merge.merged.exprs)
    os << "  " << net.species[sp].name << " = " << to_string(e, *net.symbols) << "\n";
  os << "  free parameters:";
  for (int f : res.merge.merged.free_species) os << " " << net.species[f].name;
  for (SymId s : res.merge.merged.free_symbols) os << " " << net.symbols->name(s);
  os << "\n== ACR ==\n";
  bool any = false;
  for (auto& [sp, flag] : res.acr)
    if (flag) {
      os << "  ACR in " << net.species[sp].name << "\n";
      any = true;
    }
  if (!any) os << "  no species has absolute concentration robustness\n";
  os << "== verification ==\n  merged: max residual " << res.merged_residual.max_residual
     << " over " << res.merged_residual.samples << " samples (tol " << res.merged_residual.tol
     << ", seed " << res.merged_residual.seed << ") -> "
     << (res.merged_residual.pass ? "PASS" : "FAIL") << "\n";
  if (!res.errors.empty()) {
    os << "== errors ==\n";
    for (auto& e : res.errors) os << "  " << e << "\n";
  }
  return os.str();
}

json cleared_report(const Model& model, const ClearedSystem& cs) {
  const Network& dnet = cs.derived.net;
  json reactions = json::array();
  for (std::size_t i = 0; i < dnet.reactions.size(); ++i) {
    const auto& r = dnet.reactions[i];
    reactions.push_back(json{{"label", r.label},
                             {"source", complex_to_string(dnet, dnet.complexes[r.source].coeffs)},
                             {"product", complex_to_string(dnet, dnet.complexes[r.product].coeffs)},
                             {"rate", to_string(cs.derived.kin.rates[i].expr, *dnet.symbols)}});
  }
  json subs = json::object();
  for (auto& [sym, def] : cs.substitutions)
    subs[dnet.symbols->name(sym)] = to_string(def, *dnet.symbols);
  return json{{"schema_version", kReportSchemaVersion},
              {"kind", "transform"},
              {"denominator", cs.denominator.str(*dnet.symbols)},
              {"reactions", reactions},
              {"substitutions", subs}};
}

std::string cleared_text(const Model& model, const ClearedSystem& cs) {
  std::ostringstream os;
  const Network& dnet = cs.derived.net;
  os << "shared denominator: " << cs.denominator.str(*dnet.symbols) << "\n";
  os << "associated mass-action system:\n";
  for (std::size_t i = 0; i < dnet.reactions.size(); ++i) {
    const auto& r = dnet.reactions[i];
    os << "  " << r.label << ": " << complex_to_string(dnet, dnet.complexes[r.source].coeffs)
       << " -> " << complex_to_string(dnet, dnet.complexes[r.product].coeffs) << " ; "
       << to_string(cs.derived.kin.rates[i].expr, *dnet.symbols) << "\n";
  }
  if (!cs.substitutions.empty()) {
    os << "composite rate constants:\n";
    for (auto& [sym, def] : cs.substitutions)
      os << "  " << dnet.symbols->name(sym) << " = " << to_string(def, *dnet.symbols) << "\n";
  }
  return os.str();
}

} // namespace crn
