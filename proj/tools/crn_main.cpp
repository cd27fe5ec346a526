#include "crn/pipeline.hpp"
#include "crn/report.hpp"
#include "crn/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitInput = 2;
constexpr int kExitInapplicable = 3;

struct CommonArgs {
  std::string file;
  bool json = false;
  unsigned seed = 20240817;
  int samples = 100;
  double tol = 1e-9;
  std::vector<std::string> consts;
};

std::map<std::string, double> parse_consts(const std::vector<std::string>& kvs, int& rc) {
  std::map<std::string, double> out;
  for (auto& kv : kvs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --const expects name=value, got '" << kv << "'\n";
      rc = kExitInput;
      continue;
    }
    try {
      out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (...) {
      std::cerr << "error: bad numeric value in --const '" << kv << "'\n";
      rc = kExitInput;
    }
  }
  return out;
}

int load_model(const std::string& path, crn::Model& model) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open '" << path << "'\n";
    return kExitInput;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  auto res = crn::parse_network(ss.str());
  for (auto& d : res.diagnostics) std::cerr << path << ": " << crn::format_diagnostic(d) << "\n";
  if (!res.ok()) return kExitInput;
  model = std::move(*res.model);
  return kExitOk;
}

void emit(bool as_json, const nlohmann::json& j, const std::string& text) {
  if (as_json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"steady-state analysis of reaction networks with mixed kinetics"};
  app.require_subcommand(1);

  CommonArgs a;
  int part_index = 0;
  bool clear_first = false;
  std::string params_path;

  auto add_common = [&](CLI::App* cmd, bool with_harness) {
    cmd->add_option("file", a.file, "input .crn file")->required();
    cmd->add_flag("--json", a.json, "emit a JSON report");
    if (with_harness) {
      cmd->add_option("--seed", a.seed, "harness seed (default printed in reports)");
      cmd->add_option("--samples", a.samples, "number of residual samples");
      cmd->add_option("--tol", a.tol, "relative residual tolerance");
      cmd->add_option("--const", a.consts, "named-constant binding name=value");
    }
  };

  auto* c_analyze = app.add_subcommand("analyze", "structural indices");
  add_common(c_analyze, false);
  auto* c_decompose = app.add_subcommand("decompose", "finest independent decomposition (S1)");
  add_common(c_decompose, false);
  auto* c_translate = app.add_subcommand("translate", "translated networks with deficiencies");
  add_common(c_translate, false);
  c_translate->add_option("--part", part_index, "1-based subnetwork index (default: all)");
  auto* c_param = app.add_subcommand("parametrize", "parametrize one subnetwork");
  add_common(c_param, true);
  c_param->add_option("--part", part_index, "1-based subnetwork index (default: all)");
  auto* c_pipe = app.add_subcommand("pipeline", "full S1-S3 pipeline with verification");
  add_common(c_pipe, true);
  c_pipe->add_flag("--clear-denominators", clear_first,
                   "transform to the associated mass-action system first");
  auto* c_verify = app.add_subcommand("verify", "residual harness on a parametrization file");
  add_common(c_verify, true);
  c_verify->add_option("--params", params_path, "file with 'species = expr' lines")->required();
  auto* c_transform = app.add_subcommand("transform", "denominator clearing only");
  add_common(c_transform, false);

  CLI11_PARSE(app, argc, argv);

  int rc = kExitOk;
  auto consts = parse_consts(a.consts, rc);
  if (rc != kExitOk) return rc;

  crn::Model model;
  if (int r = load_model(a.file, model); r != kExitOk) return r;

  try {
    if (c_analyze->parsed()) {
      emit(a.json, crn::analyze_report(model), crn::analyze_text(model));
      return kExitOk;
    }

    if (c_decompose->parsed()) {
      auto dec = crn::finest_independent_decomposition(model.net);
      emit(a.json, crn::decomposition_report(model, dec),
           crn::decomposition_text(model, dec));
      return kExitOk;
    }

    if (c_translate->parsed()) {
      auto dec = crn::finest_independent_decomposition(model.net);
      int from = part_index > 0 ? part_index : 1;
      int to = part_index > 0 ? part_index : (int)dec.parts.size();
      if (from < 1 || from > (int)dec.parts.size()) {
        std::cerr << "error: no subnetwork " << part_index << "\n";
        return kExitInput;
      }
      bool any_missing = false;
      for (int p = from; p <= to; ++p) {
        const auto& ids = dec.parts[p - 1];
        std::vector<crn::CoefVec> shifts(ids.size(),
                                         crn::CoefVec(model.net.num_species(), 0));
        bool have = false;
        for (std::size_t k = 0; k < ids.size(); ++k) {
          auto it = model.translate_shifts.find(ids[k]);
          if (it != model.translate_shifts.end()) {
            shifts[k] = it->second;
            shifts[k].resize(model.net.num_species(), 0);
            have = true;
          }
        }
        std::optional<crn::GeneralizedNetwork> g;
        if (have) {
          g = crn::translate(model.net, model.kin, ids, shifts);
        } else {
          auto sr = crn::search_translation(model.net, model.kin, ids);
          if (sr.found) g = std::move(sr.gcrn);
        }
        std::cout << "subnetwork " << p << ":\n";
        if (!g) {
          std::cout << "  no weakly reversible deficiency-zero translation found\n";
          any_missing = true;
          continue;
        }
        std::cout << g->describe(*model.net.symbols);
        std::cout << "  effective deficiency " << crn::effective_deficiency(*g)
                  << ", kinetic deficiency "
                  << (g->all_sources() ? std::to_string(crn::kinetic_deficiency(*g)) : "n/a")
                  << ", weakly reversible " << (crn::weakly_reversible(*g) ? "yes" : "no")
                  << "\n";
      }
      return any_missing ? kExitInapplicable : kExitOk;
    }

    if (c_param->parsed() || c_pipe->parsed()) {
      crn::PipelineOptions opts;
      opts.seed = a.seed;
      opts.samples = a.samples;
      opts.tol = a.tol;
      opts.const_overrides = consts;

      crn::Model* target = &model;
      crn::Model derived_model;
      std::optional<crn::ClearedSystem> cleared;
      if (c_pipe->parsed() && clear_first) {
        auto r = crn::clear_denominators(model.net, model.kin);
        if (std::holds_alternative<crn::Inapplicable>(r)) {
          std::cerr << "transform inapplicable: " << std::get<crn::Inapplicable>(r).reason
                    << "\n";
          return kExitInapplicable;
        }
        cleared = std::get<crn::ClearedSystem>(std::move(r));
        derived_model = cleared->derived;
        derived_model.free_species = model.free_species;
        target = &derived_model;
        std::cout << crn::cleared_text(model, *cleared);
      }

      auto res = crn::run_pipeline(*target, opts);

      if (c_param->parsed() && part_index > 0) {
        if (part_index > (int)res.parts.size()) {
          std::cerr << "error: no subnetwork " << part_index << "\n";
          return kExitInput;
        }
        const auto& p = res.parts[part_index - 1];
        std::cout << "subnetwork " << part_index << " (" << p.method << ")\n";
        for (auto& [sp, e] : p.param.exprs)
          std::cout << "  " << model.net.species[sp].name << " = "
                    << crn::to_string(e, *model.net.symbols) << "\n";
        std::cout << "  free:";
        for (int f : p.param.free_species) std::cout << " " << model.net.species[f].name;
        for (auto s : p.param.free_symbols) std::cout << " " << model.net.symbols->name(s);
        std::cout << "\n  residual: " << p.residual.max_residual
                  << (p.ok ? " PASS" : " FAIL") << "\n";
        if (!p.error.empty()) {
          std::cerr << "error: " << p.error << "\n";
          return kExitInapplicable;
        }
        return p.ok ? kExitOk : kExitVerification;
      }

      emit(a.json, crn::pipeline_report(*target, res), crn::pipeline_text(*target, res));

      // when the pipeline ran on the cleared system, check its merged
      // parametrization against the original rational ODEs too
      bool original_ok = true;
      if (cleared) {
        std::map<int, crn::ExprPtr> exprs = res.merge.merged.exprs;
        std::unordered_map<crn::SymId, crn::ExprPtr> subs(cleared->substitutions.begin(),
                                                          cleared->substitutions.end());
        for (auto& [sp, e] : exprs) e = crn::substitute(e, subs);
        std::vector<int> all((int)model.net.num_reactions());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = (int)i;
        auto hr = crn::residual_harness(model.net, model.kin, all, exprs, opts.seed,
                                        opts.samples, opts.tol, consts);
        std::cout << "original-system check: " << hr.rendered << "\n";
        original_ok = hr.report.pass;
      }

      if (res.method_inapplicable) return kExitInapplicable;
      if (!res.ok || !original_ok) return kExitVerification;
      return kExitOk;
    }

    if (c_verify->parsed()) {
      std::ifstream in(params_path, std::ios::binary);
      if (!in) {
        std::cerr << "error: cannot open '" << params_path << "'\n";
        return kExitInput;
      }
      std::stringstream ss;
      ss << in.rdbuf();
      auto pr = crn::parse_param_file(ss.str(), model);
      for (auto& d : pr.diagnostics)
        std::cerr << params_path << ": " << crn::format_diagnostic(d) << "\n";
      if (!pr.file) return kExitInput;
      std::map<int, crn::ExprPtr> exprs;
      for (auto& [name, e] : pr.file->entries) {
        int sp = model.net.species_index(name);
        if (sp < 0) {
          for (std::size_t i = 0; i < model.net.species.size(); ++i) {
            std::string lowered = model.net.species[i].name;
            for (auto& ch : lowered) ch = (char)std::tolower((unsigned char)ch);
            if (lowered == name) sp = (int)i;
          }
        }
        if (sp < 0) {
          std::cerr << "error: parametrization entry for unknown species '" << name << "'\n";
          return kExitInput;
        }
        exprs[sp] = e;
      }
      std::vector<int> all((int)model.net.num_reactions());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = (int)i;
      auto hr = crn::residual_harness(model.net, model.kin, all, exprs, a.seed, a.samples,
                                      a.tol, consts);
      std::cout << hr.rendered << "\n";
      return hr.report.pass ? kExitOk : kExitVerification;
    }

    if (c_transform->parsed()) {
      auto r = crn::clear_denominators(model.net, model.kin);
      if (std::holds_alternative<crn::Inapplicable>(r)) {
        std::cerr << "transform inapplicable: " << std::get<crn::Inapplicable>(r).reason << "\n";
        return kExitInapplicable;
      }
      const auto& cs = std::get<crn::ClearedSystem>(r);
      emit(a.json, crn::cleared_report(model, cs), crn::cleared_text(model, cs));
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInapplicable;
  }
  return kExitOk;
}
