#pragma once

#include "crn/decomposition.hpp"
#include "crn/dsl.hpp"
#include "crn/merge.hpp"
#include "crn/mixedsolver.hpp"
#include "crn/translation.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace crn {

struct PipelineOptions {
  unsigned seed = 20240817;
  int samples = 100;
  double tol = 1e-9;
  int part_samples = 30;
  long long translation_budget = 2;
  std::map<std::string, double> const_overrides;
};

struct PartOutcome {
  int index = 0;
  std::vector<int> reactions;
  bool pure_mass_action = false;
  std::string method;  // "translation" | "elimination" | "failed"
  std::string error;
  std::vector<std::string> notes;
  std::optional<GeneralizedNetwork> gcrn;
  std::optional<ParamSystem> system;
  std::optional<StructuralSummary> effective, kinetic;
  Parametrization param;
  ResidualReport residual;
  bool ok = false;
};

struct PipelineResult {
  StructuralSummary summary;
  Decomposition decomposition;
  MassActionUnion mau;
  std::vector<PartOutcome> parts;
  MergeResult merge;
  std::map<int, bool> acr;
  ResidualReport merged_residual;
  bool ok = false;
  bool method_inapplicable = false;
  std::vector<std::string> errors;
};

PipelineResult run_pipeline(const Model& model, const PipelineOptions& opts = {});

} // namespace crn
