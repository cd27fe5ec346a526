#pragma once

#include "crn/mixedsolver.hpp"
#include "crn/pipeline.hpp"

#include <json.hpp>

#include <string>

namespace crn {

inline constexpr int kReportSchemaVersion = 1;

nlohmann::json analyze_report(const Model& model);
std::string analyze_text(const Model& model);

nlohmann::json decomposition_report(const Model& model, const Decomposition& dec);
std::string decomposition_text(const Model& model, const Decomposition& dec);

nlohmann::json pipeline_report(const Model& model, const PipelineResult& res);
std::string pipeline_text(const Model& model, const PipelineResult& res);

nlohmann::json cleared_report(const Model& model, const ClearedSystem& cs);
std::string cleared_text(const Model& model, const ClearedSystem& cs);

} // namespace crn
