#pragma once

#include "metro/experiment.hpp"
#include "metro/metric.hpp"
#include "metro/model.hpp"
#include "metro/oracle.hpp"
#include "metro/search.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace metro {

using Json = nlohmann::ordered_json;

Json to_json(const MetricSpec& spec);

/// A preset string, or {"alpha": [...], "beta": [...], "name"?} (also
/// {"preset": "..."}). Explicit specs are sign-normalized by the caller.
MetricSpec metric_from_json(const nlohmann::json& j,
                            std::optional<double> train_positive_rate = std::nullopt);

/// Command-line form: JSON text when it starts with '{', otherwise a preset.
MetricSpec parse_metric_arg(const std::string& text,
                            std::optional<double> train_positive_rate = std::nullopt);

Json to_json(const Model& model);
Model model_from_json(const nlohmann::json& j);

Json to_json(const TraceRecord& r);
/// One JSON object per line.
std::string trace_to_jsonl(const SearchTrace& trace);

Json to_json(const ConfusionCounts& c);
Json to_json(const EvalReport& report, bool include_wall_time = true);

Json to_json(const VerificationReport& report);

}  // namespace metro
