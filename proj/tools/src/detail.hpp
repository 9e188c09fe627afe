#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "trafficast/model_io.hpp"
#include "trafficast_cli/commands.hpp"

namespace trafficast::cli::detail {

nlohmann::json to_json(const TrainOptions& opts);
TrainOptions train_options_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SplitSizes& sizes);
nlohmann::json to_json(const EvalReport& report);

/// Everything eval needs to rebuild the preprocessing of a trained model.
ModelMetadata model_metadata(const TrainOptions& opts, const ScalerParams& scaler);
PipelineConfig pipeline_from_metadata(const ModelFile& model);
ScalerParams scaler_from_metadata(const ModelFile& model);

std::vector<std::size_t> parse_size_list(const std::string& text, const std::string& what);
std::string join(const std::vector<std::string>& items, char sep = ',');

}  // namespace trafficast::cli::detail
