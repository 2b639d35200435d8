#pragma once

#include "mcqbci/lda.hpp"

#include <json.hpp>

#include <filesystem>
#include <string_view>

namespace mcqbci {

std::string_view weighting_name(SbWeighting w) noexcept;
SbWeighting parse_weighting(std::string_view text);

nlohmann::json model_to_json(const LdaModel& model);
LdaModel model_from_json(const nlohmann::json& doc);
LdaModel load_model(const std::filesystem::path& path);
void save_model(const LdaModel& model, const std::filesystem::path& path);

// {"class_labels": [...], "feature_dim": d, "labels": [label, ...], "vectors": [[...], ...]}
nlohmann::json dataset_to_json(const LabeledDataset& data);
LabeledDataset dataset_from_json(const nlohmann::json& doc);
LabeledDataset load_dataset(const std::filesystem::path& path);
void save_dataset(const LabeledDataset& data, const std::filesystem::path& path);

}  // namespace mcqbci
