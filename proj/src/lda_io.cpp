#include "mcqbci/lda_io.hpp"

#include "mcqbci/recording_io.hpp"

namespace mcqbci {

using nlohmann::json;

std::string_view weighting_name(SbWeighting w) noexcept {
  return w == SbWeighting::count_weighted ? "count_weighted" : "paper_unweighted";
}

SbWeighting parse_weighting(std::string_view text) {
  if (text == "paper_unweighted") return SbWeighting::paper_unweighted;
  if (text == "count_weighted") return SbWeighting::count_weighted;
  throw Error(Errc::ConfigError, "sb_weighting must be paper_unweighted or count_weighted, got '" +
                                     std::string(text) + "'");
}

namespace {

json vector_json(const Eigen::VectorXd& v) { return json(std::vector<double>(v.begin(), v.end())); }

Eigen::VectorXd vector_from(const json& v, const std::string& path) {
  if (!v.is_array()) throw Error(Errc::SchemaError, path + " must be an array");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw Error(Errc::SchemaError, path + "[" + std::to_string(i) + "] must be a number");
    out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
  }
  return out;
}

const json& field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw Error(Errc::SchemaError, std::string("missing field ") + key);
  return doc.at(key);
}

std::vector<std::string> string_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw Error(Errc::SchemaError, path + " must be an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) throw Error(Errc::SchemaError, path + "[" + std::to_string(i) + "] must be a string");
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

}  // namespace

json model_to_json(const LdaModel& model) {
  json doc;
  json projection = json::array();
  for (Eigen::Index j = 0; j < model.projection.cols(); ++j) projection.push_back(vector_json(model.projection.col(j)));
  doc["projection"] = std::move(projection);
  doc["bias"] = model.bias;
  doc["shrinkage_used"] = model.shrinkage_used;
  doc["sb_weighting"] = std::string(weighting_name(model.sb_weighting));
  doc["feature_dim"] = model.feature_dim();
  doc["class_labels"] = model.class_labels;
  json projected = json::array();
  for (const auto& m : model.class_means_projected) projected.push_back(vector_json(m));
  doc["class_means_projected"] = std::move(projected);
  return doc;
}

LdaModel model_from_json(const json& doc) {
  LdaModel model;
  const auto& projection = field(doc, "projection");
  const auto& dim_field = field(doc, "feature_dim");
  if (!dim_field.is_number_integer() || dim_field.get<std::int64_t>() < 1)
    throw Error(Errc::SchemaError, "feature_dim must be a positive integer");
  const auto dim = dim_field.get<Eigen::Index>();
  if (!projection.is_array() || projection.empty())
    throw Error(Errc::SchemaError, "projection must be a nonempty array");
  model.projection.resize(dim, static_cast<Eigen::Index>(projection.size()));
  for (std::size_t j = 0; j < projection.size(); ++j) {
    const auto col = vector_from(projection[j], "projection[" + std::to_string(j) + "]");
    if (col.size() != dim) throw Error(Errc::SchemaError, "projection[" + std::to_string(j) + "] length != feature_dim");
    model.projection.col(static_cast<Eigen::Index>(j)) = col;
  }
  const auto& bias = field(doc, "bias");
  if (!bias.is_number()) throw Error(Errc::SchemaError, "bias must be a number");
  model.bias = bias.get<double>();
  const auto& shrink = field(doc, "shrinkage_used");
  if (!shrink.is_number()) throw Error(Errc::SchemaError, "shrinkage_used must be a number");
  model.shrinkage_used = shrink.get<double>();
  const auto& weighting = field(doc, "sb_weighting");
  if (!weighting.is_string()) throw Error(Errc::SchemaError, "sb_weighting must be a string");
  try {
    model.sb_weighting = parse_weighting(weighting.get<std::string>());
  } catch (const Error& e) {
    throw Error(Errc::SchemaError, e.what());
  }
  model.class_labels = string_list(field(doc, "class_labels"), "class_labels");
  const auto& projected = field(doc, "class_means_projected");
  if (!projected.is_array() || projected.size() != model.class_labels.size())
    throw Error(Errc::SchemaError, "class_means_projected must have one entry per class");
  for (std::size_t c = 0; c < projected.size(); ++c)
    model.class_means_projected.push_back(vector_from(projected[c], "class_means_projected[" + std::to_string(c) + "]"));
  return model;
}

LdaModel load_model(const std::filesystem::path& path) { return model_from_json(read_json_file(path)); }

void save_model(const LdaModel& model, const std::filesystem::path& path) {
  write_json_file(model_to_json(model), path);
}

json dataset_to_json(const LabeledDataset& data) {
  json doc;
  doc["class_labels"] = data.class_labels;
  doc["feature_dim"] = data.dim();
  json labels = json::array();
  for (int l : data.labels) labels.push_back(data.class_labels[static_cast<std::size_t>(l)]);
  doc["labels"] = std::move(labels);
  json vectors = json::array();
  for (Eigen::Index k = 0; k < data.size(); ++k) vectors.push_back(vector_json(data.samples.row(k).transpose()));
  doc["vectors"] = std::move(vectors);
  return doc;
}

LabeledDataset dataset_from_json(const json& doc) {
  LabeledDataset data;
  data.class_labels = string_list(field(doc, "class_labels"), "class_labels");
  const auto& dim_field = field(doc, "feature_dim");
  if (!dim_field.is_number_integer()) throw Error(Errc::SchemaError, "feature_dim must be an integer");
  const auto dim = dim_field.get<Eigen::Index>();
  const auto labels = string_list(field(doc, "labels"), "labels");
  const auto& vectors = field(doc, "vectors");
  if (!vectors.is_array() || vectors.size() != labels.size())
    throw Error(Errc::SchemaError, "vectors must be an array with one entry per label");
  data.samples.resize(static_cast<Eigen::Index>(vectors.size()), dim);
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    const auto v = vector_from(vectors[k], "vectors[" + std::to_string(k) + "]");
    if (v.size() != dim) throw Error(Errc::SchemaError, "vectors[" + std::to_string(k) + "] length != feature_dim");
    data.samples.row(static_cast<Eigen::Index>(k)) = v.transpose();
    const auto it = std::find(data.class_labels.begin(), data.class_labels.end(), labels[k]);
    if (it == data.class_labels.end())
      throw Error(Errc::SchemaError, "labels[" + std::to_string(k) + "] is not a declared class");
    data.labels.push_back(static_cast<int>(it - data.class_labels.begin()));
  }
  return data;
}

LabeledDataset load_dataset(const std::filesystem::path& path) { return dataset_from_json(read_json_file(path)); }

void save_dataset(const LabeledDataset& data, const std::filesystem::path& path) {
  write_json_file(dataset_to_json(data), path);
}

}  // namespace mcqbci
