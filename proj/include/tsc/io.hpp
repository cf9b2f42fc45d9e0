#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "tsc/types.hpp"

namespace tsc {

/// Dense matrix as CSV, one row per line, values printed with 17 significant
/// digits so doubles round-trip exactly.
void write_matrix_csv(const Matrix& mat, const std::string& path);
Matrix read_matrix_csv(const std::string& path);

/// Sidecar label file, one integer per line.
void write_labels(const std::vector<int>& labels, const std::string& path);
std::vector<int> read_labels(const std::string& path);

void write_points_csv(const DataSet& data, const std::string& path);
DataSet read_points_csv(const std::string& points_path, const std::string& labels_path = "");

/// Single JSON document embedding points, labels, and (optionally) the model
/// the dataset was generated from.
void write_dataset_json(const DataSet& data, const SyntheticModel* model, const std::string& path);
DataSet read_dataset_json(const std::string& path, SyntheticModel* model_out = nullptr);

nlohmann::json model_to_json(const SyntheticModel& model);

/// Accepts the serialized form (explicit "bases" arrays) or the compact form
/// where "basis_spec": {"m", "dims", "seed"} generates the bases on load.
SyntheticModel model_from_json(const nlohmann::json& j);

SyntheticModel read_model_json(const std::string& path);
void write_model_json(const SyntheticModel& model, const std::string& path);

}  // namespace tsc
