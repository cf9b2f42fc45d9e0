#include "tsc/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tsc/synthgen.hpp"

namespace tsc {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return in;
}

Matrix matrix_from_json(const nlohmann::json& j) {
    const auto rows = j.size();
    if (rows == 0) return Matrix(0, 0);
    const auto cols = j.at(0).size();
    Matrix mat(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const auto& row = j.at(i);
        if (row.size() != cols) throw std::runtime_error("ragged matrix in JSON");
        for (std::size_t k = 0; k < cols; ++k) mat(i, k) = row.at(k).get<double>();
    }
    return mat;
}

nlohmann::json matrix_to_json(const Matrix& mat) {
    nlohmann::json j = nlohmann::json::array();
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index k = 0; k < mat.cols(); ++k) row.push_back(mat(i, k));
        j.push_back(std::move(row));
    }
    return j;
}

}  // namespace

void write_matrix_csv(const Matrix& mat, const std::string& path) {
    auto out = open_out(path);
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
        for (Eigen::Index k = 0; k < mat.cols(); ++k) {
            if (k) out << ',';
            out << format_double(mat(i, k));
        }
        out << '\n';
    }
}

Matrix read_matrix_csv(const std::string& path) {
    auto in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("ragged CSV row in " + path);
        rows.push_back(std::move(row));
    }
    Matrix mat(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = 0; k < rows[i].size(); ++k) mat(i, k) = rows[i][k];
    return mat;
}

void write_labels(const std::vector<int>& labels, const std::string& path) {
    auto out = open_out(path);
    for (int v : labels) out << v << '\n';
}

std::vector<int> read_labels(const std::string& path) {
    auto in = open_in(path);
    std::vector<int> labels;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        labels.push_back(std::stoi(line));
    }
    return labels;
}

void write_points_csv(const DataSet& data, const std::string& path) {
    write_matrix_csv(data.points, path);
}

DataSet read_points_csv(const std::string& points_path, const std::string& labels_path) {
    DataSet data;
    data.points = read_matrix_csv(points_path);
    if (!labels_path.empty()) data.labels = read_labels(labels_path);
    data.validate();
    return data;
}

nlohmann::json model_to_json(const SyntheticModel& model) {
    nlohmann::json j;
    j["bases"] = nlohmann::json::array();
    for (const auto& b : model.bases) j["bases"].push_back(matrix_to_json(b.basis));
    j["counts"] = model.counts;
    j["noise_sigma2"] = model.noise_sigma2;
    j["num_outliers"] = model.num_outliers;
    j["inlier_scaling"] = model.scaling == InlierScaling::unit_energy ? "unit_energy" : "none";
    j["seed"] = model.seed;
    return j;
}

SyntheticModel model_from_json(const nlohmann::json& j) {
    SyntheticModel model;
    if (j.contains("bases")) {
        for (const auto& bj : j.at("bases")) model.bases.push_back(SubspaceBasis{matrix_from_json(bj)});
    } else if (j.contains("basis_spec")) {
        const auto& spec = j.at("basis_spec");
        const int m = spec.at("m").get<int>();
        std::vector<int> dims;
        if (spec.at("dims").is_array())
            dims = spec.at("dims").get<std::vector<int>>();
        else
            dims.assign(j.at("counts").size(), spec.at("dims").get<int>());
        auto src = seeded_source(spec.at("seed").get<std::uint64_t>());
        if (spec.value("orthogonal", false)) {
            model.bases = mutually_orthogonal_bases(m, dims, src);
        } else {
            for (int d : dims) model.bases.push_back(random_orthobasis(m, d, src));
        }
    } else {
        throw std::runtime_error("model JSON needs either \"bases\" or \"basis_spec\"");
    }
    model.counts = j.at("counts").get<std::vector<int>>();
    model.noise_sigma2 = j.value("noise_sigma2", 0.0);
    model.num_outliers = j.value("num_outliers", 0);
    const std::string scaling = j.value("inlier_scaling", "none");
    if (scaling == "unit_energy")
        model.scaling = InlierScaling::unit_energy;
    else if (scaling == "none")
        model.scaling = InlierScaling::none;
    else
        throw std::runtime_error("unknown inlier_scaling: " + scaling);
    model.seed = j.value("seed", std::uint64_t{0});
    model.validate();
    return model;
}

SyntheticModel read_model_json(const std::string& path) {
    auto in = open_in(path);
    nlohmann::json j;
    in >> j;
    return model_from_json(j);
}

void write_model_json(const SyntheticModel& model, const std::string& path) {
    auto out = open_out(path);
    out << model_to_json(model).dump(2) << '\n';
}

void write_dataset_json(const DataSet& data, const SyntheticModel* model, const std::string& path) {
    nlohmann::json j;
    j["points"] = matrix_to_json(data.points);
    if (data.has_labels()) j["labels"] = data.labels;
    if (model) j["model"] = model_to_json(*model);
    auto out = open_out(path);
    out << j.dump() << '\n';
}

DataSet read_dataset_json(const std::string& path, SyntheticModel* model_out) {
    auto in = open_in(path);
    nlohmann::json j;
    in >> j;
    DataSet data;
    data.points = matrix_from_json(j.at("points"));
    if (j.contains("labels")) data.labels = j.at("labels").get<std::vector<int>>();
    if (model_out && j.contains("model")) *model_out = model_from_json(j.at("model"));
    data.validate();
    return data;
}

}  // namespace tsc
