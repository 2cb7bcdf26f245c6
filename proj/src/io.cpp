#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mcrisk/harness.hpp"

namespace mcrisk {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        // trim surrounding whitespace
        const auto begin = field.find_first_not_of(" \t\r");
        const auto end = field.find_last_not_of(" \t\r");
        fields.push_back(begin == std::string::npos ? std::string()
                                                    : field.substr(begin, end - begin + 1));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

bool parse_double(const std::string& token, double& out) {
    if (token.empty()) return false;
    errno = 0;
    char* tail = nullptr;
    out = std::strtod(token.c_str(), &tail);
    return errno == 0 && tail == token.c_str() + token.size();
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& rows) {
    const auto r = static_cast<Eigen::Index>(rows.size());
    if (r == 0) throw DataError("model file: empty matrix");
    const auto c = static_cast<Eigen::Index>(rows.front().size());
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != c)
            throw DataError("model file: ragged matrix rows");
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
    }
    return m;
}

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Vector vector_from_json(const json& arr) {
    Vector v(static_cast<Eigen::Index>(arr.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = arr[i].get<double>();
    return v;
}

json kernel_to_json(const KernelSpec& kernel) {
    json j;
    j["family"] = kernel.family_name();
    j["gamma"] = kernel.gamma;
    j["degree"] = kernel.degree;
    j["offset"] = kernel.offset;
    return j;
}

KernelSpec kernel_from_json(const json& j) {
    return KernelSpec::from_family_name(j.at("family").get<std::string>(),
                                        j.value("gamma", 1.0), j.value("degree", 2),
                                        j.value("offset", 1.0));
}

}  // namespace

Dataset dataset_from_csv_text(const std::string& text, bool expect_outputs,
                              std::optional<double> lambda_x_override) {
    std::istringstream in(text);
    std::string line;
    std::vector<Vector> points;
    std::vector<double> outputs;
    int row_number = 0;
    int columns = -1;
    bool saw_data = false;

    while (std::getline(in, line)) {
        ++row_number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = split_csv_row(line);
        std::vector<double> values(fields.size());
        bool numeric = true;
        for (std::size_t j = 0; j < fields.size(); ++j)
            if (!parse_double(fields[j], values[j])) {
                numeric = false;
                break;
            }
        if (!numeric) {
            // a non-numeric row is only legal as the leading header
            if (saw_data)
                throw DataError("csv row " + std::to_string(row_number) +
                                ": non-numeric value");
            continue;
        }
        if (columns < 0) {
            columns = static_cast<int>(values.size());
            const int min_cols = expect_outputs ? 2 : 1;
            if (columns < min_cols)
                throw DataError("csv row " + std::to_string(row_number) +
                                ": too few columns");
        } else if (static_cast<int>(values.size()) != columns) {
            throw DataError("csv row " + std::to_string(row_number) +
                            ": expected " + std::to_string(columns) + " columns, found " +
                            std::to_string(values.size()));
        }
        const int d = expect_outputs ? columns - 1 : columns;
        Vector x(d);
        for (int j = 0; j < d; ++j) x(j) = values[j];
        points.push_back(std::move(x));
        if (expect_outputs) {
            const double y = values[columns - 1];
            if (!(y >= -0.5 && y <= 0.5))
                throw DataError("csv row " + std::to_string(row_number) +
                                ": y outside [-1/2, 1/2]");
            outputs.push_back(y);
        }
        saw_data = true;
    }
    if (!saw_data) throw DataError("csv: no data rows");

    double lambda_x = 0.0;
    if (lambda_x_override) {
        lambda_x = *lambda_x_override;
    } else {
        for (const auto& x : points) lambda_x = std::max(lambda_x, x.norm());
    }
    try {
        if (expect_outputs) return Dataset(std::move(points), std::move(outputs), lambda_x);
        return Dataset(std::move(points), lambda_x);
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("csv: ") + e.what());
    }
}

Dataset ingest_csv(const std::string& path, bool expect_outputs,
                   std::optional<double> lambda_x_override) {
    return dataset_from_csv_text(read_text_file(path), expect_outputs, lambda_x_override);
}

std::string dataset_to_csv(const Dataset& data, bool header) {
    std::ostringstream out;
    const int d = data.dim();
    if (header) {
        for (int j = 0; j < d; ++j) out << "x" << (j + 1) << (j + 1 < d ? "," : "");
        if (data.has_outputs()) out << ",y";
        out << "\n";
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (int j = 0; j < d; ++j) out << fmt17(data.point(i)(j)) << (j + 1 < d ? "," : "");
        if (data.has_outputs()) out << "," << fmt17(data.output(i));
        out << "\n";
    }
    return out.str();
}

void emit_csv(const Dataset& data, const std::string& path, bool header) {
    write_text_file(path, dataset_to_csv(data, header));
}

std::string model_to_json(const MultiComponentModel& model) {
    json j;
    if (const auto* centers = std::get_if<CenterModel>(&model)) {
        j["type"] = "center";
        json arr = json::array();
        for (const auto& f : centers->centers) arr.push_back(vector_to_json(f));
        j["centers"] = std::move(arr);
    } else if (const auto* subspaces = std::get_if<SubspaceModel>(&model)) {
        j["type"] = "subspace";
        json arr = json::array();
        for (const auto& basis : subspaces->bases) arr.push_back(matrix_to_json(basis));
        j["bases"] = std::move(arr);
    } else {
        const auto& kernel = std::get<KernelModel>(model);
        j["type"] = "kernel";
        j["kernel"] = kernel_to_json(kernel.kernel);
        json anchors = json::array();
        for (const auto& a : kernel.anchors) anchors.push_back(vector_to_json(a));
        j["anchors"] = std::move(anchors);
        j["coefficients"] = matrix_to_json(kernel.coefficients);
        j["norms"] = kernel.norms;
    }
    return j.dump(2);
}

MultiComponentModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("model file: ") + e.what());
    }
    try {
        const std::string type = j.at("type").get<std::string>();
        if (type == "center") {
            std::vector<Vector> centers;
            for (const auto& row : j.at("centers")) centers.push_back(vector_from_json(row));
            return CenterModel(std::move(centers));
        }
        if (type == "subspace") {
            std::vector<Matrix> bases;
            for (const auto& b : j.at("bases")) bases.push_back(matrix_from_json(b));
            return SubspaceModel(std::move(bases));
        }
        if (type == "kernel") {
            std::vector<Vector> anchors;
            for (const auto& a : j.at("anchors")) anchors.push_back(vector_from_json(a));
            KernelModel model = KernelModel::build(kernel_from_json(j.at("kernel")),
                                                   std::move(anchors),
                                                   matrix_from_json(j.at("coefficients")));
            if (j.contains("norms")) {
                const auto stored = j.at("norms").get<std::vector<double>>();
                if (stored.size() != model.norms.size())
                    throw DataError("model file: norms length mismatch");
                for (std::size_t k = 0; k < stored.size(); ++k)
                    if (std::abs(stored[k] - model.norms[k]) >
                        kStructuralTol * std::max(1.0, model.norms[k]))
                        throw DataError("model file: stored norm " + std::to_string(k) +
                                        " disagrees with coefficients");
            }
            return model;
        }
        throw DataError("model file: unknown type '" + type + "'");
    } catch (const json::exception& e) {
        throw DataError(std::string("model file: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("model file: ") + e.what());
    }
}

void save_model(const MultiComponentModel& model, const std::string& path) {
    write_text_file(path, model_to_json(model));
}

MultiComponentModel load_model(const std::string& path) {
    return model_from_json(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << content;
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace mcrisk
