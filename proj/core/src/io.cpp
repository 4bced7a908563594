#include "isoproxim/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "isoproxim/errors.hpp"

namespace isoproxim::io {

namespace {

using Json = nlohmann::ordered_json;

Json parse_json(std::string_view text, const char* what) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) throw InputError(std::string(what) + ": invalid JSON");
    return j;
}

double number_field(const Json& j, const char* what) {
    if (!j.is_number()) throw InputError(std::string(what) + ": expected a number");
    const double value = j.get<double>();
    if (!std::isfinite(value)) throw InputError(std::string(what) + ": non-finite number");
    return value;
}

std::size_t positive_int_field(const Json& j, const char* key, const char* what) {
    if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() <= 0)
        throw InputError(std::string(what) + ": '" + key + "' must be a positive integer");
    return static_cast<std::size_t>(j[key].get<long long>());
}

Complex complex_entry(const Json& j, const char* what) {
    if (!j.is_array() || j.size() != 2)
        throw InputError(std::string(what) + ": entries must be [re, im] pairs");
    return Complex{number_field(j[0], what), number_field(j[1], what)};
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_to_json_value(const Matrix& m) {
    Json data = Json::array();
    for (Complex z : m.data()) data.push_back(complex_to_json(z));
    Json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["data"] = std::move(data);
    return j;
}

Matrix matrix_from_json_value(const Json& j, const char* what) {
    if (!j.is_object()) throw InputError(std::string(what) + ": expected an object");
    const std::size_t rows = positive_int_field(j, "rows", what);
    const std::size_t cols = positive_int_field(j, "cols", what);
    if (!j.contains("data") || !j["data"].is_array())
        throw InputError(std::string(what) + ": 'data' must be an array");
    const auto& data = j["data"];
    if (data.size() != rows * cols)
        throw InputError(std::string(what) + ": 'data' must hold rows*cols entries");
    std::vector<Complex> entries;
    entries.reserve(data.size());
    for (const auto& item : data) entries.push_back(complex_entry(item, what));
    try {
        return Matrix::from_data(rows, cols, std::move(entries));
    } catch (const PreconditionError& e) {
        throw InputError(std::string(what) + ": " + e.what());
    }
}

std::vector<std::vector<double>> parse_csv_rows(std::string_view text, const char* what) {
    std::vector<std::vector<double>> rows;
    std::istringstream stream{std::string(text)};
    std::string line;
    while (std::getline(stream, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (blank) continue;
        std::vector<double> row;
        std::istringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) {
            try {
                std::size_t used = 0;
                const double value = std::stod(field, &used);
                while (used < field.size() && std::isspace(static_cast<unsigned char>(field[used])))
                    ++used;
                if (used != field.size()) throw std::invalid_argument(field);
                if (!std::isfinite(value))
                    throw InputError(std::string(what) + ": non-finite value '" + field + "'");
                row.push_back(value);
            } catch (const std::logic_error&) {
                throw InputError(std::string(what) + ": cannot parse '" + field + "'");
            }
        }
        if (row.empty()) throw InputError(std::string(what) + ": empty row");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InputError(std::string(what) + ": no data rows");
    for (const auto& row : rows)
        if (row.size() != rows.front().size())
            throw InputError(std::string(what) + ": rows have different lengths");
    return rows;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

enum class FileKind { Json, Csv };

FileKind kind_from_extension(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".json") return FileKind::Json;
    if (ext == ".csv") return FileKind::Csv;
    throw InputError("unsupported file extension '" + ext + "' for '" + path.string() +
                     "' (expected .json or .csv)");
}

std::string dump(const Json& j) { return j.dump() + "\n"; }

Json family_to_json(const MinimizerSet& family) {
    Json j;
    if (std::holds_alternative<UniqueMinimizer>(family)) {
        j["variant"] = "unique";
        return j;
    }
    if (const auto* proj = std::get_if<ProjectionFamily>(&family)) {
        j["variant"] = "projection-family";
        j["l_k"] = proj->l_k;
        j["e_k"] = proj->e_k;
        j["proj_rank"] = proj->proj_rank;
        j["V"] = matrix_to_json_value(proj->V);
        j["W"] = matrix_to_json_value(proj->W);
        return j;
    }
    const auto& iso = std::get<IsometryFamily>(family);
    j["variant"] = "isometry-family";
    j["r"] = iso.rank_f;
    j["iso_rank"] = iso.iso_rank;
    j["V"] = matrix_to_json_value(iso.V);
    j["W"] = matrix_to_json_value(iso.W);
    return j;
}

Json rank_k_result_to_json_value(const RankKResult& result) {
    Json j;
    j["k"] = result.k;
    j["distance"] = result.distance;
    j["gauge"] = result.gauge.to_string();
    j["certificate"] = to_string(result.certificate);
    j["minimizer"] = matrix_to_json_value(result.minimizer);
    j["family"] = family_to_json(result.family);
    return j;
}

Json frame_to_json_value(const Frame& frame) {
    Json vectors = Json::array();
    for (std::size_t j = 0; j < frame.size(); ++j) {
        Json vec = Json::array();
        for (Complex z : frame.vector(j)) vec.push_back(complex_to_json(z));
        vectors.push_back(std::move(vec));
    }
    Json j;
    j["ambient_dim"] = frame.ambient_dim();
    j["vectors"] = std::move(vectors);
    return j;
}

} // namespace

Matrix matrix_from_json(std::string_view text) {
    return matrix_from_json_value(parse_json(text, "matrix"), "matrix");
}

Matrix matrix_from_csv(std::string_view text) {
    const auto rows = parse_csv_rows(text, "matrix csv");
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = Complex{rows[i][j], 0.0};
    return m;
}

std::string matrix_to_json(const Matrix& m) { return dump(matrix_to_json_value(m)); }

Matrix read_matrix(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    return kind_from_extension(path) == FileKind::Json ? matrix_from_json(text)
                                                       : matrix_from_csv(text);
}

Frame frame_from_json(std::string_view text) {
    const Json j = parse_json(text, "frame");
    if (!j.is_object()) throw InputError("frame: expected an object");
    const std::size_t m = positive_int_field(j, "ambient_dim", "frame");
    if (!j.contains("vectors") || !j["vectors"].is_array() || j["vectors"].empty())
        throw InputError("frame: 'vectors' must be a non-empty array");
    std::vector<std::vector<Complex>> vectors;
    for (const auto& vec : j["vectors"]) {
        if (!vec.is_array() || vec.size() != m)
            throw InputError("frame: every vector must hold ambient_dim entries");
        std::vector<Complex> v;
        v.reserve(m);
        for (const auto& entry : vec) v.push_back(complex_entry(entry, "frame"));
        vectors.push_back(std::move(v));
    }
    try {
        return Frame::from_vectors(vectors);
    } catch (const PreconditionError& e) {
        throw InputError(std::string("frame: ") + e.what());
    }
}

Frame frame_from_csv(std::string_view text) {
    const auto rows = parse_csv_rows(text, "frame csv");
    // One vector per row; the synthesis matrix carries them as columns.
    Matrix synthesis(rows.front().size(), rows.size());
    for (std::size_t j = 0; j < rows.size(); ++j)
        for (std::size_t i = 0; i < rows[j].size(); ++i)
            synthesis(i, j) = Complex{rows[j][i], 0.0};
    try {
        return Frame::from_synthesis(std::move(synthesis));
    } catch (const PreconditionError& e) {
        throw InputError(std::string("frame csv: ") + e.what());
    }
}

std::string frame_to_json(const Frame& frame) { return dump(frame_to_json_value(frame)); }

Frame read_frame(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    return kind_from_extension(path) == FileKind::Json ? frame_from_json(text)
                                                       : frame_from_csv(text);
}

std::string rank_k_result_json(const RankKResult& result) {
    return dump(rank_k_result_to_json_value(result));
}

std::string global_result_json(const GlobalResult& result) {
    Json j;
    j["best_ranks"] = result.best_ranks;
    j["distance"] = result.distance;
    Json items = Json::array();
    for (const auto& r : result.results) items.push_back(rank_k_result_to_json_value(r));
    j["results"] = std::move(items);
    return dump(j);
}

std::string minimizers_record_json(const RankKResult& result) {
    Json j;
    j["k"] = result.k;
    j["gauge"] = result.gauge.to_string();
    j["certificate"] = to_string(result.certificate);
    j["family"] = family_to_json(result.family);
    return dump(j);
}

std::string distance_record_json(std::size_t k, const Gauge& gauge, double distance) {
    Json j;
    j["k"] = k;
    j["gauge"] = gauge.to_string();
    j["distance"] = distance;
    return dump(j);
}

std::string frame_report_json(const FrameReport& report) {
    Json j;
    j["span_dim"] = report.span_dim;
    j["excess"] = report.excess;
    j["lower_bound"] = report.lower_bound;
    j["upper_bound"] = report.upper_bound;
    j["is_tight"] = report.is_tight;
    j["is_parseval"] = report.is_parseval;
    return dump(j);
}

std::string fixed_excess_result_json(const FixedExcessResult& result) {
    Json j;
    j["mode"] = "fixed-excess";
    j["k"] = result.k;
    j["certificate"] = to_string(result.certificate);
    j["frame"] = frame_to_json_value(result.frame);
    j["family"] = family_to_json(result.family);
    return dump(j);
}

std::string global_frame_result_json(const GlobalFrameResult& result, std::string_view mode) {
    Json j;
    j["mode"] = std::string(mode);
    j["k"] = result.k;
    j["certificate"] = to_string(result.certificate);
    j["unique"] = result.unique;
    j["half_tie"] = result.half_tie;
    j["frame"] = frame_to_json_value(result.frame);
    return dump(j);
}

std::string verify_report_json(const oracle::VerifyReport& report) {
    Json j;
    j["trials"] = report.trials;
    j["resolution"] = report.resolution;
    j["gauge"] = report.gauge;
    j["seed"] = report.seed;
    j["max_gap"] = report.max_gap;
    Json violations = Json::array();
    for (const auto& v : report.violations) {
        Json item;
        item["trial"] = v.trial;
        item["rows"] = v.rows;
        item["cols"] = v.cols;
        item["k"] = v.k;
        item["solver"] = v.solver_distance;
        item["oracle"] = v.oracle_distance;
        violations.push_back(std::move(item));
    }
    j["violations"] = std::move(violations);
    return dump(j);
}

} // namespace isoproxim::io
