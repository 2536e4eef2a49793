#include "logcone/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "logcone/error.hpp"

namespace logcone {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

template <typename T>
T get(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        parse_fail(std::string("field '") + key + "': " + e.what());
    }
}

std::vector<double> number_array(const Json& j, const char* what) {
    if (!j.is_array()) parse_fail(std::string(what) + " must be an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) parse_fail(std::string(what) + " must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

// NaN and infinity have no JSON spelling.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        parse_fail(e.what());
    }
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) parse_fail("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str());
}

Json to_json(const Matrix& m) {
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", m.entries()}};
}

Matrix matrix_from_json(const Json& j) {
    if (j.is_array()) {
        if (j.empty()) parse_fail("empty matrix");
        const std::size_t rows = j.size();
        std::vector<double> entries;
        std::size_t cols = 0;
        for (const auto& row : j) {
            const auto r = number_array(row, "matrix row");
            if (cols == 0) cols = r.size();
            if (r.size() != cols || cols == 0) parse_fail("ragged matrix");
            entries.insert(entries.end(), r.begin(), r.end());
        }
        return Matrix(rows, cols, std::move(entries));
    }
    const auto rows = get<std::size_t>(j, "rows");
    const auto cols = get<std::size_t>(j, "cols");
    auto entries = number_array(get<Json>(j, "entries"), "entries");
    if (rows == 0 || cols == 0 || entries.size() != rows * cols)
        parse_fail("entries do not match rows x cols");
    return Matrix(rows, cols, std::move(entries));
}

Json to_json(const LinearMap& m) { return to_json(m.matrix()); }

LinearMap linear_map_from_json(const Json& j) { return LinearMap(matrix_from_json(j)); }

Json to_json(const AffineMap& m) {
    Json j = to_json(m.linear);
    j["offset"] = m.offset;
    return j;
}

AffineMap affine_map_from_json(const Json& j) {
    AffineMap m;
    m.linear = matrix_from_json(j);
    m.offset = j.contains("offset") ? number_array(j.at("offset"), "offset")
                                    : std::vector<double>(m.linear.rows(), 0.0);
    if (m.offset.size() != m.linear.rows()) parse_fail("offset length does not match rows");
    return m;
}

SplitInput split_input_from_json(const Json& j) {
    SplitInput in;
    const auto d = get<std::size_t>(j, "d");
    in.eps = get<double>(j, "eps");
    const Json mats = get<Json>(j, "matrices");
    if (!mats.is_array() || mats.empty()) parse_fail("matrices must be a non-empty array");
    for (const auto& m : mats) {
        auto entries = m.is_array() && !m.empty() && m.front().is_array()
                           ? matrix_from_json(m).entries()
                           : number_array(m, "matrix");
        if (entries.size() != d * d) parse_fail("matrix is not d x d");
        in.parts.emplace_back(Matrix(d, d, std::move(entries)));
    }
    return in;
}

Json to_json(const SplitResult& r) {
    if (const auto* full = std::get_if<FullDecomposition>(&r)) {
        Json subs = Json::array();
        for (const auto& s : full->subspaces) subs.push_back({{"index", s.index}, {"basis", s.basis}});
        return Json{{"type", "FullDecomposition"}, {"subspaces", subs}};
    }
    const auto& mid = std::get<MiddleEigen>(r);
    return Json{{"type", "MiddleEigen"},
                {"subset", mid.subset},
                {"lambda", mid.lambda},
                {"vector", mid.vector},
                {"step", mid.step}};
}

Json to_json(const FamilySpec& s) {
    return Json{{"name", s.name}, {"dim", s.dim}, {"params", s.params}, {"h", s.h}};
}

FamilySpec family_spec_from_json(const Json& j) {
    FamilySpec s;
    s.name = get<std::string>(j, "name");
    s.dim = get<std::size_t>(j, "dim");
    if (j.contains("params")) s.params = number_array(j.at("params"), "params");
    if (j.contains("h")) s.h = get<double>(j, "h");
    return s;
}

std::vector<std::vector<double>> directions_from_json(const Json& j) {
    if (j.is_object() && !j.contains("directions")) parse_fail("missing field 'directions'");
    const Json& list = j.is_object() ? j.at("directions") : j;
    if (!list.is_array() || list.empty()) parse_fail("directions must be a non-empty array");
    std::vector<std::vector<double>> out;
    for (const auto& v : list) out.push_back(number_array(v, "direction"));
    return out;
}

ClosureConfig closure_config_from_json(const Json& j) {
    ClosureConfig c;
    const Json seeds = get<Json>(j, "seeds");
    if (!seeds.is_array()) parse_fail("seeds must be an array");
    for (const auto& s : seeds) c.seeds.push_back(family_spec_from_json(s));
    if (j.contains("maps")) {
        if (!j.at("maps").is_array()) parse_fail("maps must be an array");
        for (const auto& m : j.at("maps")) c.maps.push_back(linear_map_from_json(m));
    }
    c.steps = j.contains("steps") ? get<int>(j, "steps") : 0;
    if (j.contains("tol")) c.tol = get<double>(j, "tol");
    return c;
}

Json to_json(const MomentSummary& m) {
    Json cov = Json::array();
    for (std::size_t r = 0; r < m.cov.dim(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cov.dim(); ++c) row.push_back(m.cov(r, c));
        cov.push_back(row);
    }
    return Json{{"mean", m.mean}, {"cov", cov}, {"sup_density", m.sup_density}, {"mass", m.mass}};
}

Json to_json(const LogConcavityReport& r) {
    return Json{{"log_concave", r.log_concave},
                {"worst_violation", number(r.worst_violation)},
                {"worst_point", r.worst_point},
                {"support_gaps", r.support_gaps},
                {"triples_checked", r.triples_checked}};
}

Json to_json(const LipschitzReport& r) {
    return Json{{"direction", r.direction},
                {"constant", number(r.constant)},
                {"discontinuity_flag", r.discontinuity_flag},
                {"refinement_ratio", number(r.refinement_ratio)}};
}

}  // namespace logcone
