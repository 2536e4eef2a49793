#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "logcone/families.hpp"
#include "logcone/grid.hpp"
#include "logcone/lipschitz.hpp"
#include "logcone/measure_ops.hpp"
#include "logcone/spectra.hpp"

namespace logcone {

using Json = nlohmann::json;

// Parsing helpers throw Error(ParseError) on malformed input.
Json parse_json(const std::string& text);
Json load_json(const std::string& path);

Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);  // {"rows","cols","entries"} or nested rows

Json to_json(const LinearMap& m);
LinearMap linear_map_from_json(const Json& j);

Json to_json(const AffineMap& m);
AffineMap affine_map_from_json(const Json& j);

struct SplitInput {
    std::vector<CovMatrix> parts;
    double eps = 0.0;
};
SplitInput split_input_from_json(const Json& j);  // {"d","matrices":[[row-major]],"eps"}
Json to_json(const SplitResult& r);

Json to_json(const FamilySpec& s);
FamilySpec family_spec_from_json(const Json& j);

std::vector<std::vector<double>> directions_from_json(const Json& j);

struct ClosureConfig {
    std::vector<FamilySpec> seeds;
    std::vector<LinearMap> maps;
    int steps = 0;
    double tol = 0.05;
};
ClosureConfig closure_config_from_json(const Json& j);

Json to_json(const MomentSummary& m);
Json to_json(const LogConcavityReport& r);
Json to_json(const LipschitzReport& r);

}  // namespace logcone
