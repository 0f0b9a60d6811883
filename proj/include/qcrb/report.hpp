#pragma once

#include "qcrb/bounds.hpp"
#include "qcrb/infogeo.hpp"
#include "qcrb/povmopt.hpp"

#include "json.hpp"

#include <string>

namespace qcrb {

using json = nlohmann::json;

// Real matrices serialize as nested row arrays; complex matrices as
// {"re": [[...]], "im": [[...]]}.
json to_json(const RealMatrix& m);
json to_json(const ComplexMatrix& m);
RealMatrix real_matrix_from_json(const json& j);
ComplexMatrix complex_matrix_from_json(const json& j);

json to_json(const FisherMatrix& f);
FisherMatrix fisher_from_json(const json& j);

json to_json(const BoundValue& b);
BoundValue bound_value_from_json(const json& j);

json to_json(const BoundReport& r);
BoundReport bound_report_from_json(const json& j);

json to_json(const FrontierPoint& p);
json to_json(const SearchResult& r);

/// Re-checks the invariants of a serialized report (ordering chain, Fisher
/// symmetry, frontier equations, estimator unbiasedness). Throws on violation.
void validate_result(const std::string& command, const json& config, const json& result);

/// Fixed-notation CSV field: '.' separator, 17 significant digits, empty for absent.
std::string csv_number(double v);
std::string csv_number(const std::optional<double>& v);

}  // namespace qcrb
