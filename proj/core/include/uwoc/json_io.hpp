#ifndef UWOC_JSON_IO_HPP
#define UWOC_JSON_IO_HPP

#include <json.hpp>

#include "uwoc/distributions.hpp"
#include "uwoc/fitting.hpp"

namespace uwoc {

/// Field order is fixed everywhere so serialized output is canonical:
/// reparsing and reserializing a report is byte-identical.
using ordered_json = nlohmann::ordered_json;

/// {"family": "lognormal"|"k"|"gamma_gamma"|"exp_lognormal",
///  "params": {...family fields...}}
ordered_json params_to_json(const FadingParams& params);
FadingParams params_from_json(const ordered_json& j);

/// One report row: {family, params, rmse, r_squared, constrained,
/// applicable, ...}; inapplicable rows carry a reason instead of a fit.
ordered_json report_row_to_json(const ReportRow& row);
ordered_json fit_result_to_json(const FitResult& result);

/// Table-style CSV rendering of a report; inapplicable cells are "---".
std::string report_to_csv(const std::vector<ReportRow>& rows);

}  // namespace uwoc

#endif
