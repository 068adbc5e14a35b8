#include "uwoc/json_io.hpp"

#include <sstream>

#include "uwoc/errors.hpp"
#include "uwoc/format.hpp"

namespace uwoc {

ordered_json params_to_json(const FadingParams& params) {
    ordered_json j;
    j["family"] = std::string(family_tag(family_of(params)));
    ordered_json p;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, LogNormalParams>) {
                p["sigma2_X"] = v.sigma2_X;
            } else if constexpr (std::is_same_v<T, KDistParams>) {
                p["alpha"] = v.alpha;
            } else if constexpr (std::is_same_v<T, GammaGammaParams>) {
                p["alpha"] = v.alpha;
                p["beta"] = v.beta;
            } else {
                p["k"] = v.k;
                p["gamma"] = v.gamma;
                p["mu"] = v.mu;
                p["sigma2"] = v.sigma2;
            }
        },
        params);
    j["params"] = std::move(p);
    return j;
}

FadingParams params_from_json(const ordered_json& j) {
    const auto family = family_from_tag(j.at("family").get<std::string>());
    if (!family) {
        throw InvalidInput("unknown family tag in JSON");
    }
    const auto& p = j.at("params");
    switch (*family) {
        case Family::log_normal:
            return LogNormalParams{p.at("sigma2_X").get<double>()};
        case Family::k_dist:
            return KDistParams{p.at("alpha").get<double>()};
        case Family::gamma_gamma:
            return GammaGammaParams{p.at("alpha").get<double>(),
                                    p.at("beta").get<double>()};
        case Family::exp_log_normal:
            return ExpLogNormalParams{p.at("k").get<double>(),
                                      p.at("gamma").get<double>(),
                                      p.at("mu").get<double>(),
                                      p.at("sigma2").get<double>()};
    }
    throw InvalidInput("unknown family tag in JSON");
}

ordered_json fit_result_to_json(const FitResult& result) {
    ordered_json j;
    j["family"] = std::string(family_tag(result.family));
    j["params"] = params_to_json(result.params)["params"];
    j["rmse"] = result.rmse;
    j["r_squared"] = result.r_squared;
    j["constrained"] = result.constrained;
    j["applicable"] = true;
    j["converged"] = result.converged;
    j["evaluations"] = result.evaluations;
    if (const auto lobe = inactive_lobe(result.params)) {
        j["inactive_lobe"] = *lobe;
    }
    return j;
}

ordered_json report_row_to_json(const ReportRow& row) {
    if (row.result) {
        return fit_result_to_json(*row.result);
    }
    ordered_json j;
    j["family"] = std::string(family_tag(row.family));
    j["applicable"] = false;
    j["reason"] = row.reason;
    return j;
}

std::string report_to_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream out;
    out << "family,r_squared,rmse,params\n";
    for (const ReportRow& row : rows) {
        out << family_tag(row.family) << ',';
        if (!row.result) {
            out << "---,---,---\n";
            continue;
        }
        out << format_double(row.result->r_squared) << ','
            << format_double(row.result->rmse) << ',';
        const ordered_json p = params_to_json(row.result->params)["params"];
        bool first = true;
        out << '"';
        for (const auto& [key, value] : p.items()) {
            if (!first) out << ' ';
            out << key << '=' << format_double(value.get<double>());
            first = false;
        }
        out << "\"\n";
    }
    return out.str();
}

}  // namespace uwoc
