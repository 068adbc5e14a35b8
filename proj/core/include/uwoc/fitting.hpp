#ifndef UWOC_FITTING_HPP
#define UWOC_FITTING_HPP

#include <optional>
#include <string>
#include <vector>

#include "uwoc/distributions.hpp"
#include "uwoc/histogram.hpp"

namespace uwoc {

enum class BinWeighting { uniform, count_weighted };

struct FitOptions {
    bool constrain_mean = false;
    int multistart_count = 32;
    /// Objective-evaluation budget per start.
    int max_evaluations = 4000;
    double tolerance = 1e-8;
    BinWeighting bin_weighting = BinWeighting::uniform;
    /// Execution knob only; results are identical for any thread count.
    unsigned threads = 1;
};

struct FitResult {
    FadingParams params;
    double rmse = 0.0;
    double r_squared = 0.0;
    Family family = Family::log_normal;
    bool constrained = false;
    long evaluations = 0;
    /// False when every start exhausted its budget before reaching the
    /// objective tolerance (best-so-far is still returned).
    bool converged = false;
};

/// One row of a multi-family comparison report.
struct ReportRow {
    Family family = Family::log_normal;
    bool applicable = true;
    std::string reason;  // set when not applicable
    std::optional<FitResult> result;
};

/// sqrt((1/M) sum_i (f_m,i - f_p,i)^2) over bin densities, with the
/// prediction evaluated at bin centers.
double rmse_pdf(const EmpiricalPdf& measured, const FadingParams& params);

/// 1 - SS_reg/SS_tot over bin densities; 1 for a perfect prediction,
/// negative when the fit is worse than the mean density. Throws
/// DegenerateHistogram when all bin densities are identical.
double r_squared(const EmpiricalPdf& measured, const FadingParams& params);

/// Least-squares fit of one family to the histogram: deterministic
/// Latin-hypercube multistart (nested blocks, so a larger start count
/// can only improve the objective) followed by Nelder-Mead descent in
/// a box-transformed space. Throws InfeasibleFamily for the K
/// distribution when the histogram's scintillation index is <= 1.
FitResult fit(const EmpiricalPdf& measured, Family family,
              const FitOptions& options = {});

/// Fits every applicable family and sorts rows by descending R^2;
/// inapplicable families are kept with a reason instead of a result.
std::vector<ReportRow> fit_report(const EmpiricalPdf& measured,
                                  const std::vector<Family>& families,
                                  const FitOptions& options = {});

/// Scintillation index implied by the histogram itself (density-weighted
/// moments at bin centers); what the K-distribution gate checks.
double histogram_scint_index(const EmpiricalPdf& measured);

/// For mixture fits: the lobe whose weight fell below 1e-3, if any
/// ("exponential" when k < 1e-3, "lognormal" when 1-k < 1e-3).
std::optional<std::string> inactive_lobe(const FadingParams& params);

}  // namespace uwoc

#endif
