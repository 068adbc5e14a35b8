#ifndef UWOC_DISTRIBUTIONS_HPP
#define UWOC_DISTRIBUTIONS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace uwoc {

enum class Family { log_normal, k_dist, gamma_gamma, exp_log_normal };

/// Log-amplitude variance of the weak-fluctuation log-normal model.
/// The location is fixed at mu_X = -sigma2_X so the fading mean is 1.
struct LogNormalParams {
    double sigma2_X = 0.0;
    bool operator==(const LogNormalParams&) const = default;
};

/// Shape of the K distribution (unit-mean compound exponential-gamma).
struct KDistParams {
    double alpha = 0.0;
    bool operator==(const KDistParams&) const = default;
};

/// Shapes of the gamma-gamma model (product of two unit-mean gammas).
struct GammaGammaParams {
    double alpha = 0.0;
    double beta = 0.0;
    bool operator==(const GammaGammaParams&) const = default;
};

/// Two-lobe exponential + log-normal mixture: weight k on an
/// exponential lobe of mean gamma, weight 1-k on a log-normal lobe
/// with log-domain location mu and scale sigma2.
struct ExpLogNormalParams {
    double k = 0.0;
    double gamma = 1.0;
    double mu = 0.0;
    double sigma2 = 0.0;
    bool operator==(const ExpLogNormalParams&) const = default;
};

using FadingParams =
    std::variant<LogNormalParams, KDistParams, GammaGammaParams, ExpLogNormalParams>;

Family family_of(const FadingParams& params) noexcept;
std::string_view family_tag(Family family) noexcept;
std::optional<Family> family_from_tag(std::string_view tag) noexcept;

/// Throws InvalidInput on any shape/scale/weight outside its domain.
void validate_params(const FadingParams& params);

/// Density at h >= 0. Total on [0, inf): the h = 0 value is pinned to 0
/// for the single-lobe families and to k/gamma for the mixture.
/// Throws NumericOverflow when the density leaves double range.
double pdf(const FadingParams& params, double h);

/// P(fading <= h). Closed forms for the log-normal and the mixture;
/// adaptive quadrature of the density (1e-10 absolute) for K and
/// gamma-gamma. Throws QuadratureFailure on non-convergence.
double cdf(const FadingParams& params, double h);

/// Inverse CDF on (0, 1). Throws BracketFailure when no bracket
/// enclosing p can be built.
double quantile(const FadingParams& params, double p);

/// Batch quantiles for ascending probabilities; much cheaper than
/// repeated quantile() calls for the numeric-CDF families.
void quantile_grid(const FadingParams& params, std::span<const double> probs,
                   std::span<double> out);

/// Scintillation index implied by the parameters. For the mixture this
/// is computed from raw moments, E[h^2]/E[h]^2 - 1, which reduces to
/// 2 k gamma^2 + (1-k) exp(2 mu + 2 sigma2) - 1 when E[h] = 1.
double scintillation_from_params(const FadingParams& params);

/// Inverts the scintillation relation where one parameter determines
/// the family: sigma2_X = 0.25 ln(1 + s) and alpha = 2 / (s - 1).
/// Throws OutOfSupport for the K distribution when s <= 1 and
/// UnderdeterminedFamily for the two-parameter families.
FadingParams params_from_scint(Family family, double scint_index);

/// n-th raw moment E[h^n], n >= 1. Closed forms per family.
double moment(const FadingParams& params, int n);

/// Returns parameters adjusted so E[h] = 1. Log-normal, K and
/// gamma-gamma satisfy the constraint structurally; the mixture solves
/// for mu holding (k, gamma, sigma2) fixed when k*gamma < 1, otherwise
/// rescales gamma. Throws Infeasible when no adjustment exists.
FadingParams enforce_normalization(const FadingParams& params);

/// n i.i.d. draws using the compound/product representations (not
/// quantile inversion). Bit-reproducible for a given seed.
std::vector<double> sample(const FadingParams& params, std::size_t n,
                           std::uint64_t seed);

namespace detail {

/// ln pdf evaluated at t = ln h; safe across the whole support (no
/// intermediate overflow), -inf where the density underflows.
double log_pdf_at_log_h(const FadingParams& params, double t);

/// Integration window [t_lo, t_hi] in t = ln h outside which the
/// remaining probability mass is negligible (< 1e-13).
struct LogSupportBounds {
    double t_lo;
    double t_hi;
};
LogSupportBounds log_support_bounds(const FadingParams& params);

/// Panel plan for integrating pdf(e^t) e^t dt over the support window.
std::vector<double> support_panels(const FadingParams& params);

}  // namespace detail

}  // namespace uwoc

#endif
