#include "uwoc/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uwoc/errors.hpp"
#include "uwoc/quadrature.hpp"
#include "uwoc/rng.hpp"
#include "uwoc/special_functions.hpp"

namespace uwoc {

namespace {

constexpr double kLn2Pi = 1.83787706640934548356;
constexpr double kMaxExpArg = 709.0;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Log-domain parameters of the log-normal fading law: ln h is Gaussian
// with mean -2 sigma2_X and variance 4 sigma2_X.
double ln_location(const LogNormalParams& p) { return -2.0 * p.sigma2_X; }
double ln_scale2(const LogNormalParams& p) { return 4.0 * p.sigma2_X; }

double gaussian_log_density(double t, double mean, double var) {
    const double d = t - mean;
    return -0.5 * d * d / var - 0.5 * (kLn2Pi + std::log(var));
}

// ln K_nu(2 sqrt(q e^t)) where q > 0, with the analytic small-argument
// form once the argument underflows the Bessel routine's range.
double log_bessel_of_sqrt(double nu, double q, double t) {
    const double log_half_arg = 0.5 * (std::log(q) + t);  // ln sqrt(q e^t)
    const double arg = 2.0 * std::exp(log_half_arg);
    if (arg >= 1e-6) {
        const BesselKLog lk = bessel_k_log(nu, arg);
        if (!lk.converged) {
            throw NumericOverflow("Bessel K evaluation failed (nu=" +
                                  std::to_string(nu) + ", x=" + std::to_string(arg) + ")");
        }
        return lk.log_value;
    }
    const double abs_nu = std::fabs(nu);
    if (abs_nu > 1e-8) {
        // K_nu(z) ~ Gamma(|nu|)/2 * (z/2)^{-|nu|}
        return std::lgamma(abs_nu) - std::log(2.0) - abs_nu * log_half_arg;
    }
    // K_0(z) ~ -ln(z/2) - EulerGamma
    return std::log(-log_half_arg - 0.57721566490153286061);
}

struct LogPdfVisitor {
    double t;  // ln h

    double operator()(const LogNormalParams& p) const {
        return gaussian_log_density(t, ln_location(p), ln_scale2(p)) - t;
    }

    double operator()(const KDistParams& p) const {
        const double a = p.alpha;
        return std::log(2.0) + std::log(a) - std::lgamma(a) +
               0.5 * (a - 1.0) * (std::log(a) + t) +
               log_bessel_of_sqrt(a - 1.0, a, t);
    }

    double operator()(const GammaGammaParams& p) const {
        const double a = p.alpha;
        const double b = p.beta;
        const double ab = a * b;
        return std::log(2.0) + 0.5 * (a + b) * std::log(ab) - std::lgamma(a) -
               std::lgamma(b) + (0.5 * (a + b) - 1.0) * t +
               log_bessel_of_sqrt(a - b, ab, t);
    }

    double operator()(const ExpLogNormalParams& p) const {
        const double h = std::exp(t);
        double exp_lobe = kNegInf;
        if (p.k > 0.0) {
            exp_lobe = std::log(p.k) - std::log(p.gamma) - h / p.gamma;
        }
        double ln_lobe = kNegInf;
        if (p.k < 1.0) {
            ln_lobe = std::log1p(-p.k) +
                      gaussian_log_density(t, p.mu, p.sigma2) - t;
        }
        // log-sum-exp of the two lobes
        const double m = std::max(exp_lobe, ln_lobe);
        if (m == kNegInf) return kNegInf;
        return m + std::log(std::exp(exp_lobe - m) + std::exp(ln_lobe - m));
    }
};

double exp_or_overflow(double log_value, const char* what) {
    if (log_value > kMaxExpArg) {
        throw NumericOverflow(what);
    }
    return std::exp(log_value);
}

bool uses_numeric_cdf(const FadingParams& params) {
    return std::holds_alternative<KDistParams>(params) ||
           std::holds_alternative<GammaGammaParams>(params);
}

// Cumulative table of F(t) = P(ln h <= t) for the numeric-CDF families.
// One refined panel sweep amortizes across many inversions.
class CumulativeCdf {
public:
    explicit CumulativeCdf(const FadingParams& params) : params_(params) {
        std::vector<double> edges = detail::support_panels(params);

        struct Panel {
            double a, b, value, error;
        };
        std::vector<Panel> panels;
        panels.reserve(edges.size() + 64);
        auto eval = [&](Panel& p) {
            detail::gk15([&](double t) { return integrand(t); }, p.a, p.b,
                         p.value, p.error);
        };
        double total_error = 0.0;
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            Panel p{edges[i], edges[i + 1], 0.0, 0.0};
            eval(p);
            panels.push_back(p);
            total_error += p.error;
        }
        while (total_error > 1e-12 && panels.size() < 20000) {
            std::size_t w = 0;
            for (std::size_t i = 1; i < panels.size(); ++i) {
                if (panels[i].error > panels[w].error) w = i;
            }
            const Panel seg = panels[w];
            const double mid = 0.5 * (seg.a + seg.b);
            if (mid <= seg.a || mid >= seg.b) break;
            Panel left{seg.a, mid, 0.0, 0.0};
            Panel right{mid, seg.b, 0.0, 0.0};
            eval(left);
            eval(right);
            panels[w] = left;
            panels.push_back(right);
            total_error += left.error + right.error - seg.error;
        }
        std::sort(panels.begin(), panels.end(),
                  [](const Panel& x, const Panel& y) { return x.a < y.a; });

        edges_.reserve(panels.size() + 1);
        cum_.reserve(panels.size() + 1);
        edges_.push_back(panels.front().a);
        cum_.push_back(0.0);
        double running = 0.0;
        for (const Panel& p : panels) {
            running += p.value;
            edges_.push_back(p.b);
            cum_.push_back(running);
        }
        total_ = running;
    }

    double integrand(double t) const {
        const double lg = detail::log_pdf_at_log_h(params_, t) + t;
        return lg < -745.0 ? 0.0 : std::exp(lg);
    }

    double total() const { return total_; }

    // F(t) for t inside the table range.
    double value_at(double t) const {
        if (t <= edges_.front()) return 0.0;
        if (t >= edges_.back()) return total_;
        const auto it = std::upper_bound(edges_.begin(), edges_.end(), t);
        const std::size_t j = static_cast<std::size_t>(it - edges_.begin()) - 1;
        double part, err;
        detail::gk15([&](double u) { return integrand(u); }, edges_[j], t, part, err);
        return cum_[j] + part;
    }

    // Smallest t with F(t) = p; Newton refined, bisection safeguarded.
    double invert(double p) const {
        if (p <= 0.0) return edges_.front();
        if (p >= total_) return edges_.back();
        const auto it = std::lower_bound(cum_.begin(), cum_.end(), p);
        std::size_t j = static_cast<std::size_t>(it - cum_.begin());
        if (j == 0) j = 1;
        double lo = edges_[j - 1], hi = edges_[j];
        const double f_lo = cum_[j - 1];

        double t = 0.5 * (lo + hi);
        for (int iter = 0; iter < 60; ++iter) {
            double part, err;
            detail::gk15([&](double u) { return integrand(u); }, edges_[j - 1], t,
                         part, err);
            const double resid = f_lo + part - p;
            if (std::fabs(resid) < 1e-13 || hi - lo < 1e-14 * (1.0 + std::fabs(t))) {
                return t;
            }
            if (resid > 0.0) {
                hi = t;
            } else {
                lo = t;
            }
            const double g = integrand(t);
            double next = g > 0.0 ? t - resid / g : 0.5 * (lo + hi);
            if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
            t = next;
        }
        return t;
    }

private:
    FadingParams params_;
    std::vector<double> edges_;
    std::vector<double> cum_;
    double total_ = 0.0;
};

double closed_form_cdf(const FadingParams& params, double h) {
    if (const auto* ln = std::get_if<LogNormalParams>(&params)) {
        if (h <= 0.0) return 0.0;
        return normal_cdf((std::log(h) - ln_location(*ln)) / std::sqrt(ln_scale2(*ln)));
    }
    const auto& p = std::get<ExpLogNormalParams>(params);
    if (h <= 0.0) return 0.0;
    double c = p.k * (-std::expm1(-h / p.gamma));
    if (p.k < 1.0) {
        c += (1.0 - p.k) * normal_cdf((std::log(h) - p.mu) / std::sqrt(p.sigma2));
    }
    return std::clamp(c, 0.0, 1.0);
}

// Brent-style inversion of a closed-form CDF.
double invert_closed_cdf(const FadingParams& params, double p, double lo_hint) {
    double lo = lo_hint;
    double hi = std::max(1.0, 2.0 * lo_hint);
    int guard = 0;
    while (closed_form_cdf(params, hi) < p) {
        hi *= 2.0;
        if (++guard > 2400) {
            throw BracketFailure("cannot bracket quantile from above");
        }
    }
    while (lo > 0.0 && closed_form_cdf(params, lo) > p) {
        lo *= 0.25;
        if (lo < 1e-320) lo = 0.0;
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double f = closed_form_cdf(params, mid) - p;
        if (std::fabs(f) < 1e-13 || hi - lo < 1e-15 * (1.0 + mid)) {
            return mid;
        }
        if (f > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

Family family_of(const FadingParams& params) noexcept {
    switch (params.index()) {
        case 0: return Family::log_normal;
        case 1: return Family::k_dist;
        case 2: return Family::gamma_gamma;
        default: return Family::exp_log_normal;
    }
}

std::string_view family_tag(Family family) noexcept {
    switch (family) {
        case Family::log_normal: return "lognormal";
        case Family::k_dist: return "k";
        case Family::gamma_gamma: return "gamma_gamma";
        case Family::exp_log_normal: return "exp_lognormal";
    }
    return "";
}

std::optional<Family> family_from_tag(std::string_view tag) noexcept {
    if (tag == "lognormal") return Family::log_normal;
    if (tag == "k") return Family::k_dist;
    if (tag == "gamma_gamma") return Family::gamma_gamma;
    if (tag == "exp_lognormal") return Family::exp_log_normal;
    return std::nullopt;
}

void validate_params(const FadingParams& params) {
    const auto positive_finite = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw InvalidInput(std::string(name) + " must be positive and finite");
        }
    };
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, LogNormalParams>) {
                positive_finite(p.sigma2_X, "sigma2_X");
            } else if constexpr (std::is_same_v<T, KDistParams>) {
                positive_finite(p.alpha, "alpha");
            } else if constexpr (std::is_same_v<T, GammaGammaParams>) {
                positive_finite(p.alpha, "alpha");
                positive_finite(p.beta, "beta");
            } else {
                if (!(p.k >= 0.0 && p.k <= 1.0)) {
                    throw InvalidInput("mixture weight k must lie in [0, 1]");
                }
                positive_finite(p.gamma, "gamma");
                positive_finite(p.sigma2, "sigma2");
                if (!std::isfinite(p.mu)) {
                    throw InvalidInput("mu must be finite");
                }
            }
        },
        params);
}

namespace detail {

double log_pdf_at_log_h(const FadingParams& params, double t) {
    return std::visit(LogPdfVisitor{t}, params);
}

LogSupportBounds log_support_bounds(const FadingParams& params) {
    return std::visit(
        [](const auto& p) -> LogSupportBounds {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, LogNormalParams>) {
                const double m = ln_location(p);
                const double s = std::sqrt(ln_scale2(p));
                return {m - 42.0 * s, m + 42.0 * s};
            } else if constexpr (std::is_same_v<T, KDistParams>) {
                const double mass_exp = std::min(p.alpha, 1.0);
                return {-(46.0 + 46.0 / mass_exp),
                        std::max(16.0, 2.0 * std::log(450.0) - std::log(p.alpha) + 6.0)};
            } else if constexpr (std::is_same_v<T, GammaGammaParams>) {
                const double mass_exp = std::min({p.alpha, p.beta, 1.0});
                return {-(46.0 + 46.0 / mass_exp),
                        std::max(16.0,
                                 2.0 * std::log(450.0) - std::log(p.alpha * p.beta) + 6.0)};
            } else {
                const double s = std::sqrt(p.sigma2);
                double lo = p.mu - 42.0 * s;
                double hi = p.mu + 42.0 * s;
                if (p.k > 0.0) {
                    lo = std::min(lo, std::log(p.gamma) - 42.0);
                    hi = std::max(hi, std::log(p.gamma) + std::log(745.0));
                }
                return {lo, hi};
            }
        },
        params);
}

std::vector<double> support_panels(const FadingParams& params) {
    const LogSupportBounds b = log_support_bounds(params);
    std::vector<double> edges;
    const double core_lo = std::max(b.t_lo, -12.0);
    const double core_hi = std::min(b.t_hi, 12.0);

    edges.push_back(b.t_lo);
    if (core_lo > b.t_lo) {
        const int n = 12;
        for (int i = 1; i < n; ++i) {
            edges.push_back(b.t_lo + (core_lo - b.t_lo) * i / n);
        }
        edges.push_back(core_lo);
    }
    if (core_hi > core_lo) {
        const int n = std::max(1, static_cast<int>(std::ceil((core_hi - core_lo) / 0.5)));
        for (int i = 1; i < n; ++i) {
            edges.push_back(core_lo + (core_hi - core_lo) * i / n);
        }
        edges.push_back(core_hi);
    }
    if (b.t_hi > core_hi) {
        const int n = 12;
        for (int i = 1; i < n; ++i) {
            edges.push_back(core_hi + (b.t_hi - core_hi) * i / n);
        }
        edges.push_back(b.t_hi);
    }
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

}  // namespace detail

double pdf(const FadingParams& params, double h) {
    validate_params(params);
    if (!(h >= 0.0) || !std::isfinite(h)) {
        throw InvalidInput("pdf requires finite h >= 0");
    }
    if (h == 0.0) {
        if (const auto* p = std::get_if<ExpLogNormalParams>(&params)) {
            return p->k / p->gamma;  // exponential lobe limit
        }
        return 0.0;
    }
    const double lg = detail::log_pdf_at_log_h(params, std::log(h));
    if (lg < -745.0) return 0.0;
    return exp_or_overflow(lg, "pdf exceeds double range");
}

double cdf(const FadingParams& params, double h) {
    validate_params(params);
    if (!(h >= 0.0)) {
        throw InvalidInput("cdf requires h >= 0");
    }
    if (h == 0.0) return 0.0;
    if (!uses_numeric_cdf(params)) {
        return closed_form_cdf(params, h);
    }
    const double t = std::log(h);
    const auto bounds = detail::log_support_bounds(params);
    if (t <= bounds.t_lo) return 0.0;

    std::vector<double> edges = detail::support_panels(params);
    edges.erase(std::remove_if(edges.begin(), edges.end(),
                               [&](double e) { return e >= t; }),
                edges.end());
    edges.push_back(std::min(t, bounds.t_hi + 1.0));
    const auto integrand = [&](double u) {
        const double lg = detail::log_pdf_at_log_h(params, u) + u;
        return lg < -745.0 ? 0.0 : std::exp(lg);
    };
    const QuadratureResult q = integrate_partitioned(integrand, edges, 1e-10, 20000);
    if (!q.converged) {
        throw QuadratureFailure("cdf quadrature did not reach 1e-10");
    }
    return std::clamp(q.value, 0.0, 1.0);
}

double quantile(const FadingParams& params, double p) {
    validate_params(params);
    if (!(p > 0.0 && p < 1.0)) {
        throw InvalidInput("quantile requires p in (0, 1)");
    }
    const double probs[1] = {p};
    double out[1];
    quantile_grid(params, probs, out);
    return out[0];
}

void quantile_grid(const FadingParams& params, std::span<const double> probs,
                   std::span<double> out) {
    validate_params(params);
    if (probs.size() != out.size()) {
        throw LengthMismatch("quantile_grid spans differ in length");
    }
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (!(probs[i] > 0.0 && probs[i] < 1.0)) {
            throw InvalidInput("quantile probabilities must lie in (0, 1)");
        }
        if (i > 0 && probs[i] < probs[i - 1]) {
            throw InvalidInput("quantile probabilities must be ascending");
        }
    }

    if (const auto* ln = std::get_if<LogNormalParams>(&params)) {
        const double m = ln_location(*ln);
        const double s = std::sqrt(ln_scale2(*ln));
        for (std::size_t i = 0; i < probs.size(); ++i) {
            out[i] = std::exp(m + s * normal_quantile(probs[i]));
        }
        return;
    }
    if (std::holds_alternative<ExpLogNormalParams>(params)) {
        double hint = 1e-6;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            out[i] = invert_closed_cdf(params, probs[i], hint);
            hint = std::max(out[i], 1e-6);
        }
        return;
    }

    const CumulativeCdf table(params);
    if (table.total() < 0.999) {
        throw BracketFailure("numeric CDF mass is defective; cannot invert");
    }
    for (std::size_t i = 0; i < probs.size(); ++i) {
        out[i] = std::exp(table.invert(probs[i]));
    }
}

double scintillation_from_params(const FadingParams& params) {
    validate_params(params);
    return std::visit(
        [](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, LogNormalParams>) {
                return std::expm1(4.0 * p.sigma2_X);
            } else if constexpr (std::is_same_v<T, KDistParams>) {
                return 1.0 + 2.0 / p.alpha;
            } else if constexpr (std::is_same_v<T, GammaGammaParams>) {
                return 1.0 / p.alpha + 1.0 / p.beta + 1.0 / (p.alpha * p.beta);
            } else {
                const double m1 =
                    p.k * p.gamma + (1.0 - p.k) * std::exp(p.mu + 0.5 * p.sigma2);
                const double m2 = 2.0 * p.k * p.gamma * p.gamma +
                                  (1.0 - p.k) * std::exp(2.0 * p.mu + 2.0 * p.sigma2);
                return m2 / (m1 * m1) - 1.0;
            }
        },
        params);
}

FadingParams params_from_scint(Family family, double scint_index) {
    if (!(scint_index > 0.0) || !std::isfinite(scint_index)) {
        throw InvalidInput("scintillation index must be positive and finite");
    }
    switch (family) {
        case Family::log_normal:
            return LogNormalParams{0.25 * std::log1p(scint_index)};
        case Family::k_dist:
            if (scint_index <= 1.0) {
                throw OutOfSupport(
                    "K distribution requires scintillation index > 1");
            }
            return KDistParams{2.0 / (scint_index - 1.0)};
        case Family::gamma_gamma:
        case Family::exp_log_normal:
            throw UnderdeterminedFamily(
                "family is not determined by the scintillation index alone");
    }
    throw InvalidInput("unknown family");
}

double moment(const FadingParams& params, int n) {
    validate_params(params);
    if (n < 1) {
        throw InvalidInput("moment order must be >= 1");
    }
    const double dn = static_cast<double>(n);
    return std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, LogNormalParams>) {
                // exp(2 n mu_X + 2 n^2 sigma2_X) with mu_X = -sigma2_X
                return exp_or_overflow(2.0 * dn * (dn - 1.0) * p.sigma2_X,
                                       "log-normal moment overflows");
            } else if constexpr (std::is_same_v<T, KDistParams>) {
                const double lg = std::lgamma(dn + 1.0) + std::lgamma(p.alpha + dn) -
                                  std::lgamma(p.alpha) - dn * std::log(p.alpha);
                return exp_or_overflow(lg, "K moment overflows");
            } else if constexpr (std::is_same_v<T, GammaGammaParams>) {
                const double lg = std::lgamma(p.alpha + dn) - std::lgamma(p.alpha) +
                                  std::lgamma(p.beta + dn) - std::lgamma(p.beta) -
                                  dn * std::log(p.alpha * p.beta);
                return exp_or_overflow(lg, "gamma-gamma moment overflows");
            } else {
                double m = 0.0;
                if (p.k > 0.0) {
                    const double lg = std::log(p.k) + dn * std::log(p.gamma) +
                                      std::lgamma(dn + 1.0);
                    m += exp_or_overflow(lg, "mixture moment overflows");
                }
                if (p.k < 1.0) {
                    const double lg = std::log1p(-p.k) + dn * p.mu +
                                      0.5 * dn * dn * p.sigma2;
                    m += exp_or_overflow(lg, "mixture moment overflows");
                }
                return m;
            }
        },
        params);
}

FadingParams enforce_normalization(const FadingParams& params) {
    validate_params(params);
    if (!std::holds_alternative<ExpLogNormalParams>(params)) {
        // E[h] = 1 holds structurally for the other three families.
        return params;
    }
    ExpLogNormalParams p = std::get<ExpLogNormalParams>(params);
    if (p.k >= 1.0) {
        p.gamma = 1.0;
        return p;
    }
    if (p.k * p.gamma < 1.0) {
        // Solve k gamma + (1-k) exp(mu + sigma2/2) = 1 for mu.
        p.mu = std::log((1.0 - p.k * p.gamma) / (1.0 - p.k)) - 0.5 * p.sigma2;
        return p;
    }
    const double ln_part = (1.0 - p.k) * std::exp(p.mu + 0.5 * p.sigma2);
    const double gamma_new = (1.0 - ln_part) / p.k;
    if (!(gamma_new > 0.0)) {
        throw Infeasible("no gamma > 0 satisfies the unit-mean constraint");
    }
    p.gamma = gamma_new;
    return p;
}

std::vector<double> sample(const FadingParams& params, std::size_t n,
                           std::uint64_t seed) {
    validate_params(params);
    if (n < 1) {
        throw InvalidInput("sample count must be >= 1");
    }
    std::vector<double> out(n);
    Rng rng(seed);
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, LogNormalParams>) {
                const double m = ln_location(p);
                const double s = std::sqrt(ln_scale2(p));
                for (double& v : out) v = std::exp(m + s * rng.normal());
            } else if constexpr (std::is_same_v<T, KDistParams>) {
                for (double& v : out) {
                    const double y = rng.gamma_unit_mean(p.alpha);
                    v = y * rng.exponential(1.0);
                }
            } else if constexpr (std::is_same_v<T, GammaGammaParams>) {
                for (double& v : out) {
                    const double x = rng.gamma_unit_mean(p.alpha);
                    const double y = rng.gamma_unit_mean(p.beta);
                    v = x * y;
                }
            } else {
                const double s = std::sqrt(p.sigma2);
                for (double& v : out) {
                    if (rng.bernoulli(p.k)) {
                        v = rng.exponential(p.gamma);
                    } else {
                        v = std::exp(p.mu + s * rng.normal());
                    }
                }
            }
        },
        params);
    return out;
}

}  // namespace uwoc
