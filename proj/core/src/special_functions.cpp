#include "uwoc/special_functions.hpp"

#include <cmath>
#include <limits>

#include "uwoc/errors.hpp"

namespace uwoc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxSeriesTerms = 500;
constexpr int kMaxCfIterations = 10000;

// (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu), continued to -EulerGamma at
// mu = 0. The small-|mu| branch sums the even coefficients of the
// Maclaurin series of 1/Gamma, which is exactly this combination and has
// no cancellation; the direct branch is safe once mu is away from zero.
double temme_gamma1(double mu) {
    if (std::fabs(mu) < 0.125) {
        constexpr double c2 = 0.57721566490153286061;   // Euler-Mascheroni
        constexpr double c4 = -0.04200263503409523553;
        constexpr double c6 = -0.04219773455554433675;
        constexpr double c8 = 0.00721894324666309954;
        constexpr double c10 = -0.00021524167411495097;
        constexpr double c12 = -0.00002013485478078824;
        const double m2 = mu * mu;
        return -(c2 + m2 * (c4 + m2 * (c6 + m2 * (c8 + m2 * (c10 + m2 * c12)))));
    }
    return (1.0 / std::tgamma(1.0 - mu) - 1.0 / std::tgamma(1.0 + mu)) / (2.0 * mu);
}

// (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2; no cancellation anywhere.
double temme_gamma2(double mu) {
    return 0.5 * (1.0 / std::tgamma(1.0 - mu) + 1.0 / std::tgamma(1.0 + mu));
}

// Temme's series for K_mu(x) and K_{mu+1}(x); |mu| <= 0.5, 0 < x <= 2.
// Returns the number of terms, or 0 on non-convergence.
int temme_k(double mu, double x, double& kmu, double& kmu1) {
    const double lnt = std::log(2.0 / x);       // ln(2/x)
    const double sigma = mu * lnt;
    const double g1 = temme_gamma1(mu);
    const double g2 = temme_gamma2(mu);
    // mu*pi/sin(mu*pi), continued to 1 at mu = 0.
    const double reflect =
        std::fabs(mu) < 1e-12 ? 1.0 : (mu * kPi) / std::sin(mu * kPi);
    const double sinhc =
        std::fabs(sigma) < 1e-8 ? 1.0 + sigma * sigma / 6.0 : std::sinh(sigma) / sigma;

    double f = reflect * (std::cosh(sigma) * g1 + lnt * sinhc * g2);
    double p = 0.5 * std::exp(mu * lnt) * std::tgamma(1.0 + mu);
    double q = 0.5 * std::exp(-mu * lnt) * std::tgamma(1.0 - mu);
    double h = p;
    double coef = 1.0;
    double sum = f;
    double sum1 = h;

    const double quarter_x2 = 0.25 * x * x;
    for (int k = 1; k <= kMaxSeriesTerms; ++k) {
        const double dk = static_cast<double>(k);
        f = (dk * f + p + q) / (dk * dk - mu * mu);
        p /= dk - mu;
        q /= dk + mu;
        h = p - dk * f;
        coef *= quarter_x2 / dk;
        sum += coef * f;
        sum1 += coef * h;
        if (std::fabs(coef * f) < std::fabs(sum) * kEps) {
            kmu = sum;
            kmu1 = 2.0 * sum1 / x;
            return k;
        }
    }
    return 0;
}

// Steed's continued fraction (Thompson-Barnett) for the scaled functions
// e^x K_mu(x) and e^x K_{mu+1}(x); |mu| <= 0.5, x > 2.
// Returns the number of iterations, or 0 on non-convergence.
int cf2_k_scaled(double mu, double x, double& kmu_scaled, double& kmu1_scaled) {
    double a = mu * mu - 0.25;
    double b = 2.0 * (x + 1.0);
    double D = 1.0 / b;
    double delta = D;
    double f = delta;
    double prev = 0.0;
    double current = 1.0;
    double Q = -a;
    double C = -a;
    double S = 1.0 + Q * delta;

    for (int k = 2; k <= kMaxCfIterations; ++k) {
        a -= 2.0 * (k - 1);
        b += 2.0;
        D = 1.0 / (b + a * D);
        delta *= b * D - 1.0;
        f += delta;

        const double q = (prev - (b - 2.0) * current) / a;
        prev = current;
        current = q;
        C *= -a / static_cast<double>(k);
        Q += C * q;
        S += Q * delta;

        if (std::fabs(Q * delta) < std::fabs(S) * kEps) {
            kmu_scaled = std::sqrt(kPi / (2.0 * x)) / S;
            kmu1_scaled =
                kmu_scaled * (0.5 + mu + x + (mu * mu - 0.25) * f) / x;
            return k;
        }
    }
    return 0;
}

}  // namespace

BesselKLog bessel_k_log(double nu, double x) {
    BesselKLog out;
    if (!(x > 0.0) || !std::isfinite(x) || !std::isfinite(nu)) {
        out.log_value = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    nu = std::fabs(nu);  // K_{-nu} = K_nu

    const int n = static_cast<int>(std::lround(nu));
    const double mu = nu - static_cast<double>(n);  // |mu| <= 0.5

    double kmu = 0.0, kmu1 = 0.0;
    double log_scale = 0.0;
    int iters = 0;
    if (x <= 2.0) {
        iters = temme_k(mu, x, kmu, kmu1);
    } else {
        iters = cf2_k_scaled(mu, x, kmu, kmu1);
        log_scale = -x;  // values above are e^x K
    }
    if (iters == 0 || !std::isfinite(kmu) || !std::isfinite(kmu1)) {
        out.log_value = std::numeric_limits<double>::quiet_NaN();
        return out;
    }

    // Upward recurrence K_{m+1} = K_{m-1} + 2(mu+m)/x K_m, renormalizing
    // the pair whenever it approaches double overflow.
    double prev = kmu;
    double cur = (n == 0) ? kmu : kmu1;
    if (n >= 1) {
        for (int m = 1; m < n; ++m) {
            const double order = mu + static_cast<double>(m);
            const double next = prev + (2.0 * order / x) * cur;
            prev = cur;
            cur = next;
            if (cur > 1e280) {
                prev *= 1e-280;
                cur *= 1e-280;
                log_scale += 280.0 * 2.302585092994045684;  // ln(10^280)
            }
        }
    }

    out.log_value = std::log(cur) + log_scale;
    out.converged = std::isfinite(out.log_value);
    out.terms_or_iterations = iters;
    return out;
}

SpecialFnResult bessel_k(double nu, double x) {
    SpecialFnResult out;
    const BesselKLog lk = bessel_k_log(nu, x);
    out.terms_or_iterations = lk.terms_or_iterations;
    if (!lk.converged) {
        out.value = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    out.value = std::exp(lk.log_value);
    // Converged only while the value itself stays inside double range
    // (normal numbers; subnormals already lose the accuracy contract).
    out.converged = std::isfinite(out.value) && lk.log_value > -708.0;
    return out;
}

double log_gamma(double x) {
    if (!(x > 0.0)) {
        throw InvalidInput("log_gamma requires x > 0");
    }
    return std::lgamma(x);
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / 1.41421356237309504880);
}

namespace {

// Acklam's rational approximation to the probit function; the Halley
// refinement below takes it to ~1 ulp.
double normal_quantile_approx(double p) {
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw InvalidInput("normal_quantile requires p in (0, 1)");
    }
    double z = normal_quantile_approx(p);
    // One Halley step against the exact CDF.
    for (int i = 0; i < 2; ++i) {
        const double e = normal_cdf(z) - p;
        const double pdf = std::exp(-0.5 * z * z) * 0.39894228040143267794;
        if (pdf <= 0.0) break;
        const double u = e / pdf;
        const double step = u / (1.0 + 0.5 * z * u);
        z -= step;
        if (std::fabs(step) < 1e-14 * (1.0 + std::fabs(z))) break;
    }
    return z;
}

}  // namespace uwoc
