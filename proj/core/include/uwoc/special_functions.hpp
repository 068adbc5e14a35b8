#ifndef UWOC_SPECIAL_FUNCTIONS_HPP
#define UWOC_SPECIAL_FUNCTIONS_HPP

namespace uwoc {

/// Outcome of a special-function evaluation. `converged` implies the
/// value is finite and meets the documented accuracy.
struct SpecialFnResult {
    double value = 0.0;
    bool converged = false;
    int terms_or_iterations = 0;
};

/// ln K_nu(x) with the K value itself possibly far outside double range.
struct BesselKLog {
    double log_value = 0.0;
    bool converged = false;
    int terms_or_iterations = 0;
};

/// Modified Bessel function of the second kind, K_nu(x), x > 0.
/// Symmetric in nu. Accurate to >= 10 significant digits for
/// nu in [-100, 100] and x in (1e-6, 700); converged=false outside that
/// envelope or when the value leaves double range.
SpecialFnResult bessel_k(double nu, double x);

/// ln K_nu(x); usable where K itself overflows (large nu, small x).
BesselKLog bessel_k_log(double nu, double x);

/// ln Gamma(x), x > 0.
double log_gamma(double x);

/// Standard normal CDF, accurate in both tails.
double normal_cdf(double z);

/// Inverse of normal_cdf on (0, 1).
double normal_quantile(double p);

}  // namespace uwoc

#endif
