#ifndef UWOC_QUADRATURE_HPP
#define UWOC_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace uwoc {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = false;
    int evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (QUADPACK dqk15).
inline constexpr double kGk15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kGk15Weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kGauss7Weights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

template <typename F>
void gk15(const F& f, double a, double b, double& value, double& error) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double result_kronrod = kGk15Weights[7] * f(center);
    double result_gauss = kGauss7Weights[3] * f(center);
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kGk15Nodes[i];
        const double fsum = f(center - dx) + f(center + dx);
        result_kronrod += kGk15Weights[i] * fsum;
        if (i % 2 == 1) {
            result_gauss += kGauss7Weights[i / 2] * fsum;
        }
    }
    value = result_kronrod * half;
    error = std::fabs((result_kronrod - result_gauss) * half);
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration over the union of the
/// panels described by `edges` (ascending), to an absolute tolerance.
/// Seeding the refinement with caller-chosen panels keeps narrow
/// features from slipping between the nodes of one wide interval.
/// Deterministic: the refinement order depends only on the inputs, and
/// the final sum runs left to right.
template <typename F>
QuadratureResult integrate_partitioned(const F& f, std::vector<double> edges,
                                       double abs_tol, int max_segments = 4000) {
    struct Segment {
        double a, b, value, error;
    };

    QuadratureResult out;
    if (edges.size() < 2) {
        out.converged = true;
        return out;
    }

    std::vector<Segment> segments;
    segments.reserve(edges.size() - 1);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (!(edges[i] < edges[i + 1])) continue;
        Segment s{edges[i], edges[i + 1], 0.0, 0.0};
        detail::gk15(f, s.a, s.b, s.value, s.error);
        out.evaluations += 15;
        segments.push_back(s);
    }
    if (segments.empty()) {
        out.converged = true;
        return out;
    }

    auto worst = [&]() {
        std::size_t w = 0;
        for (std::size_t i = 1; i < segments.size(); ++i) {
            if (segments[i].error > segments[w].error) w = i;
        }
        return w;
    };

    double total_error = 0.0;
    for (const Segment& seg : segments) total_error += seg.error;
    while (total_error > abs_tol &&
           static_cast<int>(segments.size()) < max_segments) {
        const std::size_t w = worst();
        const Segment seg = segments[w];
        const double mid = 0.5 * (seg.a + seg.b);
        if (mid <= seg.a || mid >= seg.b) break;  // interval at double resolution
        Segment left{seg.a, mid, 0.0, 0.0};
        Segment right{mid, seg.b, 0.0, 0.0};
        detail::gk15(f, left.a, left.b, left.value, left.error);
        detail::gk15(f, right.a, right.b, right.value, right.error);
        out.evaluations += 30;
        segments[w] = left;
        segments.push_back(right);
        total_error += left.error + right.error - seg.error;
    }

    std::sort(segments.begin(), segments.end(),
              [](const Segment& x, const Segment& y) { return x.a < y.a; });
    double sum = 0.0, comp = 0.0;
    double err = 0.0;
    for (const Segment& seg : segments) {
        const double t = sum + seg.value;
        if (std::fabs(sum) >= std::fabs(seg.value)) {
            comp += (sum - t) + seg.value;
        } else {
            comp += (seg.value - t) + sum;
        }
        sum = t;
        err += seg.error;
    }
    out.value = sum + comp;
    out.error_estimate = err;
    out.converged = err <= abs_tol;
    return out;
}

/// Adaptive integration of f over the single interval [a, b].
template <typename F>
QuadratureResult integrate(const F& f, double a, double b, double abs_tol,
                           int max_segments = 4000) {
    if (!(b > a)) {
        QuadratureResult out;
        out.converged = true;
        return out;
    }
    return integrate_partitioned(f, std::vector<double>{a, b}, abs_tol, max_segments);
}

}  // namespace uwoc

#endif
