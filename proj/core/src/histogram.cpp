#include "uwoc/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uwoc/errors.hpp"
#include "uwoc/summation.hpp"

namespace uwoc {

double EmpiricalPdf::density_integral() const {
    KahanSum acc;
    for (std::size_t i = 0; i < densities.size(); ++i) {
        acc.add(densities[i] * bin_width(i));
    }
    return acc.value();
}

void EmpiricalPdf::validate_structure() const {
    if (densities.empty() || bin_edges.size() != densities.size() + 1 ||
        counts.size() != densities.size()) {
        throw InvalidInput("histogram arrays are inconsistent");
    }
    for (std::size_t i = 0; i + 1 < bin_edges.size(); ++i) {
        if (!(bin_edges[i] < bin_edges[i + 1])) {
            throw InvalidInput("histogram edges must be strictly increasing");
        }
    }
    for (std::size_t i = 0; i < densities.size(); ++i) {
        if (densities[i] < 0.0 || counts[i] < 0) {
            throw InvalidInput("histogram bins must be non-negative");
        }
    }
}

void EmpiricalPdf::validate() const {
    validate_structure();
    std::int64_t total = 0;
    for (std::int64_t c : counts) total += c;
    if (total != n_total) {
        throw InvalidInput("histogram counts do not sum to n_total");
    }
    if (std::fabs(density_integral() - 1.0) > 1e-9) {
        throw InvalidInput("histogram density integral deviates from 1");
    }
}

int auto_bin_count(std::size_t n) {
    const int rice = static_cast<int>(std::ceil(2.0 * std::cbrt(static_cast<double>(n))));
    return std::clamp(rice, 10, 200);
}

namespace {

std::vector<double> uniform_edges(double lo, double hi, int m) {
    std::vector<double> edges(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i <= m; ++i) {
        edges[static_cast<std::size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(m);
    }
    edges.front() = lo;
    edges.back() = hi;
    return edges;
}

}  // namespace

EmpiricalPdf build_histogram(const NormalizedTrace& trace, const BinSpec& bins) {
    trace.validate();
    const auto& values = trace.values;

    const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *min_it;
    const double hi = *max_it;

    std::vector<double> edges;
    if (const auto* explicit_edges = std::get_if<std::vector<double>>(&bins.spec)) {
        edges = *explicit_edges;
        if (edges.size() < 2) {
            throw InvalidInput("need at least two bin edges");
        }
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            if (!(edges[i] < edges[i + 1])) {
                throw InvalidInput("bin edges must be strictly increasing");
            }
        }
    } else {
        if (lo == hi) {
            throw DegenerateRange("all values identical; zero-width data range");
        }
        int m = 0;
        if (const auto* count = std::get_if<int>(&bins.spec)) {
            m = *count;
            if (m < 1) throw InvalidInput("bin count must be >= 1");
        } else {
            m = auto_bin_count(values.size());
        }
        edges = uniform_edges(lo, hi, m);
    }

    const std::size_t m = edges.size() - 1;
    EmpiricalPdf out;
    out.bin_edges = edges;
    out.counts.assign(m, 0);
    out.densities.assign(m, 0.0);

    // Half-open bins with the final bin closed; samples outside an
    // explicit edge range are excluded (n_total counts tallied samples
    // so the density integral stays 1).
    std::int64_t tallied = 0;
    for (double v : values) {
        if (v < edges.front() || v > edges.back()) continue;
        auto it = std::upper_bound(edges.begin(), edges.end(), v);
        std::size_t idx = static_cast<std::size_t>(it - edges.begin());
        if (idx == 0) idx = 1;                 // v == edges.front()
        if (idx > m) idx = m;                  // v == edges.back()
        ++out.counts[idx - 1];
        ++tallied;
    }
    if (tallied == 0) {
        throw InvalidInput("no samples fall inside the bin edges");
    }
    out.n_total = tallied;

    for (std::size_t i = 0; i < m; ++i) {
        const double width = edges[i + 1] - edges[i];
        out.densities[i] = static_cast<double>(out.counts[i]) /
                           (static_cast<double>(out.n_total) * width);
    }
    return out;
}

}  // namespace uwoc
