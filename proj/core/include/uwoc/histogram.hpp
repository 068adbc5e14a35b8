#ifndef UWOC_HISTOGRAM_HPP
#define UWOC_HISTOGRAM_HPP

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "uwoc/trace.hpp"

namespace uwoc {

/// Density-normalized histogram of normalized intensity. Bins are
/// half-open [lo, hi) with the last bin closed, so every tallied sample
/// lands in exactly one bin and the density integral is 1.
struct EmpiricalPdf {
    std::vector<double> bin_edges;        // M+1, strictly increasing
    std::vector<double> densities;        // M, probability density per unit h
    std::vector<std::int64_t> counts;     // M
    std::int64_t n_total = 0;

    std::size_t bin_count() const noexcept { return densities.size(); }
    double bin_width(std::size_t i) const { return bin_edges[i + 1] - bin_edges[i]; }
    double bin_center(std::size_t i) const { return 0.5 * (bin_edges[i] + bin_edges[i + 1]); }

    /// Integral of densities over the bins (should be 1 within 1e-9).
    double density_integral() const;
    /// Shape and sign checks only; what the fit metrics require.
    void validate_structure() const;
    /// Structure plus the count and density-integral invariants; holds
    /// for every build_histogram output.
    void validate() const;
};

/// Bin selection: explicit edges, a fixed count over the data range, or
/// the automatic rule (Rice, M = ceil(2 N^(1/3)), clamped to [10, 200]).
struct BinSpec {
    struct Auto {};
    std::variant<Auto, int, std::vector<double>> spec = Auto{};

    static BinSpec automatic() { return {}; }
    static BinSpec count(int m) { return {.spec = m}; }
    static BinSpec edges(std::vector<double> e) { return {.spec = std::move(e)}; }
};

/// Automatic bin count for n samples.
int auto_bin_count(std::size_t n);

/// Tallies the trace into bins. Explicit edges must cover the full data
/// range (the histogram invariants require every sample to be counted).
/// Throws DegenerateRange when all values are identical and no explicit
/// edges are given.
EmpiricalPdf build_histogram(const NormalizedTrace& trace,
                             const BinSpec& bins = BinSpec::automatic());

}  // namespace uwoc

#endif
