#include "uwoc/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <random>

#include "uwoc/errors.hpp"
#include "uwoc/summation.hpp"

namespace uwoc {

namespace {

constexpr double kInactiveLobeWeight = 1e-3;
// Fixed base seed of the multistart Latin-hypercube stream; fitting has
// no user-facing randomness.
constexpr std::uint64_t kMultistartSeed = 0x9E3779B97F4A7C15ull;

std::vector<double> predicted_densities(const EmpiricalPdf& measured,
                                        const FadingParams& params) {
    std::vector<double> out(measured.bin_count());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = pdf(params, measured.bin_center(i));
    }
    return out;
}

// --- search space -----------------------------------------------------

struct Box {
    double lo, hi;
};

// Documented per-family search boxes.
std::vector<Box> family_box(Family family) {
    switch (family) {
        case Family::log_normal:
            return {{1e-6, 5.0}};
        case Family::k_dist:
            return {{0.1, 100.0}};
        case Family::gamma_gamma:
            return {{0.1, 100.0}, {0.1, 100.0}};
        case Family::exp_log_normal:
            return {{0.0, 1.0}, {1e-3, 5.0}, {-3.0, 3.0}, {1e-4, 5.0}};
    }
    return {};
}

// With constrain_mean the mixture drops mu (derived from the unit-mean
// constraint); every other family is structurally unit-mean already.
std::vector<Box> search_box(Family family, bool constrain_mean) {
    std::vector<Box> box = family_box(family);
    if (constrain_mean && family == Family::exp_log_normal) {
        box.erase(box.begin() + 2);
    }
    return box;
}

double sigmoid(double y) { return 1.0 / (1.0 + std::exp(-y)); }
double logit(double u) { return std::log(u / (1.0 - u)); }

std::vector<double> to_params_space(const std::vector<Box>& box,
                                    const std::vector<double>& y) {
    std::vector<double> x(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        x[i] = box[i].lo + (box[i].hi - box[i].lo) * sigmoid(y[i]);
    }
    return x;
}

// Raw coordinates -> FadingParams; returns nullopt when the point is
// infeasible (constrained mixture with no valid mu).
std::optional<FadingParams> assemble(Family family, bool constrain_mean,
                                     const std::vector<double>& x) {
    switch (family) {
        case Family::log_normal:
            return FadingParams{LogNormalParams{x[0]}};
        case Family::k_dist:
            return FadingParams{KDistParams{x[0]}};
        case Family::gamma_gamma:
            return FadingParams{GammaGammaParams{x[0], x[1]}};
        case Family::exp_log_normal:
            break;
    }
    if (!constrain_mean) {
        return FadingParams{ExpLogNormalParams{x[0], x[1], x[2], x[3]}};
    }
    const double k = x[0], gamma = x[1], sigma2 = x[2];
    if (k >= 1.0) {
        return FadingParams{ExpLogNormalParams{k, 1.0, 0.0, sigma2}};
    }
    if (k * gamma >= 1.0) {
        return std::nullopt;
    }
    const double mu = std::log((1.0 - k * gamma) / (1.0 - k)) - 0.5 * sigma2;
    return FadingParams{ExpLogNormalParams{k, gamma, mu, sigma2}};
}

// --- objective ---------------------------------------------------------

class Objective {
public:
    Objective(const EmpiricalPdf& measured, Family family, const FitOptions& options)
        : measured_(measured),
          family_(family),
          options_(options),
          box_(search_box(family, options.constrain_mean)) {
        if (options.bin_weighting == BinWeighting::count_weighted) {
            weights_.resize(measured.bin_count());
            double total = 0.0;
            for (std::size_t i = 0; i < weights_.size(); ++i) {
                weights_[i] = static_cast<double>(measured.counts[i]);
                total += weights_[i];
            }
            for (double& w : weights_) w /= total;
        }
    }

    const std::vector<Box>& box() const { return box_; }
    std::size_t dim() const { return box_.size(); }

    double operator()(const std::vector<double>& y) const {
        const auto params = assemble(family_, options_.constrain_mean,
                                     to_params_space(box_, y));
        if (!params) return kPenalty;
        try {
            return value_at(*params);
        } catch (const Error&) {
            return kPenalty;
        }
    }

    double value_at(const FadingParams& params) const {
        KahanSum acc;
        const std::size_t m = measured_.bin_count();
        for (std::size_t i = 0; i < m; ++i) {
            const double r = measured_.densities[i] - pdf(params, measured_.bin_center(i));
            const double w = weights_.empty() ? 1.0 / static_cast<double>(m) : weights_[i];
            acc.add(w * r * r);
        }
        return std::sqrt(acc.value());
    }

    std::optional<FadingParams> params_at(const std::vector<double>& y) const {
        return assemble(family_, options_.constrain_mean, to_params_space(box_, y));
    }

    static constexpr double kPenalty = 1e100;

private:
    const EmpiricalPdf& measured_;
    Family family_;
    FitOptions options_;
    std::vector<Box> box_;
    std::vector<double> weights_;
};

// --- Nelder-Mead -------------------------------------------------------

struct LocalResult {
    std::vector<double> y;
    double value = Objective::kPenalty;
    long evaluations = 0;
    bool converged = false;
};

LocalResult nelder_mead(const Objective& objective, const std::vector<double>& start,
                        double tolerance, int max_evaluations) {
    const std::size_t d = start.size();
    const double alpha = 1.0, gamma = 2.0, rho = 0.5, shrink = 0.5;

    LocalResult out;
    std::vector<std::vector<double>> verts(d + 1, start);
    std::vector<double> fvals(d + 1);
    for (std::size_t i = 0; i < d; ++i) verts[i + 1][i] += 0.75;
    for (std::size_t i = 0; i <= d; ++i) {
        fvals[i] = objective(verts[i]);
        ++out.evaluations;
    }

    std::vector<std::size_t> order(d + 1);
    while (out.evaluations < max_evaluations) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fvals[a] < fvals[b]; });
        const std::size_t best = order.front(), worst = order.back();
        const std::size_t second_worst = order[d == 0 ? 0 : d - 1];

        if (std::fabs(fvals[worst] - fvals[best]) <=
            tolerance * (1.0 + std::fabs(fvals[best]))) {
            out.converged = true;
            break;
        }

        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i <= d; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < d; ++j) centroid[j] += verts[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(d);

        auto blend = [&](double scale) {
            std::vector<double> p(d);
            for (std::size_t j = 0; j < d; ++j) {
                p[j] = centroid[j] + scale * (verts[worst][j] - centroid[j]);
            }
            return p;
        };

        const auto reflected = blend(-alpha);
        const double f_reflected = objective(reflected);
        ++out.evaluations;

        if (f_reflected < fvals[order[0]]) {
            const auto expanded = blend(-alpha * gamma);
            const double f_expanded = objective(expanded);
            ++out.evaluations;
            if (f_expanded < f_reflected) {
                verts[worst] = expanded;
                fvals[worst] = f_expanded;
            } else {
                verts[worst] = reflected;
                fvals[worst] = f_reflected;
            }
            continue;
        }
        if (f_reflected < fvals[second_worst]) {
            verts[worst] = reflected;
            fvals[worst] = f_reflected;
            continue;
        }
        const auto contracted = blend(rho);
        const double f_contracted = objective(contracted);
        ++out.evaluations;
        if (f_contracted < fvals[worst]) {
            verts[worst] = contracted;
            fvals[worst] = f_contracted;
            continue;
        }
        for (std::size_t i = 0; i <= d; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < d; ++j) {
                verts[i][j] = verts[best][j] + shrink * (verts[i][j] - verts[best][j]);
            }
            fvals[i] = objective(verts[i]);
            ++out.evaluations;
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= d; ++i) {
        if (fvals[i] < fvals[best]) best = i;
    }
    out.y = verts[best];
    out.value = fvals[best];
    return out;
}

// Deterministic multistart points: concatenated 32-point Latin-hypercube
// blocks. Taking a prefix of the same infinite sequence means a larger
// multistart count can only improve the best objective.
std::vector<std::vector<double>> multistart_points(std::size_t dim, int count) {
    constexpr int kBlock = 32;
    std::vector<std::vector<double>> points;
    points.reserve(static_cast<std::size_t>(count));
    const int blocks = (count + kBlock - 1) / kBlock;
    for (int b = 0; b < blocks; ++b) {
        std::mt19937_64 gen(kMultistartSeed + static_cast<std::uint64_t>(b));
        std::vector<std::vector<int>> perms(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            perms[j].resize(kBlock);
            std::iota(perms[j].begin(), perms[j].end(), 0);
            std::shuffle(perms[j].begin(), perms[j].end(), gen);
        }
        for (int i = 0; i < kBlock && static_cast<int>(points.size()) < count; ++i) {
            std::vector<double> y(dim);
            for (std::size_t j = 0; j < dim; ++j) {
                const double u = (perms[j][static_cast<std::size_t>(i)] + 0.5) / kBlock;
                y[j] = logit(u);
            }
            points.push_back(std::move(y));
        }
    }
    return points;
}

}  // namespace

double rmse_pdf(const EmpiricalPdf& measured, const FadingParams& params) {
    measured.validate_structure();
    const auto predicted = predicted_densities(measured, params);
    KahanSum acc;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double r = measured.densities[i] - predicted[i];
        acc.add(r * r);
    }
    return std::sqrt(acc.value() / static_cast<double>(predicted.size()));
}

double r_squared(const EmpiricalPdf& measured, const FadingParams& params) {
    measured.validate_structure();
    if (measured.bin_count() < 2) {
        throw DegenerateHistogram("R^2 needs at least two bins");
    }
    const auto predicted = predicted_densities(measured, params);
    const double mean_density = compensated_mean(measured.densities);
    KahanSum ss_reg, ss_tot;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double r = measured.densities[i] - predicted[i];
        const double c = measured.densities[i] - mean_density;
        ss_reg.add(r * r);
        ss_tot.add(c * c);
    }
    if (ss_tot.value() <= 0.0) {
        throw DegenerateHistogram("all bin densities identical; SS_tot = 0");
    }
    return 1.0 - ss_reg.value() / ss_tot.value();
}

double histogram_scint_index(const EmpiricalPdf& measured) {
    measured.validate_structure();
    KahanSum m1, m2;
    for (std::size_t i = 0; i < measured.bin_count(); ++i) {
        const double mass = measured.densities[i] * measured.bin_width(i);
        const double c = measured.bin_center(i);
        m1.add(mass * c);
        m2.add(mass * c * c);
    }
    const double mean = m1.value();
    return m2.value() / (mean * mean) - 1.0;
}

std::optional<std::string> inactive_lobe(const FadingParams& params) {
    const auto* p = std::get_if<ExpLogNormalParams>(&params);
    if (p == nullptr) return std::nullopt;
    if (p->k < kInactiveLobeWeight) return "exponential";
    if (1.0 - p->k < kInactiveLobeWeight) return "lognormal";
    return std::nullopt;
}

FitResult fit(const EmpiricalPdf& measured, Family family, const FitOptions& options) {
    measured.validate_structure();
    if (options.multistart_count < 1 || options.max_evaluations < 1 ||
        !(options.tolerance > 0.0)) {
        throw InvalidInput("fit options require positive budgets and tolerance");
    }
    if (family == Family::k_dist && histogram_scint_index(measured) <= 1.0) {
        throw InfeasibleFamily(
            "K distribution is inapplicable: empirical scintillation index <= 1");
    }

    const Objective objective(measured, family, options);
    const auto starts = multistart_points(objective.dim(), options.multistart_count);

    std::vector<LocalResult> results(starts.size());
    const auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            results[i] = nelder_mead(objective, starts[i], options.tolerance,
                                     options.max_evaluations);
        }
    };
    const unsigned threads = std::max(1u, options.threads);
    if (threads == 1 || starts.size() == 1) {
        run_range(0, starts.size());
    } else {
        const std::size_t chunk = (starts.size() + threads - 1) / threads;
        std::vector<std::future<void>> futures;
        for (std::size_t begin = 0; begin < starts.size(); begin += chunk) {
            const std::size_t end = std::min(begin + chunk, starts.size());
            futures.push_back(
                std::async(std::launch::async, run_range, begin, end));
        }
        for (auto& f : futures) f.get();
    }

    // Argmin by (objective, start index) so parallel and serial runs agree.
    std::size_t best = 0;
    long total_evaluations = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        total_evaluations += results[i].evaluations;
        if (results[i].value < results[best].value) best = i;
    }

    const auto params = objective.params_at(results[best].y);
    if (!params || results[best].value >= Objective::kPenalty) {
        throw Infeasible("no feasible parameters found for this family");
    }

    FitResult out;
    out.params = *params;
    out.family = family;
    out.constrained = options.constrain_mean;
    out.evaluations = total_evaluations;
    out.converged = results[best].converged;
    out.rmse = rmse_pdf(measured, out.params);
    out.r_squared = r_squared(measured, out.params);
    return out;
}

std::vector<ReportRow> fit_report(const EmpiricalPdf& measured,
                                  const std::vector<Family>& families,
                                  const FitOptions& options) {
    std::vector<ReportRow> rows;
    rows.reserve(families.size());
    for (Family family : families) {
        ReportRow row;
        row.family = family;
        try {
            row.result = fit(measured, family, options);
        } catch (const InfeasibleFamily& e) {
            row.applicable = false;
            row.reason = e.what();
        } catch (const Error& e) {
            row.applicable = false;
            row.reason = e.what();
        }
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
        const double ra = a.result ? a.result->r_squared
                                   : -std::numeric_limits<double>::infinity();
        const double rb = b.result ? b.result->r_squared
                                   : -std::numeric_limits<double>::infinity();
        return ra > rb;
    });
    return rows;
}

}  // namespace uwoc
