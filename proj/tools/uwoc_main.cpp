// uwoc - underwater optical channel fading statistics toolkit.
//
// Subcommands: analyze, fit, simulate, pdf, covariance. All outputs are
// deterministic given the flags (seeds are explicit wherever randomness
// exists), so repeated runs are byte-identical.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "uwoc/distributions.hpp"
#include "uwoc/errors.hpp"
#include "uwoc/estimation.hpp"
#include "uwoc/fitting.hpp"
#include "uwoc/format.hpp"
#include "uwoc/histogram.hpp"
#include "uwoc/json_io.hpp"
#include "uwoc/simulation.hpp"
#include "uwoc/summation.hpp"
#include "uwoc/trace_io.hpp"
#include "uwoc/version.hpp"

namespace {

using uwoc::ordered_json;

constexpr int kExitParse = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitInfeasibleFamily = 4;
constexpr int kExitInvalidFlags = 5;
// Base seed of the deterministic fit multistart stream (see fitting.cpp).
constexpr std::uint64_t kMultistartSeed = 0x9E3779B97F4A7C15ull;

struct CommonFitFlags {
    int bins = 0;  // 0 = AUTO
    int multistart = 32;
    int max_evals = 4000;
    double tolerance = 1e-8;
    bool constrain_mean = false;
    std::string weighting = "uniform";
    unsigned threads = 1;
};

struct ParamFlags {
    std::string family;
    double sigma2x = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double k = 0.0;
    double gamma = 1.0;
    double mu = 0.0;
    double sigma2 = 0.0;
};

uwoc::FadingParams params_from_flags(const ParamFlags& f) {
    const auto family = uwoc::family_from_tag(f.family);
    if (!family) {
        throw uwoc::InvalidInput("unknown family: " + f.family +
                                 " (expected lognormal|k|gamma_gamma|exp_lognormal)");
    }
    uwoc::FadingParams params;
    switch (*family) {
        case uwoc::Family::log_normal:
            params = uwoc::LogNormalParams{f.sigma2x};
            break;
        case uwoc::Family::k_dist:
            params = uwoc::KDistParams{f.alpha};
            break;
        case uwoc::Family::gamma_gamma:
            params = uwoc::GammaGammaParams{f.alpha, f.beta};
            break;
        case uwoc::Family::exp_log_normal:
            params = uwoc::ExpLogNormalParams{f.k, f.gamma, f.mu, f.sigma2};
            break;
    }
    uwoc::validate_params(params);
    return params;
}

uwoc::FitOptions fit_options_from_flags(const CommonFitFlags& f) {
    uwoc::FitOptions opts;
    opts.constrain_mean = f.constrain_mean;
    opts.multistart_count = f.multistart;
    opts.max_evaluations = f.max_evals;
    opts.tolerance = f.tolerance;
    opts.threads = f.threads;
    if (f.weighting == "uniform") {
        opts.bin_weighting = uwoc::BinWeighting::uniform;
    } else if (f.weighting == "count") {
        opts.bin_weighting = uwoc::BinWeighting::count_weighted;
    } else {
        throw uwoc::InvalidInput("unknown weighting: " + f.weighting);
    }
    return opts;
}

uwoc::BinSpec bin_spec_from_flag(int bins) {
    return bins > 0 ? uwoc::BinSpec::count(bins) : uwoc::BinSpec::automatic();
}

// --out paths honor the UWOC_OUT_PREFIX environment variable (relative
// paths only).
std::filesystem::path resolve_out_path(const std::string& out) {
    std::filesystem::path p(out);
    if (const char* prefix = std::getenv("UWOC_OUT_PREFIX");
        prefix != nullptr && *prefix != '\0' && p.is_relative()) {
        return std::filesystem::path(prefix) / p;
    }
    return p;
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    const auto path = resolve_out_path(out);
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw uwoc::Error("cannot open output file: " + path.string());
    }
    file << text;
}

// --config <file>: a JSON object whose keys mirror long flag names;
// explicit flags win. Implemented by prepending synthesized arguments,
// so one CLI11 parse sees everything.
std::vector<std::string> merge_config_args(const std::vector<std::string>& args) {
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        }
    }
    if (config_path.empty()) return args;

    std::ifstream in(config_path);
    if (!in) {
        throw uwoc::InvalidInput("cannot open config file: " + config_path);
    }
    ordered_json cfg;
    try {
        in >> cfg;
    } catch (const std::exception& e) {
        throw uwoc::InvalidInput(std::string("malformed config JSON: ") + e.what());
    }
    if (!cfg.is_object()) {
        throw uwoc::InvalidInput("config must be a JSON object");
    }

    auto flag_present = [&](const std::string& name) {
        const std::string full = "--" + name;
        for (const auto& a : args) {
            if (a == full || a.rfind(full + "=", 0) == 0) return true;
        }
        return false;
    };

    std::vector<std::string> merged;
    merged.reserve(args.size() + 2 * cfg.size());
    if (!args.empty()) merged.push_back(args.front());  // subcommand name
    for (const auto& [key, value] : cfg.items()) {
        if (flag_present(key)) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) merged.push_back("--" + key);
        } else if (value.is_string()) {
            merged.push_back("--" + key + "=" + value.get<std::string>());
        } else {
            merged.push_back("--" + key + "=" + value.dump());
        }
    }
    for (std::size_t i = args.empty() ? 0 : 1; i < args.size(); ++i) {
        merged.push_back(args[i]);
    }
    return merged;
}

ordered_json options_json(const CommonFitFlags& flags, double max_lag,
                          double threshold) {
    ordered_json o;
    o["bins"] = flags.bins;
    o["max_lag_s"] = max_lag;
    o["threshold"] = threshold;
    o["multistart"] = flags.multistart;
    o["constrain_mean"] = flags.constrain_mean;
    o["max_evals"] = flags.max_evals;
    o["tolerance"] = flags.tolerance;
    o["weighting"] = flags.weighting;
    o["threads"] = flags.threads;
    return o;
}

// --- subcommands --------------------------------------------------------

int cmd_analyze(const std::string& input, const CommonFitFlags& flags,
                double max_lag, double threshold, const std::string& out) {
    const auto contents = uwoc::read_trace_file(input);
    const double raw_mean =
        uwoc::compensated_mean(contents.trace.samples);
    const uwoc::NormalizedTrace trace = uwoc::normalize_trace(contents.trace);

    uwoc::EmpiricalPdf hist;
    try {
        hist = uwoc::build_histogram(trace, bin_spec_from_flag(flags.bins));
    } catch (const uwoc::DegenerateRange&) {
        throw uwoc::ZeroVariance(
            "degenerate data: constant trace (zero variance), nothing to fit");
    }

    uwoc::ChannelStats stats;
    stats.scint_index = uwoc::scintillation_index(trace);
    stats.mean_intensity = raw_mean;
    stats.n_samples = trace.values.size();
    stats.coherence_threshold = threshold;

    double effective_max_lag = max_lag;
    if (effective_max_lag <= 0.0) {
        effective_max_lag = std::min(0.02, 0.5 * trace.duration());
    }
    if (trace.values.size() >= 16 &&
        effective_max_lag >= 1.0 / trace.sample_rate) {
        const auto curve = uwoc::temporal_covariance(trace, effective_max_lag);
        const auto tc = uwoc::coherence_time(curve, threshold);
        stats.coherence_time = tc.seconds;
        stats.coherence_saturated = tc.saturated;
    }

    const auto rows = uwoc::fit_report(
        hist,
        {uwoc::Family::log_normal, uwoc::Family::k_dist, uwoc::Family::gamma_gamma,
         uwoc::Family::exp_log_normal},
        fit_options_from_flags(flags));

    ordered_json report;
    ordered_json provenance;
    provenance["input"] = input;
    provenance["tool"] = "uwoc";
    provenance["version"] = uwoc::kVersion;
    provenance["options"] = options_json(flags, effective_max_lag, threshold);
    provenance["seeds"] = ordered_json{{"fit_multistart", kMultistartSeed}};
    report["provenance"] = std::move(provenance);

    ordered_json stats_json;
    stats_json["n_samples"] = stats.n_samples;
    stats_json["mean_intensity"] = stats.mean_intensity;
    stats_json["scint_index"] = stats.scint_index;
    stats_json["coherence_threshold"] = stats.coherence_threshold;
    if (stats.coherence_time) {
        stats_json["coherence_time_s"] = *stats.coherence_time;
        stats_json["coherence_saturated"] = stats.coherence_saturated;
    } else {
        stats_json["coherence_time_s"] = nullptr;
    }
    report["stats"] = std::move(stats_json);

    ordered_json hist_json;
    hist_json["bins"] = hist.bin_count();
    hist_json["lo"] = hist.bin_edges.front();
    hist_json["hi"] = hist.bin_edges.back();
    hist_json["n_total"] = hist.n_total;
    report["histogram"] = std::move(hist_json);

    ordered_json fits = ordered_json::array();
    for (const auto& row : rows) fits.push_back(uwoc::report_row_to_json(row));
    report["fits"] = std::move(fits);

    emit(report.dump(2) + "\n", out);
    return 0;
}

int cmd_fit(const std::string& input, const std::string& family_tag,
            const CommonFitFlags& flags, const std::string& out) {
    const auto family = uwoc::family_from_tag(family_tag);
    if (!family) {
        throw uwoc::InvalidInput("unknown family: " + family_tag);
    }
    const auto contents = uwoc::read_trace_file(input);
    const uwoc::NormalizedTrace trace = uwoc::normalize_trace(contents.trace);
    uwoc::EmpiricalPdf hist;
    try {
        hist = uwoc::build_histogram(trace, bin_spec_from_flag(flags.bins));
    } catch (const uwoc::DegenerateRange&) {
        throw uwoc::ZeroVariance("degenerate data: constant trace (zero variance)");
    }
    const uwoc::FitResult result =
        uwoc::fit(hist, *family, fit_options_from_flags(flags));
    emit(uwoc::fit_result_to_json(result).dump(2) + "\n", out);
    return 0;
}

int cmd_simulate(const ParamFlags& pf, double tau, double rate, std::size_t n,
                 std::uint64_t seed, const std::string& out) {
    const uwoc::FadingParams params = params_from_flags(pf);
    const uwoc::FadingProcessSpec spec{params, tau, rate, n};
    const uwoc::NormalizedTrace trace = uwoc::generate_fading(spec, seed);

    std::map<std::string, std::string> metadata;
    metadata["seed"] = std::to_string(seed);
    metadata["family"] = std::string(uwoc::family_tag(uwoc::family_of(params)));
    metadata["coherence_time"] = uwoc::format_double(tau);
    const ordered_json pj = uwoc::params_to_json(params)["params"];
    for (const auto& [key, value] : pj.items()) {
        metadata["param_" + key] = uwoc::format_double(value.get<double>());
    }

    std::ostringstream buffer;
    uwoc::write_trace(buffer, trace.values, trace.sample_rate, metadata);
    emit(buffer.str(), out);
    return 0;
}

int cmd_pdf(const ParamFlags& pf, const std::string& range, const std::string& out) {
    const uwoc::FadingParams params = params_from_flags(pf);

    double lo = 0.0, hi = 0.0;
    long steps = 0;
    {
        std::istringstream in(range);
        char c1 = 0, c2 = 0;
        if (!(in >> lo >> c1 >> hi >> c2 >> steps) || c1 != ':' || c2 != ':' ||
            in.peek() != EOF) {
            throw uwoc::InvalidInput("malformed --range, expected lo:hi:steps");
        }
    }
    if (!(lo >= 0.0) || !(hi > lo) || steps < 2) {
        throw uwoc::InvalidInput("invalid --range: need lo >= 0, hi > lo, steps >= 2");
    }

    std::ostringstream csv;
    csv << "h,density\n";
    for (long i = 0; i < steps; ++i) {
        const double h = lo + (hi - lo) * static_cast<double>(i) /
                                  static_cast<double>(steps - 1);
        csv << uwoc::format_double(h) << ',' << uwoc::format_double(uwoc::pdf(params, h))
            << '\n';
    }
    emit(csv.str(), out);
    return 0;
}

int cmd_covariance(const std::string& input, double max_lag, double threshold,
                   const std::string& out) {
    const auto contents = uwoc::read_trace_file(input);
    const uwoc::NormalizedTrace trace = uwoc::normalize_trace(contents.trace);
    double effective_max_lag = max_lag;
    if (effective_max_lag <= 0.0) {
        effective_max_lag = std::min(0.02, 0.5 * trace.duration());
    }
    const auto curve = uwoc::temporal_covariance(trace, effective_max_lag);
    const auto tc = uwoc::coherence_time(curve, threshold);

    std::ostringstream csv;
    csv << "lag_seconds,coefficient\n";
    for (std::size_t i = 0; i < curve.lags.size(); ++i) {
        csv << uwoc::format_double(curve.lags[i]) << ','
            << uwoc::format_double(curve.coefficients[i]) << '\n';
    }
    csv << "# coherence_time_s=" << uwoc::format_double(tc.seconds)
        << " threshold=" << uwoc::format_double(threshold)
        << " saturated=" << (tc.saturated ? "true" : "false") << '\n';
    emit(csv.str(), out);
    return 0;
}

void add_param_flags(CLI::App* cmd, ParamFlags& pf) {
    cmd->add_option("--family", pf.family,
                    "Family tag: lognormal|k|gamma_gamma|exp_lognormal")
        ->required();
    cmd->add_option("--sigma2x", pf.sigma2x, "Log-amplitude variance (lognormal)");
    cmd->add_option("--alpha", pf.alpha, "Shape alpha (k, gamma_gamma)");
    cmd->add_option("--beta", pf.beta, "Shape beta (gamma_gamma)");
    cmd->add_option("--k", pf.k, "Mixture weight in [0,1] (exp_lognormal)");
    cmd->add_option("--gamma", pf.gamma, "Exponential-lobe mean (exp_lognormal)");
    cmd->add_option("--mu", pf.mu, "Log-normal-lobe location (exp_lognormal)");
    cmd->add_option("--sigma2", pf.sigma2, "Log-normal-lobe scale (exp_lognormal)");
}

void add_fit_flags(CLI::App* cmd, CommonFitFlags& flags) {
    cmd->add_option("--bins", flags.bins, "Histogram bin count (0 = automatic)");
    cmd->add_option("--multistart", flags.multistart, "Multistart count");
    cmd->add_option("--max-evals", flags.max_evals, "Objective budget per start");
    cmd->add_option("--tolerance", flags.tolerance, "Objective tolerance");
    cmd->add_flag("--constrain-mean", flags.constrain_mean,
                  "Enforce E[h]=1 during fitting");
    cmd->add_option("--weighting", flags.weighting, "Bin weighting: uniform|count");
    cmd->add_option("--threads", flags.threads, "Multistart worker threads");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"underwater optical channel fading statistics toolkit"};
    app.set_version_flag("--version", std::string(uwoc::kVersion));
    app.require_subcommand(1);

    std::string config_file;
    app.add_option("--config", config_file,
                   "JSON file whose keys mirror flag names (flags override)");

    // analyze
    auto* analyze = app.add_subcommand(
        "analyze", "Full pipeline: parse, normalize, histogram, fits, coherence");
    std::string analyze_input, analyze_out;
    CommonFitFlags analyze_flags;
    double analyze_max_lag = 0.0, analyze_threshold = std::exp(-1.0);
    analyze->add_option("trace", analyze_input, "Trace file")->required();
    add_fit_flags(analyze, analyze_flags);
    analyze->add_option("--max-lag", analyze_max_lag,
                        "Covariance max lag in seconds (default: min(0.02, half trace))");
    analyze->add_option("--threshold", analyze_threshold,
                        "Coherence threshold in (0,1), default 1/e");
    analyze->add_option("--out", analyze_out, "Output path (default stdout)");
    analyze->add_option("--config", config_file, "JSON config (keys mirror flags)");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "Fit a single family to a trace");
    std::string fit_input, fit_family, fit_out;
    CommonFitFlags fit_flags;
    fit_cmd->add_option("trace", fit_input, "Trace file")->required();
    fit_cmd->add_option("--family", fit_family,
                        "Family tag: lognormal|k|gamma_gamma|exp_lognormal")
        ->required();
    add_fit_flags(fit_cmd, fit_flags);
    fit_cmd->add_option("--out", fit_out, "Output path (default stdout)");
    fit_cmd->add_option("--config", config_file, "JSON config (keys mirror flags)");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic fading trace");
    ParamFlags sim_params;
    double sim_tau = 0.005, sim_rate = uwoc::kDefaultSampleRate;
    std::size_t sim_n = 32768;
    std::uint64_t sim_seed = 1;
    std::string sim_out;
    add_param_flags(simulate, sim_params);
    simulate->add_option("--tau", sim_tau, "Latent 1/e coherence time in seconds");
    simulate->add_option("--rate", sim_rate, "Sample rate in Sa/s (default 25000)");
    simulate->add_option("--n", sim_n, "Sample count");
    simulate->add_option("--seed", sim_seed, "RNG seed");
    simulate->add_option("--out", sim_out, "Output path (default stdout)");
    simulate->add_option("--config", config_file, "JSON config (keys mirror flags)");

    // pdf
    auto* pdf_cmd = app.add_subcommand("pdf", "Emit a density curve as CSV");
    ParamFlags pdf_params;
    std::string pdf_range = "0:5:501", pdf_out;
    add_param_flags(pdf_cmd, pdf_params);
    pdf_cmd->add_option("--range", pdf_range, "Equispaced grid lo:hi:steps");
    pdf_cmd->add_option("--out", pdf_out, "Output path (default stdout)");
    pdf_cmd->add_option("--config", config_file, "JSON config (keys mirror flags)");

    // covariance
    auto* cov = app.add_subcommand(
        "covariance", "Temporal covariance coefficient curve and coherence time");
    std::string cov_input, cov_out;
    double cov_max_lag = 0.0, cov_threshold = std::exp(-1.0);
    cov->add_option("trace", cov_input, "Trace file")->required();
    cov->add_option("--max-lag", cov_max_lag, "Max lag in seconds");
    cov->add_option("--threshold", cov_threshold, "Coherence threshold, default 1/e");
    cov->add_option("--out", cov_out, "Output path (default stdout)");
    cov->add_option("--config", config_file, "JSON config (keys mirror flags)");

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = merge_config_args(args);
    } catch (const uwoc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidFlags;
    }

    try {
        std::vector<const char*> cargs;
        cargs.push_back(argv[0]);
        for (const auto& a : args) cargs.push_back(a.c_str());
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalidFlags;
    }

    try {
        if (app.got_subcommand(analyze)) {
            return cmd_analyze(analyze_input, analyze_flags, analyze_max_lag,
                               analyze_threshold, analyze_out);
        }
        if (app.got_subcommand(fit_cmd)) {
            return cmd_fit(fit_input, fit_family, fit_flags, fit_out);
        }
        if (app.got_subcommand(simulate)) {
            return cmd_simulate(sim_params, sim_tau, sim_rate, sim_n, sim_seed, sim_out);
        }
        if (app.got_subcommand(pdf_cmd)) {
            return cmd_pdf(pdf_params, pdf_range, pdf_out);
        }
        if (app.got_subcommand(cov)) {
            return cmd_covariance(cov_input, cov_max_lag, cov_threshold, cov_out);
        }
    } catch (const uwoc::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const uwoc::ZeroVariance& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const uwoc::ZeroMeanTrace& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const uwoc::DegenerateRange& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const uwoc::DegenerateHistogram& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const uwoc::TooFewSamples& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const uwoc::InfeasibleFamily& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInfeasibleFamily;
    } catch (const uwoc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidFlags;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
