#include "uwoc/trace_io.hpp"

#include <cmath>
#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

#include "uwoc/errors.hpp"
#include "uwoc/format.hpp"

namespace uwoc {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

double infer_rate_from_times(const std::vector<double>& times, std::size_t first_line) {
    if (times.size() < 2) {
        throw ParseError("two-column trace needs at least 2 rows", first_line);
    }
    std::vector<double> deltas(times.size() - 1);
    for (std::size_t i = 1; i < times.size(); ++i) {
        deltas[i - 1] = times[i] - times[i - 1];
        if (!(deltas[i - 1] > 0.0)) {
            throw ParseError("time column must be strictly increasing",
                             first_line + i);
        }
    }
    // Uniformity is judged against the median interval so a single bad
    // row is flagged rather than skewing the reference.
    std::vector<double> sorted = deltas;
    std::nth_element(sorted.begin(), sorted.begin() + (sorted.size() - 1) / 2,
                     sorted.end());
    const double ref_dt = sorted[(sorted.size() - 1) / 2];
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (std::fabs(deltas[i] - ref_dt) > 0.01 * ref_dt) {
            throw ParseError("time spacing is not uniform within 1%",
                             first_line + i + 1);
        }
    }
    return 1.0 / ref_dt;
}

}  // namespace

TraceFileContents read_trace(std::istream& in) {
    TraceFileContents out;
    std::vector<double> times;
    bool two_column = false;
    bool saw_data = false;
    std::size_t first_data_line = 0;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = trim(line);
        if (sv.empty()) continue;
        if (sv.front() == '#') {
            sv.remove_prefix(1);
            sv = trim(sv);
            const auto eq = sv.find('=');
            if (eq != std::string_view::npos) {
                const std::string key{trim(sv.substr(0, eq))};
                const std::string value{trim(sv.substr(eq + 1))};
                if (!key.empty()) out.metadata[key] = value;
            }
            continue;
        }

        const auto comma = sv.find(',');
        if (!saw_data) {
            two_column = comma != std::string_view::npos;
            first_data_line = line_no;
            saw_data = true;
        }
        if (two_column) {
            if (comma == std::string_view::npos) {
                throw ParseError("expected `time,value` row", line_no);
            }
            const auto t = parse_double(trim(sv.substr(0, comma)));
            const auto v = parse_double(trim(sv.substr(comma + 1)));
            if (!t || !v) {
                throw ParseError("malformed `time,value` row", line_no);
            }
            times.push_back(*t);
            out.trace.samples.push_back(*v);
        } else {
            if (comma != std::string_view::npos) {
                throw ParseError("unexpected comma in single-column trace", line_no);
            }
            const auto v = parse_double(sv);
            if (!v) {
                throw ParseError("malformed sample value", line_no);
            }
            out.trace.samples.push_back(*v);
        }
        const double s = out.trace.samples.back();
        if (!std::isfinite(s)) {
            throw ParseError("sample is not finite", line_no);
        }
        if (s < 0.0) {
            throw ParseError("sample is negative", line_no);
        }
    }
    if (out.trace.samples.empty()) {
        throw ParseError("trace file contains no samples", line_no == 0 ? 1 : line_no);
    }

    if (two_column) {
        out.trace.sample_rate = infer_rate_from_times(times, first_data_line);
    } else if (const auto it = out.metadata.find("sample_rate");
               it != out.metadata.end()) {
        const auto rate = parse_double(it->second);
        if (!rate || !(*rate > 0.0)) {
            throw ParseError("invalid sample_rate header", 1);
        }
        out.trace.sample_rate = *rate;
    } else {
        out.trace.sample_rate = kDefaultSampleRate;
    }
    return out;
}

TraceFileContents read_trace_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open trace file: " + path.string(), 1);
    }
    return read_trace(in);
}

void write_trace(std::ostream& out, const std::vector<double>& samples,
                 double sample_rate,
                 const std::map<std::string, std::string>& metadata) {
    out << "# sample_rate=" << format_double(sample_rate) << '\n';
    for (const auto& [key, value] : metadata) {
        if (key == "sample_rate") continue;
        out << "# " << key << '=' << value << '\n';
    }
    for (double s : samples) {
        out << format_double(s) << '\n';
    }
}

void write_trace_file(const std::filesystem::path& path,
                      const std::vector<double>& samples, double sample_rate,
                      const std::map<std::string, std::string>& metadata) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot open output file: " + path.string());
    }
    write_trace(out, samples, sample_rate, metadata);
}

}  // namespace uwoc
