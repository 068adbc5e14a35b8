#ifndef UWOC_TRACE_IO_HPP
#define UWOC_TRACE_IO_HPP

#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "uwoc/trace.hpp"

namespace uwoc {

/// Trace file contents: samples plus any `# key=value` header metadata.
struct TraceFileContents {
    SampleTrace trace;
    std::map<std::string, std::string> metadata;
};

/// Reads the plain-text trace format: one decimal sample per line, or
/// two comma-separated columns `time,value` (uniform spacing within 1%,
/// rate inferred). `# sample_rate=<Sa/s>` overrides the 25000 default.
/// Throws ParseError (with line number) on malformed input.
TraceFileContents read_trace(std::istream& in);
TraceFileContents read_trace_file(const std::filesystem::path& path);

/// Writes one sample per line, preceded by a `# sample_rate=` header and
/// any extra `# key=value` metadata lines (sorted by key).
void write_trace(std::ostream& out, const std::vector<double>& samples,
                 double sample_rate,
                 const std::map<std::string, std::string>& metadata = {});
void write_trace_file(const std::filesystem::path& path,
                      const std::vector<double>& samples, double sample_rate,
                      const std::map<std::string, std::string>& metadata = {});

}  // namespace uwoc

#endif
