#ifndef NPB_REPORT_IO_HPP
#define NPB_REPORT_IO_HPP

#include "npb/stats.hpp"

#include <string>
#include <vector>

namespace npb::io {

// One repetition of one benchmark configuration, as serialized to the
// fixed CSV schema:
//   benchmark,class,workers,rep,seconds,mflops,verified,safe_mode
// seconds and mflops are written with 6 significant digits, booleans
// as 0/1; bit-stable for identical inputs.
struct RunRecord {
    std::string benchmark;
    char cls = 'S';
    int workers = 1;
    int rep = 0;
    double seconds = 0.0;
    double mflops = 0.0;
    bool verified = false;
    bool safe_mode = false;

    bool operator==(const RunRecord&) const = default;
};

std::string csv_header();
std::string to_csv(const std::vector<RunRecord>& rows);

// Inverse of to_csv; throws std::runtime_error on malformed input.
std::vector<RunRecord> parse_csv(const std::string& text);

// Same records plus per-configuration summary stats, as a JSON object
// {"results": [...], "stats": [...]}.
std::string to_json(const std::vector<RunRecord>& rows);

// Per-configuration table: best and mean seconds, stddev, and speedup
// against the 1-worker mean of the same benchmark/class/build mode.
std::string speedup_table(const std::vector<RunRecord>& rows);

// Human-readable rendering of one comparison.
std::string comparison_text(const stats::ComparisonReport& r);

// JSON rendering of one comparison report object.
std::string comparison_json(const std::vector<stats::ComparisonReport>& reports);

} // namespace npb::io

#endif
