#include "npb/report_io.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

namespace npb::io {

namespace {

std::string fmt6(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt3(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

using ConfigKey = std::tuple<std::string, char, bool, int>; // bench, class, safe, workers

std::map<ConfigKey, std::vector<double>> group_seconds(
    const std::vector<RunRecord>& rows)
{
    std::map<ConfigKey, std::vector<double>> groups;
    for (const auto& r : rows)
        groups[{r.benchmark, r.cls, r.safe_mode, r.workers}].push_back(r.seconds);
    return groups;
}

} // namespace

std::string csv_header()
{
    return "benchmark,class,workers,rep,seconds,mflops,verified,safe_mode";
}

std::string to_csv(const std::vector<RunRecord>& rows)
{
    std::string out = csv_header() + "\n";
    for (const auto& r : rows) {
        out += r.benchmark;
        out += ',';
        out += r.cls;
        out += ',';
        out += std::to_string(r.workers);
        out += ',';
        out += std::to_string(r.rep);
        out += ',';
        out += fmt6(r.seconds);
        out += ',';
        out += fmt6(r.mflops);
        out += ',';
        out += r.verified ? '1' : '0';
        out += ',';
        out += r.safe_mode ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::vector<RunRecord> parse_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != csv_header())
        throw std::runtime_error("parse_csv: missing or unexpected header");

    std::vector<RunRecord> rows;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        lineno++;
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                f.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        f.push_back(cur);
        if (f.size() != 8 || f[0].empty() || f[1].size() != 1)
            throw std::runtime_error("parse_csv: malformed line " +
                                     std::to_string(lineno));
        RunRecord r;
        try {
            r.benchmark = f[0];
            r.cls = f[1][0];
            r.workers = std::stoi(f[2]);
            r.rep = std::stoi(f[3]);
            r.seconds = std::stod(f[4]);
            r.mflops = std::stod(f[5]);
            r.verified = std::stoi(f[6]) != 0;
            r.safe_mode = std::stoi(f[7]) != 0;
        } catch (const std::exception&) {
            throw std::runtime_error("parse_csv: malformed line " +
                                     std::to_string(lineno));
        }
        rows.push_back(r);
    }
    return rows;
}

std::string to_json(const std::vector<RunRecord>& rows)
{
    nlohmann::json j;
    j["results"] = nlohmann::json::array();
    for (const auto& r : rows) {
        j["results"].push_back({{"benchmark", r.benchmark},
                                {"class", std::string(1, r.cls)},
                                {"workers", r.workers},
                                {"rep", r.rep},
                                {"seconds", r.seconds},
                                {"mflops", r.mflops},
                                {"verified", r.verified},
                                {"safe_mode", r.safe_mode}});
    }
    j["stats"] = nlohmann::json::array();
    for (const auto& [key, secs] : group_seconds(rows)) {
        stats::SampleStats s = stats::summarize(secs);
        j["stats"].push_back({{"benchmark", std::get<0>(key)},
                              {"class", std::string(1, std::get<1>(key))},
                              {"safe_mode", std::get<2>(key)},
                              {"workers", std::get<3>(key)},
                              {"n", secs.size()},
                              {"mean_seconds", s.mean},
                              {"stddev_seconds", s.stddev},
                              {"min_seconds", s.min},
                              {"max_seconds", s.max}});
    }
    return j.dump(2) + "\n";
}

std::string speedup_table(const std::vector<RunRecord>& rows)
{
    auto groups = group_seconds(rows);

    // 1-worker mean per (benchmark, class, mode) is the speedup baseline
    std::map<std::tuple<std::string, char, bool>, double> base_mean;
    for (const auto& [key, secs] : groups) {
        if (std::get<3>(key) == 1)
            base_mean[{std::get<0>(key), std::get<1>(key), std::get<2>(key)}] =
                stats::summarize(secs).mean;
    }

    char line[160];
    std::string out;
    std::snprintf(line, sizeof(line), "%-10s %-5s %-9s %7s %12s %12s %12s %9s\n",
                  "benchmark", "class", "mode", "workers", "best(s)",
                  "mean(s)", "stddev(s)", "speedup");
    out += line;
    for (const auto& [key, secs] : groups) {
        stats::SampleStats s = stats::summarize(secs);
        auto base = base_mean.find(
            {std::get<0>(key), std::get<1>(key), std::get<2>(key)});
        std::string speedup = "-";
        if (base != base_mean.end() && s.mean > 0.0) {
            char b[32];
            std::snprintf(b, sizeof(b), "%.2f", base->second / s.mean);
            speedup = b;
        }
        std::snprintf(line, sizeof(line), "%-10s %-5c %-9s %7d %12s %12s %12s %9s\n",
                      std::get<0>(key).c_str(), std::get<1>(key),
                      std::get<2>(key) ? "safe" : "unchecked",
                      std::get<3>(key), fmt6(s.min).c_str(),
                      fmt6(s.mean).c_str(), fmt6(s.stddev).c_str(),
                      speedup.c_str());
        out += line;
    }
    return out;
}

std::string comparison_text(const stats::ComparisonReport& r)
{
    std::ostringstream out;
    out << "comparison: " << r.label_a << " vs " << r.label_b << "\n";
    out << "  n             = " << r.stats_a.values.size() << "\n";
    out << "  mean seconds  = " << fmt6(r.stats_a.mean) << " vs "
        << fmt6(r.stats_b.mean);
    char pct[32];
    std::snprintf(pct, sizeof(pct), "%+.2f%%", r.mean_diff_percent);
    out << "  (" << pct << ")\n";
    out << "  normality p   = " << fmt3(r.normality_p_a) << " / "
        << fmt3(r.normality_p_b) << "  (Shapiro-Wilk, alpha "
        << fmt3(r.alpha) << ")\n";
    out << "  test          = " << r.test_name << "\n";
    out << "  p-value       = " << fmt3(r.p_value) << "\n";
    out << "  verdict       = "
        << (r.different ? "different" : "equivalent")
        << " at 95% confidence\n";
    out << "  note: p-values are per comparison; no multiple-comparison "
           "correction is applied\n";
    return out.str();
}

std::string comparison_json(const std::vector<stats::ComparisonReport>& reports)
{
    nlohmann::json j;
    j["reports"] = nlohmann::json::array();
    for (const auto& r : reports) {
        j["reports"].push_back({{"label_a", r.label_a},
                                {"label_b", r.label_b},
                                {"n", r.stats_a.values.size()},
                                {"mean_a", r.stats_a.mean},
                                {"mean_b", r.stats_b.mean},
                                {"normality_p_a", r.normality_p_a},
                                {"normality_p_b", r.normality_p_b},
                                {"test", r.test_name},
                                {"p_value", r.p_value},
                                {"verdict", r.different ? "different"
                                                        : "equivalent"},
                                {"mean_diff_percent", r.mean_diff_percent}});
    }
    j["note"] = "no multiple-comparison correction applied";
    return j.dump(2) + "\n";
}

} // namespace npb::io
