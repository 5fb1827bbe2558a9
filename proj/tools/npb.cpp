// Command-line front end: repeated benchmark runs with fresh process
// state per repetition, summary statistics, sample comparison, and
// CSV/JSON/text emission.
//
// Exit codes: 0 success, 1 usage error, 2 verification failure,
// 3 internal error.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "npb/benchmarks.hpp"
#include "npb/common.hpp"
#include "npb/pool.hpp"
#include "npb/report_io.hpp"
#include "npb/stats.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;
constexpr int kExitInternal = 3;

std::string self_path()
{
    char buf[4096];
    ssize_t n = readlink("/proc/self/exe", buf, sizeof(buf) - 1);
    if (n > 0) {
        buf[n] = '\0';
        return buf;
    }
    return "npb";
}

struct ChildRun {
    int exit_code = -1;   // -1: did not exit normally
    std::string stdout_text;
};

// Runs this executable again with the given arguments, capturing
// stdout. stderr stays attached so per-run banners stream through.
ChildRun spawn_self(const std::vector<std::string>& args)
{
    int fds[2];
    if (pipe(fds) != 0)
        throw std::runtime_error("pipe failed");
    pid_t pid = fork();
    if (pid < 0)
        throw std::runtime_error("fork failed");
    if (pid == 0) {
        dup2(fds[1], STDOUT_FILENO);
        close(fds[0]);
        close(fds[1]);
        std::string exe = self_path();
        std::vector<char*> argv;
        argv.push_back(exe.data());
        std::vector<std::string> copy = args;
        for (auto& a : copy)
            argv.push_back(a.data());
        argv.push_back(nullptr);
        execv(exe.c_str(), argv.data());
        _exit(127);
    }
    close(fds[1]);
    ChildRun result;
    char buf[4096];
    ssize_t got;
    while ((got = read(fds[0], buf, sizeof(buf))) > 0)
        result.stdout_text.append(buf, (size_t)got);
    close(fds[0]);
    int status = 0;
    waitpid(pid, &status, 0);
    if (WIFEXITED(status))
        result.exit_code = WEXITSTATUS(status);
    return result;
}

void write_output(const std::string& text, const std::string& out_path)
{
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f)
        throw std::runtime_error("cannot open output file: " + out_path);
    f << text;
}

// ---------------------------------------------------------------------
// run-one: a single in-process benchmark execution (one repetition)
// ---------------------------------------------------------------------

int cmd_run_one(const std::string& bench, const std::string& cls_name,
                int workers, bool safe, long stack_reserve)
{
    const npb::BenchmarkInfo* info = npb::find_benchmark(bench);
    npb::ProblemClass cls;
    if (!info || !npb::parse_class(cls_name, cls) || workers < 1) {
        std::cerr << "run-one: bad arguments\n";
        return kExitUsage;
    }
    npb::PoolConfig cfg;
    cfg.workers = workers;
    cfg.stack_reserve = (size_t)stack_reserve;
    if (cfg.stack_reserve == 0 && info->stack_reserve)
        cfg.stack_reserve = info->stack_reserve(cls);
    npb::WorkerPool pool(cfg);
    npb::BenchmarkResult r = info->run(cls, pool, safe);
    std::cerr << npb::report(r);
    nlohmann::json j = {{"benchmark", bench},
                        {"class", std::string(1, npb::class_tag(cls))},
                        {"workers", r.workers},
                        {"seconds", r.seconds},
                        {"mflops", r.mflops},
                        {"verified", r.verified},
                        {"safe_mode", r.safe_mode},
                        {"size", r.size},
                        {"iterations", r.iterations}};
    std::cout << j.dump() << "\n";
    return r.verified ? kExitOk : kExitVerification;
}

// ---------------------------------------------------------------------
// run: repetition sweep, each repetition in a fresh child process
// ---------------------------------------------------------------------

int cmd_run(const std::string& bench, const std::string& cls_name,
            std::vector<int> workers, int reps, bool safe,
            long stack_reserve, const std::string& format,
            const std::string& out_path)
{
    const npb::BenchmarkInfo* info = npb::find_benchmark(bench);
    npb::ProblemClass cls;
    if (!info) {
        std::cerr << "error: unknown benchmark '" << bench << "'\n";
        return kExitUsage;
    }
    if (!npb::parse_class(cls_name, cls)) {
        std::cerr << "error: unknown class '" << cls_name << "'\n";
        return kExitUsage;
    }
    for (int w : workers)
        if (w < 1) {
            std::cerr << "error: worker counts must be >= 1\n";
            return kExitUsage;
        }
    if (reps < 1) {
        std::cerr << "error: repetitions must be >= 1\n";
        return kExitUsage;
    }

    std::vector<npb::io::RunRecord> rows;
    bool verification_failed = false;
    for (int w : workers) {
        for (int rep = 0; rep < reps; rep++) {
            ChildRun child = spawn_self(
                {"run-one", bench, std::string(1, npb::class_tag(cls)),
                 std::to_string(w), safe ? "1" : "0",
                 std::to_string(stack_reserve)});
            if (child.exit_code != kExitOk &&
                child.exit_code != kExitVerification) {
                std::cerr << "error: repetition process failed (exit "
                          << child.exit_code << ")\n";
                return kExitInternal;
            }
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(child.stdout_text);
            } catch (const std::exception&) {
                std::cerr << "error: bad repetition output\n";
                return kExitInternal;
            }
            npb::io::RunRecord r;
            r.benchmark = bench;
            r.cls = npb::class_tag(cls);
            r.workers = w;
            r.rep = rep;
            r.seconds = j.at("seconds").get<double>();
            r.mflops = j.at("mflops").get<double>();
            r.verified = j.at("verified").get<bool>();
            r.safe_mode = j.at("safe_mode").get<bool>();
            rows.push_back(r);
            if (!r.verified) {
                std::cerr << "verification failed: " << bench << " class "
                          << npb::class_tag(cls) << " workers " << w
                          << " rep " << rep
                          << "; aborting this configuration\n";
                verification_failed = true;
                break;
            }
        }
    }

    std::string text;
    if (format == "csv")
        text = npb::io::to_csv(rows);
    else if (format == "json")
        text = npb::io::to_json(rows);
    else
        text = npb::io::speedup_table(rows);
    write_output(text, out_path);
    return verification_failed ? kExitVerification : kExitOk;
}

// ---------------------------------------------------------------------
// compare: §-style sample comparison between two result files
// ---------------------------------------------------------------------

int cmd_compare(const std::string& path_a, const std::string& path_b,
                const std::string& key_spec, const std::string& format)
{
    auto read_file = [](const std::string& path) {
        std::ifstream f(path);
        if (!f)
            throw std::runtime_error("cannot open " + path);
        return std::string((std::istreambuf_iterator<char>(f)),
                           std::istreambuf_iterator<char>());
    };

    std::set<std::string> keys;
    {
        std::string cur;
        for (char c : key_spec + ",") {
            if (c == ',') {
                if (!cur.empty())
                    keys.insert(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
    }
    static const std::set<std::string> known = {"benchmark", "class",
                                                "workers", "safe_mode"};
    for (const auto& k : keys)
        if (!known.count(k)) {
            std::cerr << "error: unknown key column '" << k << "'\n";
            return kExitUsage;
        }

    auto group = [&](const std::vector<npb::io::RunRecord>& rows) {
        std::map<std::string, std::vector<double>> g;
        for (const auto& r : rows) {
            std::string k;
            if (keys.count("benchmark"))
                k += r.benchmark;
            if (keys.count("class"))
                k += std::string("/") + r.cls;
            if (keys.count("workers"))
                k += "/w" + std::to_string(r.workers);
            if (keys.count("safe_mode"))
                k += r.safe_mode ? "/safe" : "/unchecked";
            g[k].push_back(r.seconds);
        }
        return g;
    };

    try {
        auto rows_a = npb::io::parse_csv(read_file(path_a));
        auto rows_b = npb::io::parse_csv(read_file(path_b));
        auto ga = group(rows_a);
        auto gb = group(rows_b);

        std::vector<npb::stats::ComparisonReport> reports;
        std::string text;
        for (const auto& [key, sa] : ga) {
            auto it = gb.find(key);
            if (it == gb.end())
                continue;
            const auto& sb = it->second;
            if (sa.size() != sb.size() || sa.size() < 3) {
                std::cerr << "error: group '" << key
                          << "' needs equal sample sizes of at least 3\n";
                return kExitUsage;
            }
            auto rep = npb::stats::compare(sa, sb, path_a + " [" + key + "]",
                                           path_b + " [" + key + "]");
            reports.push_back(rep);
            text += npb::io::comparison_text(rep) + "\n";
        }
        if (reports.empty()) {
            std::cerr << "error: no common groups between the two files\n";
            return kExitUsage;
        }
        if (format == "json")
            std::cout << npb::io::comparison_json(reports);
        else
            std::cout << text;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

int cmd_list()
{
    std::printf("benchmark  classes\n");
    for (const auto& b : npb::benchmark_registry())
        std::printf("%-10s S W A B C\n", b.name.c_str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"parallel benchmark suite driver"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run one benchmark repeatedly");
    std::string bench, cls = "S", format = "text", out_path;
    std::vector<int> workers;
    int reps = 10;
    bool safe = false;
    long stack_reserve = 0;
    run->add_option("benchmark", bench, "ep|cg|ft|is|mg|bt|sp|lu")->required();
    run->add_option("--class", cls, "problem class S|W|A|B|C");
    run->add_option("--workers", workers,
                    "worker counts to sweep (default 1, or NPB_WORKERS)")
        ->delimiter(',');
    run->add_option("--reps", reps, "repetitions per configuration");
    run->add_flag("--safe-mode", safe, "bounds-checked kernels");
    run->add_option("--stack-reserve", stack_reserve,
                    "worker stack size in bytes (0 = benchmark default)");
    run->add_option("--format", format, "csv|json|text")
        ->check(CLI::IsMember({"csv", "json", "text"}));
    run->add_option("--out", out_path, "write output to a file");

    // run-one (internal: a single repetition in this process)
    auto* one = app.add_subcommand("run-one");
    std::string o_bench, o_cls;
    int o_workers = 1;
    int o_safe = 0;
    long o_stack = 0;
    one->add_option("benchmark", o_bench)->required();
    one->add_option("class", o_cls)->required();
    one->add_option("workers", o_workers)->required();
    one->add_option("safe", o_safe)->required();
    one->add_option("stack_reserve", o_stack)->required();
    one->group(""); // hidden from help

    // compare
    auto* cmp = app.add_subcommand("compare",
                                   "compare two CSV result files");
    std::string path_a, path_b, key_spec = "benchmark,class,workers";
    std::string cmp_format = "text";
    cmp->add_option("csv-a", path_a)->required();
    cmp->add_option("csv-b", path_b)->required();
    cmp->add_option("--key", key_spec, "grouping columns");
    cmp->add_option("--format", cmp_format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));

    // list
    auto* list = app.add_subcommand("list", "print the benchmark/class matrix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed()) {
            if (workers.empty()) {
                workers = {1};
                if (const char* env = std::getenv("NPB_WORKERS")) {
                    int w = std::atoi(env);
                    if (w < 1) {
                        std::cerr << "error: NPB_WORKERS must be >= 1\n";
                        return kExitUsage;
                    }
                    workers = {w};
                }
            }
            return cmd_run(bench, cls, workers, reps, safe, stack_reserve,
                           format, out_path);
        }
        if (one->parsed())
            return cmd_run_one(o_bench, o_cls, o_workers, o_safe != 0, o_stack);
        if (cmp->parsed())
            return cmd_compare(path_a, path_b, key_spec, cmp_format);
        if (list->parsed())
            return cmd_list();
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
