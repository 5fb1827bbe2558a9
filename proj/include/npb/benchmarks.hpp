#ifndef NPB_BENCHMARKS_HPP
#define NPB_BENCHMARKS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "npb/common.hpp"
#include "npb/pool.hpp"

namespace npb {

using RunFn = BenchmarkResult (*)(ProblemClass, WorkerPool&, bool safe_mode);
using StackReserveFn = std::size_t (*)(ProblemClass);

struct BenchmarkInfo {
    std::string name; // lower-case CLI name: "ep", "cg", ...
    RunFn run;
    // worker stack reserve wanted by this benchmark for a class, or
    // nullptr when the platform default is fine
    StackReserveFn stack_reserve = nullptr;
};

const std::vector<BenchmarkInfo>& benchmark_registry();

// nullptr when the name is unknown
const BenchmarkInfo* find_benchmark(const std::string& name);

} // namespace npb

#endif
