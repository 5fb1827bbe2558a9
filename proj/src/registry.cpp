#include "npb/benchmarks.hpp"

#include "npb/bt.hpp"
#include "npb/cg.hpp"
#include "npb/ep.hpp"
#include "npb/ft.hpp"
#include "npb/is.hpp"
#include "npb/lu.hpp"
#include "npb/mg.hpp"
#include "npb/sp.hpp"

namespace npb {

const std::vector<BenchmarkInfo>& benchmark_registry()
{
    static const std::vector<BenchmarkInfo> registry = {
        {"bt", &bt::run},
        {"cg", &cg::run},
        {"ep", &ep::run},
        {"ft", &ft::run},
        {"is", &is::run},
        {"lu", &lu::run},
        {"mg", &mg::run},
        {"sp", &sp::run, &sp::stack_reserve},
    };
    return registry;
}

const BenchmarkInfo* find_benchmark(const std::string& name)
{
    for (const auto& b : benchmark_registry())
        if (b.name == name)
            return &b;
    return nullptr;
}

} // namespace npb
