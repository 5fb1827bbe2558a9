#include "npb/common.hpp"

#include <cctype>
#include <cmath>

namespace npb {

bool parse_class(const std::string& s, ProblemClass& out)
{
    if (s.size() != 1)
        return false;
    switch (std::toupper((unsigned char)s[0])) {
    case 'S': out = ProblemClass::S; return true;
    case 'W': out = ProblemClass::W; return true;
    case 'A': out = ProblemClass::A; return true;
    case 'B': out = ProblemClass::B; return true;
    case 'C': out = ProblemClass::C; return true;
    default: return false;
    }
}

bool verify_scalar(double computed, double reference, double epsilon)
{
    if (!std::isfinite(computed))
        return false;
    if (reference == 0.0)
        return std::fabs(computed) <= epsilon;
    return std::fabs((computed - reference) / reference) <= epsilon;
}

std::string report(const BenchmarkResult& r)
{
    char buf[640];
    int len = std::snprintf(buf, sizeof(buf),
                            "\n\n %s Benchmark Completed.\n"
                            " Class           = %24c\n"
                            " Size            = %24s\n"
                            " Iterations      = %24d\n"
                            " Workers         = %24d\n"
                            " Safe mode       = %24s\n"
                            " Time in seconds = %24.4f\n"
                            " Mop/s total     = %24.2f\n"
                            " %s\n",
                            r.name.c_str(), class_tag(r.cls), r.size.c_str(),
                            r.iterations, r.workers, r.safe_mode ? "on" : "off",
                            r.seconds, r.mflops,
                            r.verified ? "VERIFICATION SUCCESSFUL"
                                       : "VERIFICATION FAILED");
    return std::string(buf, (size_t)len);
}

void bounds_fail(long index, long size)
{
    std::fprintf(stderr, "fatal: array index %ld out of bounds [0, %ld)\n",
                 index, size);
    std::abort();
}

} // namespace npb
