#include "npb/rng.hpp"

namespace npb {

namespace {

constexpr double r23 = 0x1p-23;
constexpr double r46 = 0x1p-46;
constexpr double t23 = 0x1p23;
constexpr double t46 = 0x1p46;

// x = a * x mod 2^46 with both operands split into 23-bit halves so
// every partial product stays below 2^46 and is exact in a double.
inline void mulmod46(double& x, double a)
{
    double t1 = r23 * a;
    double a1 = (double)(long)t1;
    double a2 = a - t23 * a1;

    t1 = r23 * x;
    double x1 = (double)(long)t1;
    double x2 = x - t23 * x1;

    t1 = a1 * x2 + a2 * x1;
    double t2 = (double)(long)(r23 * t1);
    double z = t1 - t23 * t2;
    double t3 = t23 * z + a2 * x2;
    double t4 = (double)(long)(r46 * t3);
    x = t3 - t46 * t4;
}

} // namespace

double randlc(double& x, double a)
{
    mulmod46(x, a);
    return r46 * x;
}

void vranlc(long n, double& x, double a, double* y)
{
    double t1 = r23 * a;
    double a1 = (double)(long)t1;
    double a2 = a - t23 * a1;

    for (long i = 0; i < n; i++) {
        t1 = r23 * x;
        double x1 = (double)(long)t1;
        double x2 = x - t23 * x1;
        t1 = a1 * x2 + a2 * x1;
        double t2 = (double)(long)(r23 * t1);
        double z = t1 - t23 * t2;
        double t3 = t23 * z + a2 * x2;
        double t4 = (double)(long)(r46 * t3);
        x = t3 - t46 * t4;
        y[i] = r46 * x;
    }
}

double seed_advance(double a, std::uint64_t k)
{
    double result = 1.0;
    double base = a;
    while (k != 0) {
        if (k & 1)
            mulmod46(result, base);
        mulmod46(base, base);
        k >>= 1;
    }
    return result;
}

} // namespace npb
