#ifndef NPB_RNG_HPP
#define NPB_RNG_HPP

#include <cstdint>

namespace npb {

// Double-precision linear congruential generator
//   x_{k+1} = a * x_k  mod 2^46
// with every intermediate held exactly in doubles by splitting the
// operands into 23-bit halves. Default multiplier is 5^13, the
// modulus is 2^46, and emitted values are x * 2^-46 in (0, 1).
inline constexpr double kLcgMultiplier = 1220703125.0; // 5^13
inline constexpr double kDefaultSeed = 271828183.0;

// Advances x in place and returns the new value scaled to (0, 1).
double randlc(double& x, double a);

// Batch form of randlc: stores n successive values into y and leaves
// x advanced by n steps. Identical stream to n scalar calls.
void vranlc(long n, double& x, double a, double* y);

// a^k mod 2^46 by binary exponentiation over the exact multiply.
// Multiplying a seed by the result jumps the stream k positions.
double seed_advance(double a, std::uint64_t k);

struct RandomStream {
    double x = kDefaultSeed;
    double a = kLcgMultiplier;

    double next() { return randlc(x, a); }
    void fill(long n, double* y) { vranlc(n, x, a, y); }
    // jump k positions ahead without generating intermediate values
    void jump(std::uint64_t k) {
        double t = seed_advance(a, k);
        randlc(x, t);
    }
};

} // namespace npb

#endif
