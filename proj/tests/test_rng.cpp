#include <doctest.h>

#include "npb/rng.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

using namespace npb;

namespace {

// Reference generator in exact integer arithmetic. The double-based
// implementation must reproduce this bit for bit: since the state is
// always below 2^46 < 2^53, the conversion to double is lossless.
constexpr std::uint64_t kMask46 = (std::uint64_t(1) << 46) - 1;
constexpr std::uint64_t kIntMultiplier = 1220703125;

struct IntLcg {
    std::uint64_t x;

    double next()
    {
        unsigned __int128 prod = (unsigned __int128)kIntMultiplier * x;
        x = (std::uint64_t)(prod & kMask46);
        return std::ldexp((double)x, -46);
    }
};

std::uint64_t int_powmod46(std::uint64_t a, std::uint64_t k)
{
    std::uint64_t result = 1;
    std::uint64_t base = a & kMask46;
    while (k != 0) {
        if (k & 1)
            result = (std::uint64_t)(((unsigned __int128)result * base) & kMask46);
        base = (std::uint64_t)(((unsigned __int128)base * base) & kMask46);
        k >>= 1;
    }
    return result;
}

} // namespace

TEST_CASE("randlc matches the integer generator exactly for 10000 steps")
{
    double x = 314159265.0;
    IntLcg ref{314159265};
    for (int i = 0; i < 10000; i++) {
        double got = randlc(x, kLcgMultiplier);
        double want = ref.next();
        REQUIRE(got == want);
        REQUIRE(x == (double)ref.x);
        REQUIRE(got > 0.0);
        REQUIRE(got < 1.0);
    }
}

TEST_CASE("randlc matches the integer generator from the default seed")
{
    double x = kDefaultSeed;
    IntLcg ref{(std::uint64_t)kDefaultSeed};
    for (int i = 0; i < 10000; i++)
        REQUIRE(randlc(x, kLcgMultiplier) == ref.next());
}

TEST_CASE("vranlc emits the same stream as repeated randlc")
{
    double xa = 314159265.0, xb = 314159265.0;
    std::vector<double> batch(4097);
    vranlc((long)batch.size(), xa, kLcgMultiplier, batch.data());
    for (double want : batch)
        REQUIRE(randlc(xb, kLcgMultiplier) == want);
    REQUIRE(xa == xb);
}

TEST_CASE("seed_advance equals integer modular exponentiation")
{
    // Mix of small counts, powers of two, and large strides of the kind
    // the benchmarks use to give each worker a disjoint substream.
    std::vector<std::uint64_t> ks = {0, 1, 2, 3, 5, 7, 63, 64, 65, 1023,
                                     (std::uint64_t(1) << 16),
                                     (std::uint64_t(1) << 32) + 12345,
                                     (std::uint64_t(1) << 45) - 1};
    IntLcg scatter{97};
    for (int i = 0; i < 87; i++) {
        scatter.next();
        ks.push_back(scatter.x); // arbitrary values below 2^46
    }
    REQUIRE(ks.size() == 100);

    for (std::uint64_t k : ks) {
        double got = seed_advance(kLcgMultiplier, k);
        std::uint64_t want = int_powmod46(kIntMultiplier, k);
        CAPTURE(k);
        REQUIRE(got == (double)want);
    }
}

TEST_CASE("jump(k) lands on the same state as k sequential steps")
{
    for (std::uint64_t k : {std::uint64_t(0), std::uint64_t(1),
                            std::uint64_t(17), std::uint64_t(1000),
                            std::uint64_t(65536)}) {
        RandomStream walked;
        walked.x = 314159265.0;
        for (std::uint64_t i = 0; i < k; i++)
            walked.next();

        RandomStream jumped;
        jumped.x = 314159265.0;
        jumped.jump(k);
        CAPTURE(k);
        REQUIRE(jumped.x == walked.x);
    }
}

TEST_CASE("disjoint substreams recombine into the sequential stream")
{
    // Partition one stream of 1024 values into 8 blocks generated
    // independently via jumps; together they must equal the serial run.
    const long n = 1024, blocks = 8, per = n / blocks;
    std::vector<double> serial(n), stitched(n);

    RandomStream s;
    s.fill(n, serial.data());

    for (long b = 0; b < blocks; b++) {
        RandomStream sub;
        sub.jump((std::uint64_t)(b * per));
        sub.fill(per, stitched.data() + b * per);
    }
    for (long i = 0; i < n; i++)
        REQUIRE(serial[i] == stitched[i]);
}
