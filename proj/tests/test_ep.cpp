#include <doctest.h>

#include "npb/ep.hpp"
#include "npb/rng.hpp"

#include <cmath>
#include <vector>

using namespace npb;

namespace {

// Straight-line scalar recomputation of one chunk: advance the stream
// step by step (no vranlc, no jump) and fold the accepted deviates in
// pair order. generate_chunk must reproduce this bit for bit.
ep::GaussianTally chunk_oracle(long chunk_index, long chunk_pairs)
{
    RandomStream s;
    for (long i = 0; i < 2 * chunk_pairs * chunk_index; i++)
        s.next();

    ep::GaussianTally t;
    for (long i = 0; i < chunk_pairs; i++) {
        double x1 = 2.0 * s.next() - 1.0;
        double x2 = 2.0 * s.next() - 1.0;
        double r = x1 * x1 + x2 * x2;
        if (r <= 1.0) {
            double f = std::sqrt(-2.0 * std::log(r) / r);
            double gx = x1 * f, gy = x2 * f;
            t.q[(int)std::fmax(std::fabs(gx), std::fabs(gy))]++;
            t.sx += gx;
            t.sy += gy;
            t.pairs++;
        }
    }
    return t;
}

} // namespace

TEST_CASE("generate_chunk matches the scalar oracle bit for bit")
{
    for (long chunk : {0L, 1L, 5L}) {
        ep::GaussianTally got = ep::generate_chunk(chunk, 2000, kDefaultSeed);
        ep::GaussianTally want = chunk_oracle(chunk, 2000);
        CAPTURE(chunk);
        CHECK(got.sx == want.sx);
        CHECK(got.sy == want.sy);
        CHECK(got.pairs == want.pairs);
        for (int l = 0; l < 10; l++)
            CHECK(got.q[l] == want.q[l]);
    }
}

TEST_CASE("merge is componentwise and keeps the identity")
{
    ep::GaussianTally a, b;
    a.sx = 1.5;
    a.sy = -2.0;
    a.q[3] = 7;
    a.pairs = 7;
    b.sx = 0.25;
    b.sy = 4.0;
    b.q[0] = 2;
    b.q[3] = 1;
    b.pairs = 3;

    ep::GaussianTally m = ep::merge(a, b);
    CHECK(m.sx == 1.75);
    CHECK(m.sy == 2.0);
    CHECK(m.q[0] == 2);
    CHECK(m.q[3] == 8);
    CHECK(m.pairs == 10);

    ep::GaussianTally id = ep::merge(a, ep::GaussianTally{});
    CHECK(id.sx == a.sx);
    CHECK(id.sy == a.sy);
    CHECK(id.pairs == a.pairs);
}

TEST_CASE("tally counts are independent of the worker count")
{
    // m = 18 keeps this quick: 4 chunks of 2^16 pairs
    WorkerPool p1({1, 0});
    WorkerPool p3({3, 0});
    ep::GaussianTally a = ep::full_tally(18, p1);
    ep::GaussianTally b = ep::full_tally(18, p3);
    CHECK(a.pairs == b.pairs);
    for (int l = 0; l < 10; l++)
        CHECK(a.q[l] == b.q[l]);
    // sums only reassociate across chunks
    CHECK(a.sx == doctest::Approx(b.sx).epsilon(1e-12));
    CHECK(a.sy == doctest::Approx(b.sy).epsilon(1e-12));
}

TEST_CASE("class S run verifies against the published sums")
{
    WorkerPool pool({2, 0});
    BenchmarkResult r = ep::run(ProblemClass::S, pool, false);
    CHECK(r.verified);
    CHECK(r.name == "EP");
    CHECK(r.seconds > 0.0);
    CHECK(r.mflops > 0.0);
    CHECK(r.workers == 2);
}
