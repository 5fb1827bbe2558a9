#include "npb/ep.hpp"

#include "npb/rng.hpp"
#include "npb/timers.hpp"

#include <cmath>
#include <vector>

namespace npb::ep {

namespace {

struct EpParams {
    int m;
    double sx_ref;
    double sy_ref;
};

EpParams params_for(ProblemClass cls)
{
    switch (cls) {
    case ProblemClass::S: return {24, -3.247834652034740e+3, -6.958407078382297e+3};
    case ProblemClass::W: return {25, -2.863319731645753e+3, -6.320053679109499e+3};
    case ProblemClass::A: return {28, -4.295875165629892e+3, -1.580732573678431e+4};
    case ProblemClass::B: return {30, 4.033815542441498e+4, -2.660669192809235e+4};
    case ProblemClass::C: return {32, 4.764367927995374e+4, -8.084072988043731e+4};
    }
    return {24, 0.0, 0.0};
}

constexpr double kEpsilon = 1.0e-8;

} // namespace

GaussianTally merge(const GaussianTally& a, const GaussianTally& b)
{
    GaussianTally out;
    out.sx = a.sx + b.sx;
    out.sy = a.sy + b.sy;
    for (int l = 0; l < 10; l++)
        out.q[l] = a.q[l] + b.q[l];
    out.pairs = a.pairs + b.pairs;
    return out;
}

GaussianTally generate_chunk(long chunk_index, long chunk_pairs,
                             double base_seed, double* xbuf)
{
    GaussianTally tally;
    if (chunk_pairs <= 0)
        return tally;

    std::vector<double> local;
    if (xbuf == nullptr) {
        local.resize((size_t)(2 * chunk_pairs));
        xbuf = local.data();
    }

    RandomStream stream;
    stream.x = base_seed;
    stream.jump((std::uint64_t)(2 * chunk_pairs) * (std::uint64_t)chunk_index);
    stream.fill(2 * chunk_pairs, xbuf);

    for (long i = 0; i < chunk_pairs; i++) {
        double x1 = 2.0 * xbuf[2 * i] - 1.0;
        double x2 = 2.0 * xbuf[2 * i + 1] - 1.0;
        double t = x1 * x1 + x2 * x2;
        if (t <= 1.0) {
            double t2 = std::sqrt(-2.0 * std::log(t) / t);
            double t3 = x1 * t2;
            double t4 = x2 * t2;
            int l = (int)std::fmax(std::fabs(t3), std::fabs(t4));
            tally.q[l]++;
            tally.sx += t3;
            tally.sy += t4;
        }
    }
    tally.pairs = tally.q[0] + tally.q[1] + tally.q[2] + tally.q[3] +
                  tally.q[4] + tally.q[5] + tally.q[6] + tally.q[7] +
                  tally.q[8] + tally.q[9];
    return tally;
}

GaussianTally full_tally(int m, WorkerPool& pool)
{
    const long np = 1L << (m - 16);
    std::vector<std::vector<double>> scratch((size_t)pool.workers());
    for (auto& s : scratch)
        s.resize((size_t)(2 * kChunkPairs));

    return pool.par_map_reduce(
        IndexRange{0, np},
        [&](long k) {
            double* buf = scratch[(size_t)WorkerPool::current_worker()].data();
            return generate_chunk(k, kChunkPairs, kDefaultSeed, buf);
        },
        GaussianTally{}, merge);
}

int class_log2_pairs(ProblemClass cls)
{
    return params_for(cls).m;
}

BenchmarkResult run(ProblemClass cls, WorkerPool& pool, bool safe_mode)
{
    const EpParams p = params_for(cls);

    TimerSet timers;
    timers.start(0);
    GaussianTally tally = full_tally(p.m, pool);
    timers.stop(0);

    double t = timers.read(0);
    BenchmarkResult r;
    r.name = "EP";
    r.cls = cls;
    char size[32];
    std::snprintf(size, sizeof(size), "%ld", 1L << (p.m + 1));
    r.size = size;
    r.iterations = 0;
    r.seconds = t;
    r.mflops = t > 0.0 ? std::pow(2.0, p.m + 1) / t / 1.0e6 : 0.0;
    r.verified = verify_scalar(tally.sx, p.sx_ref, kEpsilon) &&
                 verify_scalar(tally.sy, p.sy_ref, kEpsilon);
    r.workers = pool.workers();
    r.safe_mode = safe_mode;
    return r;
}

} // namespace npb::ep
