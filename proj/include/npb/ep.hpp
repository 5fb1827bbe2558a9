#ifndef NPB_EP_HPP
#define NPB_EP_HPP

#include "npb/common.hpp"
#include "npb/pool.hpp"

namespace npb::ep {

// Accepted Gaussian pairs: running sums of both deviates plus the
// annulus counts q[l], l = floor(max(|X|, |Y|)). Merging two tallies
// is componentwise addition, so any reduction tree gives the same
// counts and the sums differ only by floating reassociation.
struct GaussianTally {
    double sx = 0.0;
    double sy = 0.0;
    long q[10] = {0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    long pairs = 0;
};

GaussianTally merge(const GaussianTally& a, const GaussianTally& b);

inline constexpr long kChunkPairs = 1L << 16;

// Draws chunk_pairs uniform pairs from the stream positioned at
// offset 2 * chunk_index * chunk_pairs past base_seed, maps them to
// (-1,1)^2, and tallies the accepted Gaussian deviates. xbuf, when
// given, must hold 2 * chunk_pairs doubles.
GaussianTally generate_chunk(long chunk_index, long chunk_pairs,
                             double base_seed, double* xbuf = nullptr);

// Tally over all 2^m pairs of the class, chunked across the pool.
GaussianTally full_tally(int m, WorkerPool& pool);

int class_log2_pairs(ProblemClass cls);

BenchmarkResult run(ProblemClass cls, WorkerPool& pool, bool safe_mode);

} // namespace npb::ep

#endif
