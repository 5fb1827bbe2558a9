#ifndef NPB_IS_HPP
#define NPB_IS_HPP

#include "npb/common.hpp"
#include "npb/pool.hpp"

#include <vector>

namespace npb::is {

inline constexpr int kMaxIterations = 10;
inline constexpr int kTestArraySize = 5;

struct IsParams {
    long total_keys;
    long max_key;
    int num_buckets;
    int shift; // max_key_log2 - num_buckets_log2
    // class partial-verification constants; null for synthetic states
    const long* test_index;
    const long* test_rank;
};

IsParams params_for(ProblemClass cls);

// Sorting state shared across the iteration loop. key_buff1 ends up
// holding, for every key value k, the count of keys <= k; the rank of
// value k is key_buff1[k-1].
struct RankState {
    IsParams p;
    ProblemClass cls = ProblemClass::S;
    std::vector<int> key_array;  // the keys, mutated twice per iteration
    std::vector<int> key_buff2;  // keys regrouped bucket-major
    std::vector<int> key_buff1;  // per-value cumulative counts
    std::vector<std::vector<long>> worker_count; // per-worker histograms
    std::vector<long> bucket_end;                // global bucket end offsets
    int passed_verification = 0;
};

// Deterministic key sequence: four consecutive uniform draws per key,
// key_j = floor((r1+r2+r3+r4) * max_key/4). Chunked jumps keep the
// result identical for every worker count.
std::vector<int> create_seq(const IsParams& p, WorkerPool& pool);

RankState make_state(ProblemClass cls, WorkerPool& pool);

// One ranking pass: mutates the two designated keys, builds per-worker
// histograms over static partitions, scatters keys bucket-major
// (stable in partition order), computes per-value cumulative counts
// per bucket, and runs the class partial verification.
void rank(RankState& st, int iteration, WorkerPool& pool, bool safe_mode);

// Rebuilds the fully sorted sequence from the rank structure and
// returns the number of adjacent inversions (0 when correct).
long full_verify(RankState& st, WorkerPool& pool, bool safe_mode);

BenchmarkResult run(ProblemClass cls, WorkerPool& pool, bool safe_mode);

} // namespace npb::is

#endif
