#ifndef NPB_POOL_HPP
#define NPB_POOL_HPP

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <vector>

#include <pthread.h>

namespace npb {

// Half-open index interval [begin, end).
struct IndexRange {
    long begin = 0;
    long end = 0;
    long size() const { return end - begin; }
};

// Splits range into n_workers disjoint covering subranges whose sizes
// differ by at most one; worker_id selects one of them.
IndexRange static_partition(IndexRange range, int worker_id, int n_workers);

struct PoolConfig {
    int workers = 1;
    std::size_t stack_reserve = 0; // 0 keeps the platform default
};

enum class SweepDirection { ascending, descending };

// Execution trace of one ordered_pipeline call, for asserting the
// hand-off contract. One entry per stage execution, in completion
// order. deps_satisfied records whether every published-ticket
// dependency of the stage was visible when its body started.
struct TicketLog {
    struct Entry {
        long plane;
        long block;
        bool deps_satisfied;
    };
    std::vector<Entry> entries;
    std::mutex mu;

    void record(long plane, long block, bool ok)
    {
        std::lock_guard<std::mutex> lock(mu);
        entries.push_back({plane, block, ok});
    }
};

// Fixed pool of pthread workers created once per run. Every primitive
// blocks the caller until all applications complete (implicit barrier;
// there is no nowait analogue, which is a known scaling cost for CG).
// A failure thrown from any body cancels outstanding chunks and is
// rethrown on the calling thread.
class WorkerPool {
public:
    explicit WorkerPool(PoolConfig cfg);
    ~WorkerPool();

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    int workers() const { return n_workers_; }

    // Deterministic reductions fold static partitions in worker order
    // instead of dynamically scheduled chunks; for debugging runs where
    // a bit-stable floating fold matters more than load balance.
    void set_deterministic_reduction(bool on) { deterministic_reduction_ = on; }
    bool deterministic_reduction() const { return deterministic_reduction_; }

    // Id of the pool worker executing the current body, 0 outside the
    // pool. Used to pick per-worker scratch buffers.
    static int current_worker();

    // Runs fn(worker_id) once on every worker and waits for all of
    // them. All other primitives are built on this.
    void run_on_workers(const std::function<void(int)>& fn);

    // body(i) exactly once per i in range, any order, any worker.
    // Caller contract: bodies at distinct indices share no mutable
    // state.
    void par_map(IndexRange range, const std::function<void(long)>& body);

    // Same execution shape as par_map. The separate entry point marks
    // call sites where the parallel index is not the leading storage
    // dimension of target: body(i, target) must write only the region
    // of target addressed (injectively) by i. Violations are
    // undetected data races, so every call site carries a written
    // disjointness argument.
    template <class T>
    void par_map_disjoint(IndexRange range, T& target,
                          const std::function<void(long, T&)>& body)
    {
        par_map(range, [&](long i) { body(i, target); });
    }

    // Folds map(i) over range through combine, starting from identity.
    // combine must be associative with identity as neutral element.
    // The fold tree shape is unspecified unless deterministic
    // reduction is enabled (static partitions, worker-order fold).
    template <class V, class Map, class Combine>
    V par_map_reduce(IndexRange range, Map map, V identity, Combine combine)
    {
        const int n = n_workers_;
        std::vector<V> partial((size_t)n, identity);
        if (deterministic_reduction_) {
            run_on_workers([&](int w) {
                IndexRange part = static_partition(range, w, n);
                V acc = identity;
                for (long i = part.begin; i < part.end; i++)
                    acc = combine(acc, map(i));
                partial[(size_t)w] = acc;
            });
        } else {
            std::atomic<long> next{range.begin};
            const long chunk = chunk_size(range);
            run_on_workers([&](int w) {
                V acc = identity;
                for (;;) {
                    long lo = next.fetch_add(chunk, std::memory_order_relaxed);
                    if (lo >= range.end)
                        break;
                    long hi = lo + chunk < range.end ? lo + chunk : range.end;
                    for (long i = lo; i < hi; i++)
                        acc = combine(acc, map(i));
                    if (cancelled())
                        break;
                }
                partial[(size_t)w] = acc;
            });
        }
        V result = identity;
        for (int w = 0; w < n; w++)
            result = combine(result, partial[(size_t)w]);
        return result;
    }

    // Barrier across all pool workers; call only from inside a body
    // running under run_on_workers (every worker must arrive).
    void barrier();

    // Wavefront pipeline over a plane dimension with a block dimension
    // handed off in ascending block order. stage(k, b) starts only
    // after stage(prev_k, b) and stage(k, b-1) have published their
    // tickets, where prev_k follows direction. Blocks are owned by
    // worker (b mod workers); each worker walks planes in direction
    // order, so plane tickets for owned blocks are published in
    // program order and the pipeline cannot deadlock.
    void ordered_pipeline(IndexRange planes, IndexRange blocks,
                          const std::function<void(long, long)>& stage,
                          SweepDirection direction, TicketLog* log = nullptr);

private:
    friend struct PoolWorkerEntry;

    long chunk_size(IndexRange range) const;
    bool cancelled() const { return cancel_.load(std::memory_order_relaxed); }
    void worker_loop(int id);
    void note_failure();

    int n_workers_;
    std::size_t stack_reserve_;
    bool deterministic_reduction_ = false;

    std::vector<pthread_t> threads_;
    std::mutex mu_;
    std::condition_variable cv_work_;
    std::condition_variable cv_done_;
    const std::function<void(int)>* job_ = nullptr;
    std::uint64_t epoch_ = 0;
    int remaining_ = 0;
    bool shutdown_ = false;

    std::atomic<bool> cancel_{false};
    std::exception_ptr first_error_;
    std::mutex error_mu_;

    pthread_barrier_t barrier_;
};

} // namespace npb

#endif
