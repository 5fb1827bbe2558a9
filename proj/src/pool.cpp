#include "npb/pool.hpp"

#include <cassert>
#include <cstdio>
#include <cstdlib>

namespace npb {

namespace {
thread_local int tl_worker_id = -1;
}

IndexRange static_partition(IndexRange range, int worker_id, int n_workers)
{
    assert(n_workers >= 1 && worker_id >= 0 && worker_id < n_workers);
    long len = range.size();
    long base = len / n_workers;
    long rem = len % n_workers;
    long lo = range.begin + (long)worker_id * base +
              (worker_id < rem ? worker_id : rem);
    long sz = base + (worker_id < rem ? 1 : 0);
    return {lo, lo + sz};
}

struct PoolWorkerEntry {
    WorkerPool* pool;
    int id;

    static void* run(void* arg)
    {
        auto* self = (PoolWorkerEntry*)arg;
        tl_worker_id = self->id;
        self->pool->worker_loop(self->id);
        delete self;
        return nullptr;
    }
};

WorkerPool::WorkerPool(PoolConfig cfg)
    : n_workers_(cfg.workers), stack_reserve_(cfg.stack_reserve)
{
    if (n_workers_ < 1) {
        std::fprintf(stderr, "fatal: worker count must be >= 1\n");
        std::abort();
    }
    pthread_barrier_init(&barrier_, nullptr, (unsigned)n_workers_);

    pthread_attr_t attr;
    pthread_attr_init(&attr);
    if (stack_reserve_ > 0)
        pthread_attr_setstacksize(&attr, stack_reserve_);

    threads_.resize((size_t)n_workers_);
    for (int i = 0; i < n_workers_; i++) {
        auto* entry = new PoolWorkerEntry{this, i};
        int rc = pthread_create(&threads_[(size_t)i], &attr,
                                PoolWorkerEntry::run, entry);
        if (rc != 0) {
            std::fprintf(stderr, "fatal: pthread_create failed (%d)\n", rc);
            std::abort();
        }
    }
    pthread_attr_destroy(&attr);
}

WorkerPool::~WorkerPool()
{
    {
        std::lock_guard<std::mutex> lock(mu_);
        shutdown_ = true;
    }
    cv_work_.notify_all();
    for (pthread_t t : threads_)
        pthread_join(t, nullptr);
    pthread_barrier_destroy(&barrier_);
}

int WorkerPool::current_worker()
{
    return tl_worker_id >= 0 ? tl_worker_id : 0;
}

void WorkerPool::worker_loop(int id)
{
    std::uint64_t seen = 0;
    for (;;) {
        const std::function<void(int)>* fn = nullptr;
        {
            std::unique_lock<std::mutex> lock(mu_);
            cv_work_.wait(lock, [&] { return shutdown_ || epoch_ != seen; });
            if (shutdown_)
                return;
            seen = epoch_;
            fn = job_;
        }
        try {
            (*fn)(id);
        } catch (...) {
            note_failure();
        }
        {
            std::lock_guard<std::mutex> lock(mu_);
            remaining_--;
        }
        cv_done_.notify_all();
    }
}

void WorkerPool::note_failure()
{
    std::lock_guard<std::mutex> lock(error_mu_);
    if (!first_error_)
        first_error_ = std::current_exception();
    cancel_.store(true, std::memory_order_relaxed);
}

void WorkerPool::run_on_workers(const std::function<void(int)>& fn)
{
    {
        std::unique_lock<std::mutex> lock(mu_);
        job_ = &fn;
        remaining_ = n_workers_;
        epoch_++;
        cv_work_.notify_all();
        cv_done_.wait(lock, [&] { return remaining_ == 0; });
        job_ = nullptr;
    }
    if (first_error_) {
        std::exception_ptr e;
        {
            std::lock_guard<std::mutex> lock(error_mu_);
            e = first_error_;
            first_error_ = nullptr;
            cancel_.store(false, std::memory_order_relaxed);
        }
        std::rethrow_exception(e);
    }
}

long WorkerPool::chunk_size(IndexRange range) const
{
    long len = range.size();
    long target = len / ((long)n_workers_ * 8);
    return target > 0 ? target : 1;
}

void WorkerPool::par_map(IndexRange range, const std::function<void(long)>& body)
{
    if (range.size() <= 0)
        return;
    std::atomic<long> next{range.begin};
    const long chunk = chunk_size(range);
    run_on_workers([&](int) {
        for (;;) {
            if (cancelled())
                break;
            long lo = next.fetch_add(chunk, std::memory_order_relaxed);
            if (lo >= range.end)
                break;
            long hi = lo + chunk < range.end ? lo + chunk : range.end;
            for (long i = lo; i < hi; i++)
                body(i);
        }
    });
}

void WorkerPool::barrier()
{
    pthread_barrier_wait(&barrier_);
}

void WorkerPool::ordered_pipeline(IndexRange planes, IndexRange blocks,
                                  const std::function<void(long, long)>& stage,
                                  SweepDirection direction, TicketLog* log)
{
    const long n_planes = planes.size();
    const long n_blocks = blocks.size();
    if (n_planes <= 0 || n_blocks <= 0)
        return;

    // tickets[p * n_blocks + b] set once stage for (plane position p,
    // block b) has returned
    std::vector<std::atomic<char>> tickets((size_t)(n_planes * n_blocks));
    for (auto& t : tickets)
        t.store(0, std::memory_order_relaxed);
    std::mutex ticket_mu;
    std::condition_variable ticket_cv;
    std::atomic<bool> aborted{false};

    auto published = [&](long p, long b) {
        return tickets[(size_t)(p * n_blocks + b)].load(
                   std::memory_order_acquire) != 0;
    };
    auto wait_for = [&](long p, long b) {
        if (published(p, b))
            return;
        std::unique_lock<std::mutex> lock(ticket_mu);
        ticket_cv.wait(lock, [&] {
            return published(p, b) || aborted.load(std::memory_order_relaxed);
        });
    };
    auto publish = [&](long p, long b) {
        tickets[(size_t)(p * n_blocks + b)].store(1, std::memory_order_release);
        std::lock_guard<std::mutex> lock(ticket_mu);
        ticket_cv.notify_all();
    };

    run_on_workers([&](int w) {
        try {
            for (long p = 0; p < n_planes; p++) {
                long plane = direction == SweepDirection::ascending
                                 ? planes.begin + p
                                 : planes.end - 1 - p;
                for (long b = w; b < n_blocks; b += n_workers_) {
                    if (p > 0)
                        wait_for(p - 1, b);
                    if (b > 0)
                        wait_for(p, b - 1);
                    if (aborted.load(std::memory_order_relaxed))
                        return;
                    if (log) {
                        bool ok = (p == 0 || published(p - 1, b)) &&
                                  (b == 0 || published(p, b - 1));
                        log->record(plane, blocks.begin + b, ok);
                    }
                    stage(plane, blocks.begin + b);
                    publish(p, b);
                }
            }
        } catch (...) {
            // release every waiter before surfacing the failure
            aborted.store(true, std::memory_order_relaxed);
            {
                std::lock_guard<std::mutex> lock(ticket_mu);
            }
            ticket_cv.notify_all();
            throw;
        }
    });
}

} // namespace npb
