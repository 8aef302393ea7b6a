// core/include/lpopt/worker_pool.hpp
//
// Fixed-size thread pool for batch objective evaluation. Work is split into
// contiguous index chunks; results land in caller-owned slots keyed by index,
// so the output is identical no matter how threads are scheduled.

#pragma once

#include <condition_variable>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace lpopt {

class WorkerPool {
public:
    explicit WorkerPool(int workers);
    ~WorkerPool();

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    int size() const { return workers_; }

    // Calls fn(i) for every i in [0, count). Blocks until done. fn must not
    // touch shared mutable state across indices.
    void for_each(int count, const std::function<void(int)>& fn);

private:
    void worker_loop();

    int workers_;
    std::vector<std::thread> threads_;
    std::mutex mutex_;
    std::condition_variable cv_task_;
    std::condition_variable cv_done_;
    const std::function<void(int)>* fn_ = nullptr;
    int count_ = 0;
    int next_chunk_ = 0;
    int chunks_total_ = 0;
    int chunks_done_ = 0;
    std::uint64_t generation_ = 0;
    bool stop_ = false;
};

}  // namespace lpopt
