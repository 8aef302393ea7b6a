#include "lpopt/worker_pool.hpp"

#include <algorithm>
#include <stdexcept>

namespace lpopt {

namespace {
constexpr int kChunkTarget = 4;  // chunks per worker, for mild load balancing
}

WorkerPool::WorkerPool(int workers) : workers_(workers) {
    if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
    for (int i = 0; i < workers - 1; ++i) threads_.emplace_back([this] { worker_loop(); });
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard lock(mutex_);
        stop_ = true;
    }
    cv_task_.notify_all();
    for (auto& t : threads_) t.join();
}

void WorkerPool::for_each(int count, const std::function<void(int)>& fn) {
    if (count <= 0) return;
    if (workers_ == 1 || count == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }

    const int chunks = std::min(count, workers_ * kChunkTarget);
    {
        std::lock_guard lock(mutex_);
        fn_ = &fn;
        count_ = count;
        next_chunk_ = 0;
        chunks_total_ = chunks;
        chunks_done_ = 0;
        ++generation_;
    }
    cv_task_.notify_all();

    // The calling thread participates as a worker.
    while (true) {
        int chunk;
        {
            std::lock_guard lock(mutex_);
            if (next_chunk_ >= chunks_total_) break;
            chunk = next_chunk_++;
        }
        const int begin = static_cast<int>(static_cast<long long>(chunk) * count_ / chunks_total_);
        const int end = static_cast<int>(static_cast<long long>(chunk + 1) * count_ / chunks_total_);
        for (int i = begin; i < end; ++i) fn(i);
        {
            std::lock_guard lock(mutex_);
            ++chunks_done_;
        }
    }

    std::unique_lock lock(mutex_);
    cv_done_.wait(lock, [this] { return chunks_done_ == chunks_total_; });
    fn_ = nullptr;
}

void WorkerPool::worker_loop() {
    std::uint64_t last_generation = 0;
    while (true) {
        {
            std::unique_lock lock(mutex_);
            cv_task_.wait(lock, [&] {
                return stop_ || (fn_ && generation_ != last_generation && next_chunk_ < chunks_total_);
            });
            if (stop_) return;
            last_generation = generation_;
        }
        while (true) {
            int chunk, count, total;
            const std::function<void(int)>* fn;
            {
                std::lock_guard lock(mutex_);
                // A stale generation means this batch already finished.
                if (!fn_ || generation_ != last_generation || next_chunk_ >= chunks_total_) break;
                chunk = next_chunk_++;
                count = count_;
                total = chunks_total_;
                fn = fn_;
            }
            const int begin = static_cast<int>(static_cast<long long>(chunk) * count / total);
            const int end = static_cast<int>(static_cast<long long>(chunk + 1) * count / total);
            for (int i = begin; i < end; ++i) (*fn)(i);
            bool all_done = false;
            {
                std::lock_guard lock(mutex_);
                all_done = ++chunks_done_ == chunks_total_;
            }
            if (all_done) cv_done_.notify_all();
        }
    }
}

}  // namespace lpopt
