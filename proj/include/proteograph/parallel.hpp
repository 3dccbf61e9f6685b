#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace proteograph {

// Fixed set of threads running static, contiguous partitions of an index
// range. Chunk boundaries depend only on the range and the worker count, so
// any per-index computation is reproducible regardless of scheduling.
class WorkerPool {
  public:
    explicit WorkerPool(std::size_t workers);
    ~WorkerPool();
    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    std::size_t size() const noexcept { return threads_.size() + 1; }

    // Calls fn(begin, end) with disjoint chunks covering [0, n) and blocks
    // until all have finished. Rethrows the exception of the lowest chunk.
    void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

  private:
    void worker_loop(std::size_t index);
    void run_chunk(std::size_t index);

    std::vector<std::thread> threads_;
    std::mutex mutex_;
    std::condition_variable start_cv_;
    std::condition_variable done_cv_;
    const std::function<void(std::size_t, std::size_t)>* job_ = nullptr;
    std::size_t job_size_ = 0;
    std::size_t generation_ = 0;
    std::size_t pending_ = 0;
    bool stopping_ = false;
    std::vector<std::exception_ptr> errors_;
};

}  // namespace proteograph
