#include "proteograph/parallel.hpp"

namespace proteograph {

WorkerPool::WorkerPool(std::size_t workers) : errors_(workers == 0 ? 1 : workers) {
    const std::size_t extra = workers > 1 ? workers - 1 : 0;
    threads_.reserve(extra);
    for (std::size_t i = 0; i < extra; ++i) threads_.emplace_back([this, i] { worker_loop(i + 1); });
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard lock(mutex_);
        stopping_ = true;
    }
    start_cv_.notify_all();
    for (auto& t : threads_) t.join();
}

void WorkerPool::run_chunk(std::size_t index) {
    const std::size_t parts = size();
    const std::size_t begin = job_size_ * index / parts;
    const std::size_t end = job_size_ * (index + 1) / parts;
    try {
        if (begin < end) (*job_)(begin, end);
    } catch (...) {
        errors_[index] = std::current_exception();
    }
}

void WorkerPool::worker_loop(std::size_t index) {
    std::size_t seen = 0;
    for (;;) {
        {
            std::unique_lock lock(mutex_);
            start_cv_.wait(lock, [&] { return stopping_ || generation_ != seen; });
            if (stopping_) return;
            seen = generation_;
        }
        run_chunk(index);
        {
            std::lock_guard lock(mutex_);
            if (--pending_ == 0) done_cv_.notify_one();
        }
    }
}

void WorkerPool::parallel_for(std::size_t n,
                              const std::function<void(std::size_t, std::size_t)>& fn) {
    if (threads_.empty()) {
        if (n > 0) fn(0, n);
        return;
    }
    {
        std::lock_guard lock(mutex_);
        job_ = &fn;
        job_size_ = n;
        pending_ = threads_.size();
        for (auto& e : errors_) e = nullptr;
        ++generation_;
    }
    start_cv_.notify_all();
    run_chunk(0);
    {
        std::unique_lock lock(mutex_);
        done_cv_.wait(lock, [&] { return pending_ == 0; });
        job_ = nullptr;
    }
    for (auto& e : errors_) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace proteograph
