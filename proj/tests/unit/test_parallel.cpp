#include <doctest.h>

#include <atomic>
#include <stdexcept>

#include "proteograph/parallel.hpp"

using proteograph::WorkerPool;

TEST_CASE("chunks cover the range exactly once") {
    for (std::size_t workers : {1u, 2u, 3u, 8u}) {
        WorkerPool pool(workers);
        CHECK(pool.size() == workers);
        for (std::size_t n : {0u, 1u, 5u, 97u}) {
            std::vector<int> hits(n, 0);
            pool.parallel_for(n, [&](std::size_t b, std::size_t e) {
                for (std::size_t i = b; i < e; ++i) ++hits[i];
            });
            for (int h : hits) CHECK(h == 1);
        }
    }
}

TEST_CASE("pool is reusable and rethrows") {
    WorkerPool pool(4);
    std::atomic<long> total{0};
    for (int round = 0; round < 100; ++round) {
        pool.parallel_for(1000, [&](std::size_t b, std::size_t e) {
            long local = 0;
            for (std::size_t i = b; i < e; ++i) local += static_cast<long>(i);
            total += local;
        });
    }
    CHECK(total == 100L * 999L * 1000L / 2L);
    CHECK_THROWS_AS(pool.parallel_for(10, [](std::size_t b, std::size_t) {
        if (b > 0) throw std::runtime_error("boom");
    }), std::runtime_error);
    pool.parallel_for(3, [](std::size_t, std::size_t) {});
}
