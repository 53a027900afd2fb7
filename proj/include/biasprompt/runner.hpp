#pragma once

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "biasprompt/errors.hpp"

namespace biasprompt {

// Runs jobs 0..count-1 on a bounded worker pool and hands each result to
// `sink` strictly in index order, no matter which worker finishes first.
// `sink` returning false cancels the run: jobs already started finish, but
// no further jobs are claimed and no further results are delivered.
//
// A job that throws aborts the run; the first exception is rethrown on the
// calling thread after the pool drains.  `sink` runs on the calling thread
// only, so it may touch unsynchronized state (files, counters) freely.
template <typename Result>
void run_ordered(std::size_t count, int workers,
                 const std::function<Result(std::size_t)>& job,
                 const std::function<bool(std::size_t, Result)>& sink) {
    if (workers < 1) throw ContractError("worker count must be at least 1");
    if (count == 0) return;

    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            if (!sink(i, job(i))) return;
        }
        return;
    }

    std::mutex mutex;
    std::condition_variable ready;
    std::vector<std::optional<Result>> results(count);
    std::atomic<std::size_t> next_job{0};
    std::atomic<bool> cancelled{false};
    std::exception_ptr failure;

    const std::size_t pool_size =
        std::min(static_cast<std::size_t>(workers), count);
    std::vector<std::thread> pool;
    pool.reserve(pool_size);
    for (std::size_t w = 0; w < pool_size; ++w) {
        pool.emplace_back([&] {
            while (!cancelled.load()) {
                const std::size_t index = next_job.fetch_add(1);
                if (index >= count) break;
                try {
                    Result result = job(index);
                    std::lock_guard<std::mutex> lock(mutex);
                    results[index] = std::move(result);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mutex);
                    if (!failure) failure = std::current_exception();
                    cancelled.store(true);
                }
                ready.notify_all();
            }
            ready.notify_all();
        });
    }

    std::size_t delivered = 0;
    try {
        std::unique_lock<std::mutex> lock(mutex);
        while (delivered < count && !cancelled.load()) {
            ready.wait(lock,
                       [&] { return cancelled.load() || results[delivered].has_value(); });
            if (cancelled.load()) break;
            Result result = std::move(*results[delivered]);
            results[delivered].reset();
            const std::size_t index = delivered++;
            lock.unlock();
            const bool keep_going = sink(index, std::move(result));
            lock.lock();
            if (!keep_going) {
                cancelled.store(true);
                break;
            }
        }
    } catch (...) {
        cancelled.store(true);
        ready.notify_all();
        for (auto& thread : pool) thread.join();
        throw;
    }
    ready.notify_all();
    for (auto& thread : pool) thread.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace biasprompt
