#include "woss/storage/replication.hpp"

namespace woss {

ThreadedExecutor::ThreadedExecutor(unsigned workers, std::function<bool()> foreground_busy)
    : foreground_busy_(std::move(foreground_busy)) {
    if (workers == 0) workers = 1;
    threads_.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) {
        threads_.emplace_back([this] { worker_loop(); });
    }
}

ThreadedExecutor::~ThreadedExecutor() {
    {
        std::lock_guard lock(mu_);
        stopping_ = true;
    }
    cv_.notify_all();
    for (auto& t : threads_) t.join();
}

void ThreadedExecutor::run_detached(bool high_priority, std::function<void()> work) {
    {
        std::lock_guard lock(mu_);
        (high_priority ? high_ : low_).push_back(std::move(work));
    }
    cv_.notify_one();
}

void ThreadedExecutor::run_all(std::vector<std::function<void()>> items) {
    // Callers wait for these, so they bypass the queues and fan out on
    // dedicated threads.
    std::vector<std::thread> runners;
    runners.reserve(items.size());
    for (auto& item : items) {
        runners.emplace_back(std::move(item));
    }
    for (auto& t : runners) t.join();
}

void ThreadedExecutor::worker_loop() {
    std::unique_lock lock(mu_);
    while (true) {
        cv_.wait_for(lock, std::chrono::milliseconds(10), [this] {
            return stopping_ || !high_.empty() || !low_.empty();
        });
        if (stopping_) return;

        std::function<void()> work;
        if (!high_.empty()) {
            work = std::move(high_.front());
            high_.pop_front();
        } else if (!low_.empty() && !(foreground_busy_ && foreground_busy_())) {
            work = std::move(low_.front());
            low_.pop_front();
        }
        if (!work) continue;

        active_ += 1;
        lock.unlock();
        work();
        lock.lock();
        active_ -= 1;
        idle_cv_.notify_all();
    }
}

void ThreadedExecutor::quiesce() {
    std::unique_lock lock(mu_);
    while (!(high_.empty() && low_.empty() && active_ == 0)) {
        // Timed wait: a lazy item parked behind foreground traffic produces
        // no completion notification to wake on.
        idle_cv_.wait_for(lock, std::chrono::milliseconds(5));
    }
}

}  // namespace woss
