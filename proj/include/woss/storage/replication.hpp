#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace woss {

// Runs replication work either inline (deterministic, used by the
// simulation harness) or on background threads (daemons and latency tests).
class ReplicationExecutor {
public:
    virtual ~ReplicationExecutor() = default;

    // Fire-and-forget. Lazy work runs at low priority and yields to
    // foreground traffic.
    virtual void run_detached(bool high_priority, std::function<void()> work) = 0;
    // Runs every item and returns when all finished.
    virtual void run_all(std::vector<std::function<void()>> items) = 0;
};

class InlineExecutor : public ReplicationExecutor {
public:
    void run_detached(bool, std::function<void()> work) override { work(); }
    void run_all(std::vector<std::function<void()>> items) override {
        for (auto& item : items) item();
    }
};

// Two-priority background pool. Low-priority (lazy) work is only picked up
// while the owning node reports no foreground activity, so chained
// replication stays out of the data path.
class ThreadedExecutor : public ReplicationExecutor {
public:
    explicit ThreadedExecutor(unsigned workers = 2,
                              std::function<bool()> foreground_busy = nullptr);
    ~ThreadedExecutor() override;

    void run_detached(bool high_priority, std::function<void()> work) override;
    void run_all(std::vector<std::function<void()>> items) override;

    // Blocks until both queues drain and every worker is idle.
    void quiesce();

private:
    void worker_loop();

    std::function<bool()> foreground_busy_;
    std::mutex mu_;
    std::condition_variable cv_;
    std::condition_variable idle_cv_;
    std::deque<std::function<void()>> high_;
    std::deque<std::function<void()>> low_;
    unsigned active_ = 0;
    bool stopping_ = false;
    std::vector<std::thread> threads_;
};

}  // namespace woss
