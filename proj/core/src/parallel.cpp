#include "holo/parallel.hpp"

#include <atomic>
#include <condition_variable>
#include <mutex>
#include <queue>
#include <thread>
#include <vector>

namespace holo {

namespace {

std::atomic<int> g_max_threads{0};

thread_local bool tl_in_worker = false;

class Pool {
  public:
    explicit Pool(int n) {
        for (int i = 0; i < n; ++i)
            workers_.emplace_back([this] {
                tl_in_worker = true;
                loop();
            });
    }

    ~Pool() {
        {
            std::lock_guard<std::mutex> lk(mu_);
            stop_ = true;
        }
        cv_.notify_all();
        for (auto& w : workers_) w.join();
    }

    void submit(std::function<void()> task) {
        {
            std::lock_guard<std::mutex> lk(mu_);
            tasks_.push(std::move(task));
        }
        cv_.notify_one();
    }

    int size() const { return static_cast<int>(workers_.size()); }

  private:
    void loop() {
        for (;;) {
            std::function<void()> task;
            {
                std::unique_lock<std::mutex> lk(mu_);
                cv_.wait(lk, [this] { return stop_ || !tasks_.empty(); });
                if (stop_ && tasks_.empty()) return;
                task = std::move(tasks_.front());
                tasks_.pop();
            }
            task();
        }
    }

    std::mutex mu_;
    std::condition_variable cv_;
    std::queue<std::function<void()>> tasks_;
    std::vector<std::thread> workers_;
    bool stop_ = false;
};

int effective_threads() {
    int n = g_max_threads.load();
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    return n > 0 ? n : 1;
}

Pool& pool() {
    static Pool p(effective_threads());
    return p;
}

}  // namespace

void set_max_threads(int n) { g_max_threads.store(n); }

int max_threads() { return effective_threads(); }

void parallel_for(int64_t begin, int64_t end, const std::function<void(int64_t, int64_t)>& fn) {
    const int64_t range = end - begin;
    if (range <= 0) return;
    const int threads = effective_threads();
    if (threads <= 1 || range == 1 || tl_in_worker) {
        fn(begin, end);
        return;
    }

    const int64_t chunks = std::min<int64_t>(threads, range);
    std::atomic<int64_t> remaining{chunks};
    std::mutex done_mu;
    std::condition_variable done_cv;

    for (int64_t c = 0; c < chunks; ++c) {
        const int64_t lo = begin + range * c / chunks;
        const int64_t hi = begin + range * (c + 1) / chunks;
        pool().submit([&, lo, hi] {
            fn(lo, hi);
            if (remaining.fetch_sub(1) == 1) {
                std::lock_guard<std::mutex> lk(done_mu);
                done_cv.notify_one();
            }
        });
    }

    std::unique_lock<std::mutex> lk(done_mu);
    done_cv.wait(lk, [&] { return remaining.load() == 0; });
}

}  // namespace holo
