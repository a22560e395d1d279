#include "coilflow/parallel.hpp"

#include <algorithm>

namespace coilflow {

namespace {
std::pair<std::size_t, std::size_t> chunk(std::size_t n, int parts, int id) {
  const std::size_t base = n / parts, extra = n % parts;
  const auto uid = static_cast<std::size_t>(id);
  const std::size_t begin = uid * base + std::min(uid, extra);
  return {begin, begin + base + (uid < extra ? 1 : 0)};
}
}  // namespace

WorkerPool::WorkerPool(int threads) : threads_(std::max(1, threads)) {
  for (int id = 1; id < threads_; ++id) workers_.emplace_back([this, id] { worker_loop(id); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mutex_);
    stop_ = true;
  }
  start_cv_.notify_all();
  for (auto& t : workers_) t.join();
}

void WorkerPool::parallel_for(std::size_t n, const Task& task) {
  if (threads_ == 1) {
    task(0, n, 0);
    return;
  }
  {
    std::lock_guard lock(mutex_);
    task_ = &task;
    n_ = n;
    pending_ = threads_ - 1;
    ++generation_;
  }
  start_cv_.notify_all();
  const auto [b, e] = chunk(n, threads_, 0);
  task(b, e, 0);
  std::unique_lock lock(mutex_);
  done_cv_.wait(lock, [this] { return pending_ == 0; });
  task_ = nullptr;
}

void WorkerPool::worker_loop(int id) {
  std::size_t seen = 0;
  for (;;) {
    const Task* task = nullptr;
    std::size_t n = 0;
    {
      std::unique_lock lock(mutex_);
      start_cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
      task = task_;
      n = n_;
    }
    const auto [b, e] = chunk(n, threads_, id);
    (*task)(b, e, id);
    {
      std::lock_guard lock(mutex_);
      --pending_;
    }
    done_cv_.notify_one();
  }
}

}  // namespace coilflow
