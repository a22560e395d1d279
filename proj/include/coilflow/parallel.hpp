#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace coilflow {

/// Fixed set of workers running contiguous chunks of an index range.
///
/// Chunk boundaries depend only on the range length and the worker count, and
/// parallel_for returns only after every chunk finished (a full barrier).
class WorkerPool {
 public:
  using Task = std::function<void(std::size_t begin, std::size_t end, int worker)>;

  explicit WorkerPool(int threads = 1);
  ~WorkerPool();
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  [[nodiscard]] int size() const { return threads_; }
  void parallel_for(std::size_t n, const Task& task);

 private:
  void worker_loop(int id);

  int threads_;
  std::vector<std::thread> workers_;
  std::mutex mutex_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  const Task* task_ = nullptr;
  std::size_t n_ = 0;
  std::size_t generation_ = 0;
  int pending_ = 0;
  bool stop_ = false;
};

}  // namespace coilflow
