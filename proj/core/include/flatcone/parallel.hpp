#ifndef FLATCONE_PARALLEL_HPP_
#define FLATCONE_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace flatcone {

// Runs body(i) for i in [0, count) on a small worker pool. Results must be
// written to per-index slots; the first exception (lowest index) is rethrown.
inline void ParallelFor(std::size_t count, const std::function<void(std::size_t)>& body,
                        unsigned max_workers = 0) {
  unsigned workers = max_workers != 0 ? max_workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  std::vector<std::exception_ptr> errors(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
}

// Thread-safe per-degree cache in front of a pure generator. Concurrent
// misses may compute the same entry twice; the first insert wins, and since
// the generator is deterministic both copies are equal.
template <typename T>
class DegreeMemo {
 public:
  explicit DegreeMemo(std::function<T(int)> generator)
      : generator_(std::move(generator)), state_(std::make_shared<State>()) {}

  const T& operator()(int k) const {
    {
      std::lock_guard lock(state_->mutex);
      auto it = state_->cache.find(k);
      if (it != state_->cache.end()) return it->second;
    }
    T value = generator_(k);
    std::lock_guard lock(state_->mutex);
    return state_->cache.try_emplace(k, std::move(value)).first->second;
  }

 private:
  struct State {
    std::mutex mutex;
    std::map<int, T> cache;
  };

  std::function<T(int)> generator_;
  std::shared_ptr<State> state_;
};

}  // namespace flatcone

#endif  // FLATCONE_PARALLEL_HPP_
