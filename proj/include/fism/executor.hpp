#pragma once

#include <cstddef>
#include <functional>
#include <memory>

namespace fism {

/// Runs independent index-parallel jobs on a bounded number of threads.
/// One thread means plain sequential execution on the caller.
class Executor {
  public:
    explicit Executor(std::size_t threads = 1);
    ~Executor();
    Executor(const Executor &) = delete;
    Executor &operator=(const Executor &) = delete;

    std::size_t threads() const { return threads_; }

    /// Calls job(i) for every i in [0, count); returns after all finish.
    void for_each(std::size_t count, const std::function<void(std::size_t)> &job) const;

  private:
    struct Arena;
    std::size_t threads_;
    std::unique_ptr<Arena> arena_;
};

} // namespace fism
