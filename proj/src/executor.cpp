#include <fism/executor.hpp>

#include <tbb/global_control.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include <algorithm>

namespace fism {

struct Executor::Arena {
    // The global limit defaults to the core count; lift it so the requested
    // thread count is honoured on small machines too.
    explicit Arena(int threads)
        : limit(tbb::global_control::max_allowed_parallelism,
                std::max<std::size_t>(static_cast<std::size_t>(threads),
                                      tbb::global_control::active_value(
                                          tbb::global_control::max_allowed_parallelism))),
          arena(threads) {}
    tbb::global_control limit;
    tbb::task_arena arena;
};

Executor::Executor(std::size_t threads) : threads_{std::max<std::size_t>(threads, 1)} {
    if (threads_ > 1)
        arena_ = std::make_unique<Arena>(static_cast<int>(threads_));
}

Executor::~Executor() = default;

void Executor::for_each(std::size_t count, const std::function<void(std::size_t)> &job) const {
    if (!arena_ || count <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            job(i);
        return;
    }
    arena_->arena.execute([&] {
        tbb::parallel_for(std::size_t{0}, count, [&](std::size_t i) { job(i); });
    });
}

} // namespace fism
