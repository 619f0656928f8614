// Index-parallel kernel used by the batch operations (equilibrium grid scans,
// sweep cells, separatrix scan lines, trajectory batches). Two execution
// modes: a serial reference loop and an OpenMP loop. Both fill per-index
// output slots, so results are identical bit-for-bit regardless of mode or
// worker count.

#ifndef FEARPP_PARALLEL_HPP
#define FEARPP_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fearpp::par {

enum class Mode { Serial, OpenMP };

// Global default used by library call sites; the CLI sets it from --threads.
Mode& default_mode();
int& default_threads(); // 0 = OpenMP runtime default

// Runs fn(i) for i in [0, n). Exceptions thrown by fn are captured and the
// first one is rethrown after the loop completes.
template <typename Fn>
void for_each_index(std::size_t n, Fn&& fn, Mode mode) {
    if (mode == Mode::Serial) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
#ifdef _OPENMP
    std::exception_ptr first_error = nullptr;
    std::mutex err_mu;
    const int nt = default_threads();
#pragma omp parallel for schedule(guided) num_threads(nt > 0 ? nt : omp_get_max_threads())
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lk(err_mu);
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
#else
    for (std::size_t i = 0; i < n; ++i) fn(i);
#endif
}

template <typename Fn>
void for_each_index(std::size_t n, Fn&& fn) {
    for_each_index(n, static_cast<Fn&&>(fn), default_mode());
}

} // namespace fearpp::par

#endif
