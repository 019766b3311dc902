#include "opwave/parallel.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace opwave::parallel {

namespace {
std::atomic<int> g_threads{0};
std::atomic<bool> g_serial{false};

int effective_threads() {
#ifdef _OPENMP
    int n = g_threads.load();
    return n > 0 ? n : omp_get_max_threads();
#else
    return 1;
#endif
}
} // namespace

void set_threads(int n) { g_threads.store(n < 0 ? 0 : n); }
int threads() { return effective_threads(); }
void set_serial(bool on) { g_serial.store(on); }
bool serial() { return g_serial.load(); }

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& f) {
    if (serial() || n < 2) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
#ifdef _OPENMP
    const int nt = effective_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        f(static_cast<std::size_t>(i));
    }
#else
    for (std::size_t i = 0; i < n; ++i) f(i);
#endif
}

double deterministic_sum(std::size_t n, const std::function<double(std::size_t)>& f) {
    if (n == 0) return 0.0;
    const std::size_t nblocks = (n + kReduceBlock - 1) / kReduceBlock;
    std::vector<double> partial(nblocks, 0.0);
    for_each_index(nblocks, [&](std::size_t b) {
        const std::size_t lo = b * kReduceBlock;
        const std::size_t hi = std::min(n, lo + kReduceBlock);
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += f(i);
        partial[b] = acc;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

} // namespace opwave::parallel
