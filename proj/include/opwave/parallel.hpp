#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace opwave::parallel {

// Worker-count ceiling for all OpenMP regions in the library. 0 = all cores.
void set_threads(int n);
int threads();

// Disables OpenMP regions entirely (serial reference path used by tests and
// the benchmark tool).
void set_serial(bool on);
bool serial();

// Applies f(i) for i in [0, n). Iterations must be independent; each index
// writes only its own outputs, so the result is identical for any worker
// count.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& f);

// Sum of f(i) over [0, n) with a fixed blocking scheme: per-block partial
// sums are accumulated serially in block order, so the rounding pattern does
// not depend on the worker count. Block size is a constant of the library.
double deterministic_sum(std::size_t n, const std::function<double(std::size_t)>& f);

inline constexpr std::size_t kReduceBlock = 4096;

} // namespace opwave::parallel
