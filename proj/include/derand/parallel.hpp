#pragma once

#include <cstddef>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace derand::par {

// Reductions below always decompose a range into fixed blocks of this size,
// sum each block in index order, then fold the block partials in block
// order. The result is therefore one specific floating-point sum that does
// not depend on the thread count (or on whether OpenMP is enabled at all).
inline constexpr std::size_t kBlock = 256;

// Ranges shorter than this are reduced without spawning a parallel region;
// the block decomposition stays the same either way.
inline constexpr std::size_t kParallelCutoff = 4096;

inline int max_threads() {
  if (const char* env = std::getenv("DERAND_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int count) {
#ifdef _OPENMP
  if (count > 0) omp_set_num_threads(count);
#else
  (void)count;
#endif
}

/// Acc must be cheap to default-construct ("zero") and support combine(other).
template <class Acc, class BlockFn>
Acc blocked_reduce(std::size_t count, BlockFn&& block_fn) {
  if (count <= kBlock) {
    Acc acc{};
    block_fn(std::size_t{0}, count, acc);
    return acc;
  }
  const std::size_t blocks = (count + kBlock - 1) / kBlock;
  std::vector<Acc> partial(blocks);
  auto run_block = [&](std::size_t b) {
    const std::size_t begin = b * kBlock;
    const std::size_t end = begin + kBlock < count ? begin + kBlock : count;
    block_fn(begin, end, partial[b]);
  };
#ifdef _OPENMP
  if (count >= kParallelCutoff) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b)
      run_block(static_cast<std::size_t>(b));
  } else {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  }
#else
  for (std::size_t b = 0; b < blocks; ++b) run_block(b);
#endif
  Acc acc{};
  for (const Acc& p : partial) acc.combine(p);
  return acc;
}

namespace detail {
struct SumAcc {
  double value = 0.0;
  void combine(const SumAcc& other) { value += other.value; }
};
}  // namespace detail

/// Deterministic sum of term(i) for i in [0, count).
template <class TermFn>
double blocked_sum(std::size_t count, TermFn&& term) {
  auto acc = blocked_reduce<detail::SumAcc>(
      count, [&](std::size_t begin, std::size_t end, detail::SumAcc& a) {
        double s = 0.0;
        for (std::size_t i = begin; i < end; ++i) s += term(i);
        a.value = s;
      });
  return acc.value;
}

/// Elementwise parallel loop; only spawns threads for reasonably large counts.
template <class BodyFn>
void parallel_for(std::size_t count, BodyFn&& body) {
#ifdef _OPENMP
  if (count >= kParallelCutoff) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i)
      body(static_cast<std::size_t>(i));
    return;
  }
#endif
  for (std::size_t i = 0; i < count; ++i) body(i);
}

}  // namespace derand::par
