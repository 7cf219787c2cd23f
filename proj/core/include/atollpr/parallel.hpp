#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace atollpr {

// 0 selects std::thread::hardware_concurrency().
void set_thread_count(int n);
int thread_count();

// Calls body(begin, end) over disjoint chunks of [0, n). Chunks may run
// concurrently; body must not write shared state.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

// Tree summation. The association order depends only on the length, so
// results do not change with the thread count.
double pairwise_sum(std::span<const double> v);

}  // namespace atollpr
