#ifndef NORMDERIV_PARALLEL_HPP
#define NORMDERIV_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace normderiv {

/// Evaluates fn(0) ... fn(count - 1) on up to `threads` threads and returns
/// the results in index order. The output does not depend on `threads`.
/// The first exception thrown by any task (lowest index) is rethrown.
template <typename F>
auto parallel_map(std::size_t count, unsigned threads, F&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using result_t = decltype(fn(std::size_t{}));
  std::vector<result_t> out(count);
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) {
        try {
          out[i] = fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace normderiv

#endif
