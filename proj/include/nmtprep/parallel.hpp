#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <istream>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace nmtprep {

/// Runs `fn(begin, end)` over `threads` contiguous slices of [0, n) and
/// joins. The first exception thrown by any slice is rethrown.
template <class Fn>
void parallel_for_slices(std::size_t n, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = std::min(n, t * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&, t, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Line filter: reads `in` in batches, maps each line through `fn` on up
/// to `threads` workers and writes results in input order. Output does not
/// depend on the thread count.
template <class Fn>
void transform_lines(std::istream& in, std::ostream& out, std::size_t threads, Fn&& fn,
                     std::size_t batch_size = 8192) {
  std::vector<std::string> batch;
  std::vector<std::string> results;
  batch.reserve(batch_size);
  auto flush = [&] {
    results.assign(batch.size(), {});
    parallel_for_slices(batch.size(), threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) results[i] = fn(batch[i]);
    });
    for (const auto& r : results) out << r << '\n';
    batch.clear();
  };
  for (std::string line; std::getline(in, line);) {
    batch.push_back(std::move(line));
    if (batch.size() == batch_size) flush();
  }
  if (!batch.empty()) flush();
}

}  // namespace nmtprep
