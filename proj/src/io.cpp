#include "jetgeo/io.hpp"

#include <cstdio>
#include <thread>
#include <vector>

namespace jetgeo {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw <= 1 || n < 2) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const size_t workers = std::min<size_t>(hw, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace jetgeo
