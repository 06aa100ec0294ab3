#pragma once

#include <functional>
#include <string>

namespace jetgeo {

/// Fixed float formatting for all file outputs: 17 significant digits,
/// shortest-round-trip style ("%.17g"), so identical inputs give
/// byte-identical files.
std::string format_g17(double v);

/// Deterministic index-parallel loop: fn(i) for i in [0, n), results keyed by
/// index so scheduling cannot change any output.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

}  // namespace jetgeo
