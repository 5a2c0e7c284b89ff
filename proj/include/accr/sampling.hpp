#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "accr/manifold.hpp"

namespace accr {

// Deterministic Latin-hypercube sample of `count` points strictly inside the
// chart's open domain box. Identical (chart, count, seed) give identical points
// on every platform.
std::vector<Point> latin_hypercube(const Chart& chart, std::size_t count, std::uint64_t seed = 42);

// Parses "t=2,u=0,v=0"; every coordinate must be given exactly once.
Point parse_point(std::string_view text, const Chart& chart);

// Pinned points first, then Latin-hypercube points up to `total`.
std::vector<Point> sample_points(const Chart& chart, std::size_t total, std::uint64_t seed,
                                 const std::vector<Point>& pinned);

// Evaluates f(i) for i in [0, count) on a small thread pool and returns the
// results in index order. Exceptions are rethrown for the lowest failing index.
template <class T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& f);

}  // namespace accr

#include "accr/detail/parallel.hpp"
