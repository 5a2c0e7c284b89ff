#include "accr/sampling.hpp"

#include <charconv>
#include <numeric>
#include <random>
#include <string>

#include "accr/errors.hpp"

namespace accr {

namespace {

// Uniform in [0, 1) from the top 53 bits; std::uniform_real_distribution is
// not reproducible across standard libraries.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t below(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(unit(rng) * static_cast<double>(n)); }

}  // namespace

std::vector<Point> latin_hypercube(const Chart& chart, std::size_t count, std::uint64_t seed) {
  const int d = chart.dim();
  std::mt19937_64 rng(seed);
  std::vector<Point> pts(count, Point(static_cast<std::size_t>(d), 0.0));
  std::vector<std::size_t> strata(count);
  for (int c = 0; c < d; ++c) {
    std::iota(strata.begin(), strata.end(), std::size_t{0});
    for (std::size_t i = count; i > 1; --i) std::swap(strata[i - 1], strata[below(rng, i)]);
    const Interval iv = chart.domain[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < count; ++i) {
      // Keep a margin inside each stratum so points stay off the open boundary.
      const double u = 0.05 + 0.9 * unit(rng);
      const double frac = (static_cast<double>(strata[i]) + u) / static_cast<double>(count);
      pts[i][static_cast<std::size_t>(c)] = iv.lo + frac * (iv.hi - iv.lo);
    }
  }
  return pts;
}

Point parse_point(std::string_view text, const Chart& chart) {
  Point p(static_cast<std::size_t>(chart.dim()), 0.0);
  std::vector<bool> seen(p.size(), false);
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view item = text.substr(pos, end - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError("point entry '" + std::string(item) + "' is not name=value");
    const std::string_view name = item.substr(0, eq);
    const std::string_view val = item.substr(eq + 1);
    const int idx = chart.index_of(name);
    if (idx < 0) throw UnknownIdentifier(std::string(name));
    if (seen[static_cast<std::size_t>(idx)]) throw ParseError("coordinate '" + std::string(name) + "' given twice");
    double x = 0.0;
    const auto res = std::from_chars(val.data(), val.data() + val.size(), x);
    if (res.ec != std::errc() || res.ptr != val.data() + val.size())
      throw ParseError("bad value for coordinate '" + std::string(name) + "'");
    p[static_cast<std::size_t>(idx)] = x;
    seen[static_cast<std::size_t>(idx)] = true;
    pos = end + 1;
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw ParseError("point does not set coordinate '" + chart.coordinates[i] + "'");
  if (!chart.contains(p)) throw DomainError("point '" + std::string(text) + "' lies outside the domain box");
  return p;
}

std::vector<Point> sample_points(const Chart& chart, std::size_t total, std::uint64_t seed,
                                 const std::vector<Point>& pinned) {
  std::vector<Point> out = pinned;
  if (total > pinned.size()) {
    auto lhs = latin_hypercube(chart, total - pinned.size(), seed);
    out.insert(out.end(), lhs.begin(), lhs.end());
  }
  return out;
}

}  // namespace accr
