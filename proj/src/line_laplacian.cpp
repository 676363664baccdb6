#include "polylap/line_laplacian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polylap/error.hpp"

namespace polylap {

namespace {

constexpr std::size_t kChunk = 1 << 16;
constexpr std::size_t kBlock = 4096;

inline double line_distance(double a, double b) {
  double delta = a > b ? a - b : b - a;
  if (delta > 0.5) delta = 1.0 - delta;
  return delta;
}

}  // namespace

LineLaplacian::LineLaplacian(std::vector<double> sorted_coords, double eps)
    : x_(std::move(sorted_coords)), eps_(eps), counts_(x_.size(), 0) {
  if (!(eps > 0.0) || eps > 0.5) throw ValidationError("LineLaplacian: eps must lie in (0, 1/2]");
  if (x_.empty()) throw ValidationError("LineLaplacian: empty cloud");
  if (x_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw ValidationError("LineLaplacian: cloud too large");
  }
  if (!std::is_sorted(x_.begin(), x_.end())) {
    throw ValidationError("LineLaplacian: coordinates must be sorted");
  }
  if (x_.front() < 0.0 || x_.back() >= 1.0) {
    throw ValidationError("LineLaplacian: coordinates must lie in [0,1)");
  }
  const std::size_t n = x_.size();
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t p0 = static_cast<std::size_t>(c) * kChunk;
    scan(p0, std::min(n, p0 + kChunk), {}, {},
         [&](std::size_t p, std::size_t count, long double) {
           counts_[p] = static_cast<std::uint32_t>(count);
         });
  }
}

template <class Emit>
void LineLaplacian::scan(std::size_t p0, std::size_t p1, std::span<const double> u,
                         const std::vector<long double>& block_sums, Emit&& emit) const {
  const auto n = static_cast<std::int64_t>(x_.size());
  const bool with_values = !u.empty();
  auto wrap = [n](std::int64_t q) {
    return static_cast<std::size_t>(q < 0 ? q + n : (q >= n ? q - n : q));
  };
  auto value = [&](std::int64_t q) -> long double { return with_values ? u[wrap(q)] : 0.0L; };
  // Every other node lies on exactly one side of p: forward when its
  // shortest displacement runs in the direction of increasing extended
  // index.  Distances use the same formula as the graph builder.
  auto near = [&](std::int64_t p, std::int64_t q) {
    const double xp = x_[static_cast<std::size_t>(p)];
    const double xq = x_[wrap(q)];
    const double delta = xp > xq ? xp - xq : xq - xp;
    // q in [0, n) is the node itself; outside it wrapped once.
    const bool wrapped = q < 0 || q >= n;
    const bool on_side = wrapped ? delta > 0.5 : delta <= 0.5;
    return on_side && line_distance(xp, xq) < eps_;
  };
  // Sum of u over actual indices [a, b).
  auto plain_sum = [&](std::size_t a, std::size_t b) {
    long double acc = 0.0L;
    while (a < b && a % kBlock != 0) acc += u[a++];
    while (a + kBlock <= b) {
      acc += block_sums[a / kBlock];
      a += kBlock;
    }
    while (a < b) acc += u[a++];
    return acc;
  };
  // Sum over extended indices [lo, hi] (fewer than n of them).
  auto range_sum = [&](std::int64_t lo, std::int64_t hi) {
    if (!with_values) return 0.0L;
    const std::size_t a = wrap(lo), b = wrap(hi);
    if (a <= b) return plain_sum(a, b + 1);
    return plain_sum(a, x_.size()) + plain_sum(0, b + 1);
  };
  // Largest k in [0, limit] such that p + dir*j is near for every 1 <= j <= k.
  auto reach = [&](std::int64_t p, std::int64_t dir, std::int64_t limit) {
    auto ok = [&](std::int64_t k) { return near(p, p + dir * k); };
    std::int64_t good = 0, bad = 1;
    while (bad <= limit && ok(bad)) {
      good = bad;
      bad *= 2;
    }
    if (bad > limit) {
      if (good == limit || ok(limit)) return limit;
      bad = limit;
    }
    while (bad - good > 1) {
      const std::int64_t mid = good + (bad - good) / 2;
      if (ok(mid)) {
        good = mid;
      } else {
        bad = mid;
      }
    }
    return good;
  };

  // Window [lo, hi] in extended indices always contains p; both ends only
  // move forward as p advances.
  auto p = static_cast<std::int64_t>(p0);
  std::int64_t hi = p + reach(p, 1, n - 1);
  std::int64_t lo = p - reach(p, -1, n - 1 - (hi - p));
  long double sum = range_sum(lo, hi);

  for (;;) {
    emit(static_cast<std::size_t>(p), static_cast<std::size_t>(hi - lo), sum);
    if (++p >= static_cast<std::int64_t>(p1)) break;
    if (hi < p) sum += value(++hi);
    while (hi + 1 <= p + n - 1 && near(p, hi + 1)) sum += value(++hi);
    while (lo < p && (lo <= hi - n || !near(p, lo))) sum -= value(lo++);
  }
}

void LineLaplacian::apply(std::span<const double> u, std::span<double> out) const {
  const std::size_t n = x_.size();
  if (u.size() != n || out.size() != n) {
    throw ValidationError("LineLaplacian::apply: length mismatch");
  }
  const long double c = static_cast<long double>(scale()) / eps_;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<long double> block_sums((n + kBlock - 1) / kBlock);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(block_sums.size()); ++b) {
    const std::size_t a = static_cast<std::size_t>(b) * kBlock;
    long double acc = 0.0L;
    for (std::size_t i = a; i < std::min(n, a + kBlock); ++i) acc += u[i];
    block_sums[static_cast<std::size_t>(b)] = acc;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ch = 0; ch < static_cast<std::ptrdiff_t>(chunks); ++ch) {
    const std::size_t p0 = static_cast<std::size_t>(ch) * kChunk;
    scan(p0, std::min(n, p0 + kChunk), u, block_sums, [&](std::size_t p, std::size_t count, long double sum) {
      const long double up = u[p];
      out[p] = static_cast<double>(c * (static_cast<long double>(count + 1) * up - sum));
    });
  }
}

}  // namespace polylap
