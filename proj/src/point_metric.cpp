#include "wreath/point_metric.hpp"

#include <algorithm>
#include <limits>

namespace wreath {

namespace {

constexpr Int kInf = std::numeric_limits<Int>::max() / 4;

} // namespace

PointMetric::PointMetric(int size, std::vector<Int> distances)
    : size_(size), dist_(std::move(distances)) {
  if (size_ < 0 ||
      dist_.size() != static_cast<std::size_t>(size_) * static_cast<std::size_t>(size_))
    throw std::invalid_argument("distance matrix shape mismatch");
}

PointMetric PointMetric::from_points(
    std::size_t count,
    const std::function<Int(std::size_t, std::size_t)> &distance) {
  std::vector<Int> dist(count * count, 0);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = i + 1; j < count; ++j) {
      Int d = distance(i, j);
      dist[i * count + j] = d;
      dist[j * count + i] = d;
    }
  return PointMetric(static_cast<int>(count), std::move(dist));
}

bool PointMetric::symmetric_with_zero_diagonal() const {
  for (int i = 0; i < size_; ++i) {
    if (d(i, i) != 0)
      return false;
    for (int j = 0; j < size_; ++j)
      if (d(i, j) != d(j, i) || d(i, j) < 0)
        return false;
  }
  return true;
}

Int mst_weight(const PointMetric &pm) {
  const int n = pm.size();
  if (n < 1)
    throw std::invalid_argument("mst_weight needs at least one point");
  std::vector<Int> key(n, kInf);
  std::vector<bool> done(n, false);
  key[0] = 0;
  Int total = 0;
  for (int round = 0; round < n; ++round) {
    int best = -1;
    for (int i = 0; i < n; ++i)
      if (!done[i] && (best == -1 || key[i] < key[best]))
        best = i;
    done[best] = true;
    total += key[best];
    for (int i = 0; i < n; ++i)
      if (!done[i])
        key[i] = std::min(key[i], pm.d(best, i));
  }
  return total;
}

Int tsp_path_length(const PointMetric &pm, int start, int end, int cap) {
  const int n = pm.size();
  if (start < 0 || start >= n || end < 0 || end >= n)
    throw std::out_of_range("tsp start/end index out of range");

  // Collapse zero-distance duplicates; keep the lowest index per class.
  std::vector<int> rep(n, -1);
  std::vector<int> points;
  for (int i = 0; i < n; ++i) {
    for (int p : points)
      if (pm.d(i, p) == 0) {
        rep[i] = p;
        break;
      }
    if (rep[i] == -1) {
      rep[i] = i;
      points.push_back(i);
    }
  }
  start = rep[start];
  end = rep[end];

  if (static_cast<int>(points.size()) > cap)
    throw TooLarge(static_cast<int>(points.size()), cap);

  std::vector<int> interior;
  for (int p : points)
    if (p != start && p != end)
      interior.push_back(p);

  const int m = static_cast<int>(interior.size());
  if (m == 0)
    return pm.d(start, end);

  // dp[mask][j]: cheapest walk start -> (visits mask) ending at interior[j].
  std::vector<Int> dp(static_cast<std::size_t>(1 << m) * m, kInf);
  auto at = [m, &dp](unsigned mask, int j) -> Int & {
    return dp[static_cast<std::size_t>(mask) * m + j];
  };
  for (int j = 0; j < m; ++j)
    at(1u << j, j) = pm.d(start, interior[j]);
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    for (int j = 0; j < m; ++j) {
      if (!(mask & (1u << j)))
        continue;
      Int here = at(mask, j);
      if (here >= kInf)
        continue;
      for (int k = 0; k < m; ++k) {
        if (mask & (1u << k))
          continue;
        Int candidate = here + pm.d(interior[j], interior[k]);
        Int &slot = at(mask | (1u << k), k);
        if (candidate < slot)
          slot = candidate;
      }
    }
  }
  const unsigned full = (1u << m) - 1;
  Int best = kInf;
  for (int j = 0; j < m; ++j)
    best = std::min(best, at(full, j) + pm.d(interior[j], end));
  return best;
}

} // namespace wreath
