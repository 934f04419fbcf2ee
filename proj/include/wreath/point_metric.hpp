#pragma once

#include <functional>
#include <vector>

#include "wreath/errors.hpp"
#include "wreath/group.hpp"

namespace wreath {

/// A finite point set with exact pairwise distances, stored as a symmetric
/// matrix with zero diagonal. Weights are integers throughout; nothing in
/// the core path touches floating point.
class PointMetric {
public:
  PointMetric() = default;
  PointMetric(int size, std::vector<Int> distances); // row-major size*size

  static PointMetric
  from_points(std::size_t count,
              const std::function<Int(std::size_t, std::size_t)> &distance);

  int size() const { return size_; }
  Int d(int i, int j) const { return dist_[static_cast<std::size_t>(i) * size_ + j]; }

  bool symmetric_with_zero_diagonal() const;

private:
  int size_ = 0;
  std::vector<Int> dist_;
};

/// Total weight of a minimum spanning tree of the complete graph on the
/// points (Prim, smallest index wins ties). The weight is unique even when
/// the tree is not. Requires at least one point.
Int mst_weight(const PointMetric &pm);

inline constexpr int kDefaultTspCap = 18;

/// Exact minimum length of a path that starts at `start`, visits every
/// point, and ends at `end` (start may equal end). Points at distance zero
/// from one another are collapsed before solving. Held-Karp bitmask dynamic
/// programming, O(2^s s^2); instances with more than `cap` points after
/// collapsing throw TooLarge.
Int tsp_path_length(const PointMetric &pm, int start, int end,
                    int cap = kDefaultTspCap);

} // namespace wreath
