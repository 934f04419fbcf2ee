#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wreath/metric.hpp"
#include "wreath/omega.hpp"

namespace wreath {

/// An element of A wr_Omega B: finite assignment of lamp values to points of
/// the acted-on set, plus a base-group cursor. Canonical form as in the
/// regular case: support sorted by point, no identity values.
struct NonregularElement {
  std::vector<std::pair<OmegaPoint, GroupElement>> support;
  GroupElement cursor;

  Int support_size() const { return static_cast<Int>(support.size()); }
  bool operator==(const NonregularElement &) const = default;
};

std::size_t hash_value(const NonregularElement &x);

/// A word letter: either lamp generator `index` applied at orbit `orbit`'s
/// pointer, or base generator `index` moving the cursor.
struct NonregularLetter {
  bool lamp = false;
  int orbit = 0;
  int index = 0;
  int sign = 1;
};

/**
 * The restricted wreath product A wr_Omega B for a left base action with
 * finitely many orbits. Same multiplication convention as the regular case;
 * each orbit j carries a pointer act(cursor, basepoint_j), and
 * right-multiplying by an orbit-j lamp generator writes there.
 */
class NonregularWreath {
public:
  NonregularWreath(Group lamp, OmegaAction action);

  const Group &lamp_group() const { return lamp_; }
  const Group &base_group() const { return action_.base(); }
  const OmegaAction &action() const { return action_; }
  int orbit_count() const { return action_.orbit_count(); }

  NonregularElement identity() const;
  bool is_identity(const NonregularElement &x) const;

  NonregularElement
  make(std::vector<std::pair<OmegaPoint, GroupElement>> support,
       GroupElement cursor) const;

  NonregularElement lamp_at(const OmegaPoint &point,
                            const GroupElement &value) const;
  NonregularElement from_cursor(GroupElement cursor) const;

  OmegaPoint pointer(int orbit, const GroupElement &cursor) const;

  NonregularElement multiply(const NonregularElement &x,
                             const NonregularElement &y) const;
  NonregularElement inverse(const NonregularElement &x) const;
  NonregularElement power(const NonregularElement &x, Int n) const;

  NonregularElement evaluate(std::span<const NonregularLetter> word) const;

  nlohmann::json element_to_json(const NonregularElement &x) const;
  NonregularElement element_from_json(const nlohmann::json &j) const;
  std::string element_compact(const NonregularElement &x) const;

  void encode(const NonregularElement &x, std::vector<Int> &out) const;
  NonregularElement decode(std::span<const Int> data, std::size_t &pos) const;

private:
  Group lamp_;
  OmegaAction action_;
};

/**
 * Metric layer for the nonregular product: the per-orbit spanning-tree
 * estimate and a BFS oracle over the group itself. The generating set is
 * one copy of the lamp generators per orbit plus the base generators.
 */
class NonregularMetric {
public:
  explicit NonregularMetric(NonregularWreath w, EngineOptions options = {});

  const NonregularWreath &wreath() const { return w_; }

  std::optional<Int> lamp_norm(const GroupElement &a) const;
  std::optional<Int> base_norm(const GroupElement &b) const;

  /// Spanning-tree weight of orbit j's tour points: basepoint, the orbit's
  /// support points, and the cursor's pointer, under Schreier distances.
  std::optional<Int> orbit_tree_weight(const NonregularElement &x,
                                       int orbit) const;

  /// Sum of lamp norms, plus every orbit's tree weight (orbits with empty
  /// support still contribute their basepoint-to-pointer leg), plus the
  /// cursor norm.
  std::optional<Int> estimate(const NonregularElement &x) const;

  std::optional<Int> bfs_norm(const NonregularElement &x, Int cap) const;

  void for_each_ball_element(
      Int radius,
      const std::function<void(const NonregularElement &, Int)> &visit) const;

  std::vector<std::pair<NonregularElement, Int>> ball(Int radius) const;

  /// Saves the factor norm tables to options cache_dir, if set.
  void persist_caches() const;

private:
  NonregularWreath w_;
  EngineOptions options_;
  mutable NormCache lamp_norms_;
  mutable NormCache base_norms_;
};

/// Parses a nonregular lamplighter word. Lamp tokens carry an orbit tag
/// "a@2" (1-based; a bare "a" means orbit 1), move tokens are as in the
/// regular case, and a trailing '-' marks the inverse.
std::vector<NonregularLetter> parse_word(const NonregularWreath &w,
                                         std::string_view text);

} // namespace wreath
