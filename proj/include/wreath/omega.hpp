#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include <json.hpp>

#include "wreath/ball.hpp"
#include "wreath/group.hpp"

namespace wreath {

/// Z/size (or Z itself when size == 0) on which each base generator acts by
/// adding its shift; an arbitrary base element acts through its abelianized
/// exponents. shifts has one entry per base generator.
struct CycleComponent {
  Int size = 0;
  std::vector<Int> shifts;
};

/// An explicit finite point set {0, ..., size-1} with one permutation per
/// base generator (left action: p -> perms[g][p]).
struct TableComponent {
  Int size = 0;
  std::vector<std::vector<Int>> perms;
  std::vector<std::vector<Int>> inverse_perms; // filled at construction
};

/// The base group acting on itself, as the degenerate regular case.
struct RegularComponent {};

using OmegaComponent =
    std::variant<CycleComponent, TableComponent, RegularComponent>;

/// A point of the acted-on set: which component it lives in plus either an
/// integer (cycle/table components) or a base element (regular components).
struct OmegaPoint {
  int component = 0;
  std::variant<Int, GroupElement> at;

  bool operator==(const OmegaPoint &) const = default;
};

int compare(const OmegaPoint &a, const OmegaPoint &b);
std::size_t hash_value(const OmegaPoint &p);

struct OmegaPointHash {
  std::size_t operator()(const OmegaPoint &p) const { return hash_value(p); }
};

struct OrbitInfo {
  int component = 0;
  OmegaPoint basepoint;            // minimal point of the orbit
  std::optional<Int> size;         // nullopt for infinite orbits
};

/**
 * A left action of a finitely generated base group on a disjoint union of
 * components, with finitely many orbits. Orbits and basepoints are computed
 * at construction; generator actions on table components are checked to be
 * bijections. Consistency with the base group's relations is the caller's
 * responsibility (and is property-tested, not enforced).
 */
class OmegaAction {
public:
  OmegaAction(Group base, std::vector<OmegaComponent> components);

  static OmegaAction regular(Group base);

  /// {"base": "Z", "omega": [{"type": "cycle", "size": 3}, ...]}; component
  /// types: cycle (size >= 1), line (= cycle of size 0), table, regular.
  /// Cycle/line shifts default to 1 per base generator.
  static OmegaAction from_json(const nlohmann::json &j);
  nlohmann::json to_json() const;

  const Group &base() const { return base_; }
  const std::vector<OmegaComponent> &components() const { return components_; }

  int orbit_count() const { return static_cast<int>(orbits_.size()); }
  const std::vector<OrbitInfo> &orbits() const { return orbits_; }
  const OmegaPoint &basepoint(int orbit) const {
    return orbits_.at(orbit).basepoint;
  }
  int orbit_of(const OmegaPoint &p) const;

  OmegaPoint act(const GroupElement &b, const OmegaPoint &p) const;
  OmegaPoint act_generator(int gen, int sign, const OmegaPoint &p) const;

  /// BFS distance between two points of one orbit in the graph whose edges
  /// are generator moves. On regular components this is the base word
  /// metric ||p^-1 q||. nullopt when the distance exceeds cap; throws
  /// OrbitMismatch for points of different orbits.
  std::optional<Int> schreier_distance(const OmegaPoint &p,
                                       const OmegaPoint &q, Int cap) const;

  nlohmann::json point_to_json(const OmegaPoint &p) const;
  OmegaPoint point_from_json(const nlohmann::json &j) const;
  std::string point_compact(const OmegaPoint &p) const;

  void encode(const OmegaPoint &p, std::vector<Int> &out) const;
  OmegaPoint decode(std::span<const Int> data, std::size_t &pos) const;

  bool operator==(const OmegaAction &other) const;

private:
  void compute_orbits();
  Int cycle_offset(const CycleComponent &c, const GroupElement &b) const;

  Group base_;
  std::vector<OmegaComponent> components_;
  std::vector<OrbitInfo> orbits_;
  std::vector<std::vector<int>> point_orbit_; // per finite component
  std::vector<Int> line_gcd_;                 // per component, 0 if unused
  std::vector<int> first_orbit_;              // first orbit id per component
  // Lazily built norm table shared by regular-component distance queries.
  mutable std::shared_ptr<NormCache> base_norms_;
};

} // namespace wreath
