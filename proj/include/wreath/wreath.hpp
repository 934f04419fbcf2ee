#pragma once

#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wreath/group.hpp"

namespace wreath {

/// An element of a restricted wreath product A wr B: a finite assignment of
/// A-values to B-positions plus a final B-cursor. The support is kept in
/// canonical form: sorted by position, no identity values.
struct WreathElement {
  std::vector<std::pair<GroupElement, GroupElement>> support; // (position, value)
  GroupElement cursor;

  Int support_size() const { return static_cast<Int>(support.size()); }
  bool operator==(const WreathElement &) const = default;
};

std::size_t hash_value(const WreathElement &x);

struct WreathElementHash {
  std::size_t operator()(const WreathElement &x) const {
    return hash_value(x);
  }
};

/// One letter of a lamplighter word: either an A-generator applied at the
/// cursor position ("toggle the lamp you are at") or a B-generator moving
/// the cursor. sign is +1 or -1.
struct WreathLetter {
  bool lamp = false;
  int index = 0;
  int sign = 1;
};

/**
 * The regular restricted wreath product A wr B.
 *
 * Convention: (f1, b1)(f2, b2) = (f1 + b1.f2, b1 b2) with (b.f)(p) = f(b^-1 p),
 * so b a b^-1 is the single lamp a at position b and right-multiplying by an
 * embedded A-generator writes at the cursor. Elements are immutable values;
 * all operations are pure.
 */
class Wreath {
public:
  Wreath(Group lamp, Group base);

  const Group &lamp_group() const { return lamp_; } // A
  const Group &base_group() const { return base_; } // B

  WreathElement identity() const;
  bool is_identity(const WreathElement &x) const;

  /// Builds a canonical element from arbitrary (position, value) pairs:
  /// sorts, merges duplicates pointwise, prunes identity values.
  WreathElement
  make(std::vector<std::pair<GroupElement, GroupElement>> support,
       GroupElement cursor) const;

  WreathElement lamp_at(const GroupElement &position,
                        const GroupElement &value) const;
  WreathElement from_cursor(GroupElement cursor) const;

  WreathElement multiply(const WreathElement &x, const WreathElement &y) const;
  WreathElement inverse(const WreathElement &x) const;

  /// x^n by |n| multiplications (negative n through the inverse).
  WreathElement power(const WreathElement &x, Int n) const;

  /// Lamplighter evaluation of a word over the given generating sets:
  /// lamp letters multiply the value at the cursor, move letters multiply
  /// the cursor. Equals the product of the embedded generators.
  WreathElement evaluate(std::span<const WreathLetter> word,
                         const GeneratingSet &lamp_gens,
                         const GeneratingSet &move_gens) const;
  WreathElement evaluate(std::span<const WreathLetter> word) const;

  /// The normal form is the canonical support list plus the cursor; this
  /// rebuilds x as prod(b_i a_i b_i^-1) * b_f and is used to cross-check it.
  WreathElement reconstruct_from_normal_form(const WreathElement &x) const;

  nlohmann::json element_to_json(const WreathElement &x) const;
  WreathElement element_from_json(const nlohmann::json &j) const;
  std::string element_compact(const WreathElement &x) const;

  void encode(const WreathElement &x, std::vector<Int> &out) const;
  WreathElement decode(std::span<const Int> data, std::size_t &pos) const;

  bool operator==(const Wreath &) const = default;

private:
  Group lamp_;
  Group base_;
};

/// Parses "A wr B" descriptors, e.g. "Z2 wr Z".
Wreath parse_wreath(std::string_view text);

/// Display generating sets for lamplighter words: lamp generators are
/// labeled "a" (or "a1", "a2", ...), move generators "t" (or "t1", ...).
GeneratingSet lamp_generating_set(const Group &lamp);
GeneratingSet move_generating_set(const Group &base);

/// Parses a whitespace-separated lamplighter word: tokens are generator
/// labels, a trailing '-' marks the inverse ("t-").
std::vector<WreathLetter> parse_word(const Wreath &w, std::string_view text);

} // namespace wreath
