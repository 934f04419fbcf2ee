#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wreath/errors.hpp"

namespace wreath {

using Int = std::int64_t;

enum class FactorKind { FreeAbelian, Cyclic, Free, Heisenberg };

/// One direct factor of a group: Z^k, Z/n, F_k, or the discrete Heisenberg
/// group H3 of integer triples with (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
struct Factor {
  FactorKind kind = FactorKind::FreeAbelian;
  int rank = 1;    // Z^k, F_k
  Int modulus = 0; // Z/n

  int generator_count() const;
  // Width of one element value; -1 for variable-length (free words).
  int value_width() const;

  bool operator==(const Factor &) const = default;
};

/// An element of a Group, one flat integer vector per factor:
///  - Z^k: k coordinates
///  - Z/n: a single residue in [0, n)
///  - F_k: a freely reduced word, letters in {±1, ..., ±k}
///  - H3:  the triple (a, b, c)
///
/// Values are immutable in practice: every operation returns a fresh element.
struct GroupElement {
  std::vector<std::vector<Int>> parts;

  bool operator==(const GroupElement &) const = default;
};

/// Canonical total order on elements of one group: per factor, shorter value
/// vector first, then lexicographic. For fixed-width factors this is plain
/// coordinate order; for free words it is shortlex.
int compare(const GroupElement &a, const GroupElement &b);

inline bool element_less(const GroupElement &a, const GroupElement &b) {
  return compare(a, b) < 0;
}

std::size_t hash_value(const GroupElement &x);

struct GroupElementHash {
  std::size_t operator()(const GroupElement &x) const { return hash_value(x); }
};

/**
 * A concrete finitely generated group with exact element arithmetic:
 * a finite direct product of Z^k, Z/n, F_k and H3 factors.
 *
 * Descriptors parse from text: "Z", "Z^2", "Z/5" (or "Z5"), "F2", "H3",
 * and products such as "Z x Z/3".
 */
class Group {
public:
  Group() = default;
  explicit Group(std::vector<Factor> factors);

  static Group parse(std::string_view text);
  std::string to_string() const;

  const std::vector<Factor> &factors() const { return factors_; }

  GroupElement identity() const;
  bool is_identity(const GroupElement &x) const;

  GroupElement multiply(const GroupElement &x, const GroupElement &y) const;
  GroupElement inverse(const GroupElement &x) const;

  int generator_count() const;
  GroupElement generator(int index) const; // 0-based, embedded in the product
  std::vector<std::string> generator_labels() const;

  /// Left-to-right product of cited generators. Letters are signed 1-based
  /// generator indices: +i is generator i, -i its inverse.
  GroupElement evaluate_word(std::span<const int> word) const;

  /// Exact word norm w.r.t. the standard generators when a closed form
  /// exists (L1 for Z^k, min(r, n-r) for Z/n, word length for F_k, sums over
  /// product factors). H3 factors have no closed form and yield nullopt.
  bool closed_form_available() const;
  std::optional<Int> closed_form_norm(const GroupElement &x) const;

  /// Exponent sums of each generator in x after abelianization.
  std::vector<Int> abelianized_exponents(const GroupElement &x) const;

  /// Some word (signed 1-based letters) evaluating to x. Not geodesic.
  std::vector<int> decompose(const GroupElement &x) const;

  /// Throws if x does not have the shape of an element of this group.
  void validate(const GroupElement &x) const;

  nlohmann::json element_to_json(const GroupElement &x) const;
  GroupElement element_from_json(const nlohmann::json &j) const;

  /// Compact single-token form, safe inside CSV fields: "5", "(0 0 1)",
  /// "[1 -2]", product factors joined by "|".
  std::string element_compact(const GroupElement &x) const;

  /// Flat integer encoding, used as hash keys by the search layers.
  void encode(const GroupElement &x, std::vector<Int> &out) const;
  GroupElement decode(std::span<const Int> data, std::size_t &pos) const;

  bool operator==(const Group &) const = default;

private:
  std::vector<Factor> factors_;
};

/// Ordered generators with unique display labels; inverses are implicit.
struct GeneratingSet {
  std::vector<GroupElement> elements;
  std::vector<std::string> labels;

  static GeneratingSet standard(const Group &group);

  int size() const { return static_cast<int>(elements.size()); }
  bool operator==(const GeneratingSet &) const = default;
};

} // namespace wreath
