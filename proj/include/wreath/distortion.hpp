#pragma once

#include <functional>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include <json.hpp>

#include "wreath/metric.hpp"
#include "wreath/wreath.hpp"

namespace wreath {

/// The two kinds of groups the distortion lab measures against each other.
using Universe = std::variant<Group, Wreath>;
using UElement = std::variant<GroupElement, WreathElement>;

UElement u_identity(const Universe &u);
bool u_is_identity(const Universe &u, const UElement &x);
UElement u_multiply(const Universe &u, const UElement &x, const UElement &y);
UElement u_inverse(const Universe &u, const UElement &x);
int u_generator_count(const Universe &u);
UElement u_generator(const Universe &u, int index);
void u_encode(const Universe &u, const UElement &x, std::vector<Int> &out);
std::string u_compact(const Universe &u, const UElement &x);
nlohmann::json u_to_json(const Universe &u, const UElement &x);
std::string u_describe(const Universe &u);

/**
 * A finitely generated subgroup H of an ambient group G, given by one
 * ambient image per H-generator. Subgroup elements are represented
 * abstractly (in the declared subgroup universe) and evaluated into G by
 * multiplying generator images; the table search verifies along the way
 * that this is well defined (a homomorphism).
 *
 * `member`, when set, must return true for every element of the image of H
 * (supersets are fine); it can never wrongly return false. It powers the
 * truncation certification of distortion tables.
 */
struct SubgroupEmbedding {
  Universe subgroup;
  Universe ambient;
  std::vector<UElement> generator_images;
  std::function<bool(const UElement &)> member;
  std::string member_name; // registry name, "" when absent
};

/// Registry of named membership tests ("even", "central", "even-lamps",
/// "cursor-only", "central-wreath", "none").
std::function<bool(const UElement &)>
member_predicate(const std::string &name, const Universe &ambient);

/// Subgroup of a plain or wreath ambient group, generators given directly.
SubgroupEmbedding embed_with_images(Universe subgroup, Universe ambient,
                                    std::vector<UElement> images,
                                    const std::string &member_name = "");

/// A' wr B' inside A wr B: lamp-subgroup generators as words in A's
/// generators, base-subgroup generators as words in B's. The subgroup
/// universe is the abstract wreath product A' wr B'.
SubgroupEmbedding embed_subwreath(const Wreath &ambient, Group lamp_subgroup,
                                  const std::vector<std::vector<int>> &lamp_words,
                                  Group base_subgroup,
                                  const std::vector<std::vector<int>> &base_words,
                                  const std::string &member_name = "");

/// How ambient values of subgroup elements are measured.
struct AmbientMetric {
  enum class Kind { Exact, Estimate };
  Kind kind = Kind::Exact;
  EstimateConfig estimate; // used when kind == Estimate (wreath ambient only)

  std::string name() const;
  static AmbientMetric from_json(const nlohmann::json &j);
};

struct DistortionConfig {
  Int n_max = 10;
  Int h_radius = 10;
  AmbientMetric ambient;
  EngineOptions engine;
  bool certify = true; // try to prove rows untruncated via ambient enumeration
};

struct DistortionRow {
  Int n = 0;
  Int delta = 0;
  std::string witness;     // compact form of a maximizing subgroup element
  std::string metric_kind; // "exact" or "estimate:k"
  bool truncated = false;  // the ball radius may hide larger witnesses
};

struct DistortionTable {
  std::vector<DistortionRow> rows; // rows[n] for n = 0..n_max
  std::string subgroup_desc;
  std::string ambient_desc;
  std::string member_name;
  Int h_radius = 0;
  bool subgroup_exhausted = false; // the whole subgroup fit inside h_radius
  // Ambient members found outside the subgroup ball (value, element).
  std::vector<std::pair<Int, std::string>> hidden;

  std::string csv(bool plot_only = false) const;
  nlohmann::json to_json() const;
};

/**
 * Builds the distortion table Delta(n) = max subgroup length among subgroup
 * elements of ambient value <= n, for n = 0..n_max: enumerates the subgroup
 * ball to h_radius by BFS in the subgroup generators, measures each element
 * on the ambient side, and certifies rows as untruncated where possible.
 *
 * Rows stay flagged "truncated" unless either the subgroup was exhausted,
 * or (exact ambient metric + membership test) an enumeration of the ambient
 * ball shows no subgroup member outside the explored ball at that value.
 * Throws InvariantViolation if the generator images fail to define a
 * homomorphism on the explored ball.
 */
DistortionTable distortion_table(const SubgroupEmbedding &embedding,
                                 const DistortionConfig &config);

struct PowerProfileRow {
  Int n = 0;
  Int support_size = 0;
  Int cursor_norm = 0;
  Int estimate = 0;
};

/// Support size, cursor norm and estimate of x^n for n = 1..count.
std::vector<PowerProfileRow> cyclic_power_profile(const MetricEngine &engine,
                                                  const WreathElement &x,
                                                  Int count,
                                                  const EstimateConfig &config);

struct CyclicClassification {
  enum class Kind { FinalTorsion, SupportStabilizes, NonStabilizing };

  Kind kind = Kind::NonStabilizing;
  Int torsion_period = 0; // FinalTorsion: least m with cursor^m = e
  Int stabilized_at = 0;  // SupportStabilizes: first n of the stable run
  Int stable_size = 0;
  bool finite_window = true; // always set: the detector is a finite heuristic
  std::string regime;

  std::string kind_name() const;
};

/// Inspects cursor torsion and the support sizes of x^n for n <= window to
/// sort x into one of three growth regimes. The verdict is a finite-window
/// heuristic: the underlying condition is asymptotic.
CyclicClassification classify_cyclic(const MetricEngine &engine,
                                     const WreathElement &x, Int window);

struct SuperadditivityReport {
  bool superadditive_on_sample = true;
  // (x, y, f(x) + f(y), f(x + y)) for each violated pair
  std::vector<std::tuple<Int, Int, Int, Int>> violations;
};

/// Checks f(x+y) >= f(x) + f(y) on all pairs with x, y >= 1 and x+y in
/// range. Advisory: a finite table cannot certify superadditivity.
SuperadditivityReport superadditivity_probe(std::span<const Int> f);
SuperadditivityReport superadditivity_probe(const DistortionTable &table);

/// Parses an embedding description:
///   {"kind":"plain","ambient":"H3","subgroup":"Z","gen_words":[[1,2,-1,-2]]}
///   {"kind":"in-wreath","ambient":"Z2 wr Z","subgroup":"Z","gen_words":["t"]}
///   {"kind":"subwreath","ambient":"Z wr Z","lamp_subgroup":"Z",
///    "lamp_words":[[1,1]],"base_subgroup":"Z","base_words":[[1]]}
/// each with an optional "member" registry name.
SubgroupEmbedding embedding_from_json(const nlohmann::json &j);

} // namespace wreath
