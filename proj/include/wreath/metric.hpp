#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wreath/ball.hpp"
#include "wreath/point_metric.hpp"
#include "wreath/wreath.hpp"

namespace wreath {

struct IntVecHash {
  std::size_t operator()(const std::vector<Int> &v) const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (Int x : v)
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) +
           (h >> 2);
    return h;
  }
};

/// Where a factor metric comes from: the exact word norm, or a declared
/// surrogate E(x) = mult * ||x|| + add (0 at the identity) standing in for a
/// user-supplied estimate with equivalence constants (mult, add).
struct MetricSource {
  enum class Kind { Exact, Scaled };

  Kind kind = Kind::Exact;
  Int mult = 1;
  Int add = 0;

  Int apply(Int exact_norm) const {
    if (kind == Kind::Exact || exact_norm == 0)
      return exact_norm;
    return mult * exact_norm + add;
  }

  static MetricSource exact() { return {}; }
  static MetricSource scaled(Int mult, Int add) {
    return {Kind::Scaled, mult, add};
  }

  static MetricSource from_json(const nlohmann::json &j);
  nlohmann::json to_json() const;
};

/// Selects one of the seven estimate formulas. Writing S = sum over the
/// support, a_i the lamp values, mu / mu_hat the spanning-tree weights over
/// {e, positions, cursor} with exact / estimated base distances, tau the
/// exact path length, and E_B the base source applied to the cursor:
///   1: S ||a_i||      + mu
///   2: S E_A(a_i)     + tau        (the only variant that can throw TooLarge)
///   3: S E_A(a_i)     + mu
///   4: S ||a_i||      + mu_hat
///   5: S E_A(a_i)     + mu_hat
///   6: S ||a_i||      + mu         + E_B(cursor)
///   7: S E_A(a_i)     + mu_hat     + E_B(cursor)
struct EstimateConfig {
  int variant = 1;
  MetricSource source_a;
  MetricSource source_b;

  static EstimateConfig from_json(const nlohmann::json &j);
  nlohmann::json to_json() const;
};

struct EngineOptions {
  int tsp_cap = kDefaultTspCap;
  Int norm_cap = 64;       // BFS budget for factor norms
  SearchLimits limits = {};
  std::string cache_dir;   // persist factor norm tables here when nonempty
};

/**
 * Word-metric computations on a regular wreath product: the exact norm
 * (lamp costs plus an exact visiting path), the estimate family, and a BFS
 * oracle over the wreath group itself for validation. Factor norms are
 * cached; nullopt means a factor BFS hit its cap ("unreachable").
 */
class MetricEngine {
public:
  explicit MetricEngine(Wreath w, EngineOptions options = {});

  const Wreath &wreath() const { return w_; }
  const EngineOptions &options() const { return options_; }

  std::optional<Int> lamp_norm(const GroupElement &a) const;
  std::optional<Int> base_norm(const GroupElement &b) const;

  /// Sum of exact lamp norms plus the exact path length from the identity
  /// through every support position to the cursor.
  std::optional<Int> exact_norm(const WreathElement &x) const;

  std::optional<Int> estimate(const WreathElement &x,
                              const EstimateConfig &config) const;

  /// Exact word length of x over the embedded standard generators, by BFS
  /// over wreath elements. nullopt when the norm exceeds cap.
  std::optional<Int> bfs_norm(const WreathElement &x, Int cap) const;

  /// Streams every element of word length <= radius with its exact length,
  /// in deterministic BFS order.
  void for_each_ball_element(
      Int radius,
      const std::function<void(const WreathElement &, Int)> &visit) const;

  std::vector<std::pair<WreathElement, Int>> ball(Int radius) const;

  /// Saves the factor norm tables to options().cache_dir, if set.
  void persist_caches() const;

private:
  struct TourPoints; // positions of {e} + support + cursor, deduplicated

  TourPoints tour_points(const WreathElement &x) const;
  std::optional<PointMetric> base_point_metric(const TourPoints &points,
                                               const MetricSource &src) const;

  Wreath w_;
  EngineOptions options_;
  mutable NormCache lamp_norms_;
  mutable NormCache base_norms_;
};

/// CSV export of estimate evaluations: one row per element,
/// "id,variant,value,exact,ratio" with ratio = exact / value to 4 places.
std::string estimate_csv(const MetricEngine &engine,
                         std::span<const WreathElement> elements,
                         const EstimateConfig &config);

/// Smallest C >= 1 (with the given fixed additive slack D) such that
/// g/C - D <= f <= C g + D across the whole sample of (f, g) pairs.
/// `witness` is the index of a pair forcing C. Unbounded fits (g > 0 against
/// f stuck at 0 with D = 0) report bounded = false.
struct FitResult {
  double C = 1.0;
  Int D = 0;
  bool bounded = true;
  std::size_t witness = 0;
};

FitResult
fit_equivalence_constants(std::span<const std::pair<Int, Int>> sample,
                          Int additive_slack = 2);

} // namespace wreath
