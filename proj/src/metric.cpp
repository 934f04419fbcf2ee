#include "wreath/metric.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <unordered_map>

namespace wreath {

MetricSource MetricSource::from_json(const nlohmann::json &j) {
  if (j.is_string() && j.get<std::string>() == "exact")
    return exact();
  if (j.is_object()) {
    std::string kind = j.value("kind", "exact");
    if (kind == "exact")
      return exact();
    if (kind == "scaled")
      return scaled(j.value("mult", Int{1}), j.value("add", Int{0}));
  }
  throw ParseError("metric source must be \"exact\" or "
                   "{\"kind\":\"scaled\",\"mult\":...,\"add\":...}");
}

nlohmann::json MetricSource::to_json() const {
  if (kind == Kind::Exact)
    return "exact";
  return nlohmann::json{{"kind", "scaled"}, {"mult", mult}, {"add", add}};
}

EstimateConfig EstimateConfig::from_json(const nlohmann::json &j) {
  EstimateConfig config;
  config.variant = j.value("variant", 1);
  if (config.variant < 1 || config.variant > 7)
    throw ParseError("estimate variant must be in 1..7");
  if (j.contains("source_a"))
    config.source_a = MetricSource::from_json(j.at("source_a"));
  if (j.contains("source_b"))
    config.source_b = MetricSource::from_json(j.at("source_b"));
  return config;
}

nlohmann::json EstimateConfig::to_json() const {
  return nlohmann::json{{"variant", variant},
                        {"source_a", source_a.to_json()},
                        {"source_b", source_b.to_json()}};
}

MetricEngine::MetricEngine(Wreath w, EngineOptions options)
    : w_(std::move(w)), options_(options),
      lamp_norms_(w_.lamp_group(), GeneratingSet::standard(w_.lamp_group()),
                  options.limits),
      base_norms_(w_.base_group(), GeneratingSet::standard(w_.base_group()),
                  options.limits) {
  if (!options_.cache_dir.empty()) {
    lamp_norms_.try_load(options_.cache_dir);
    base_norms_.try_load(options_.cache_dir);
  }
}

void MetricEngine::persist_caches() const {
  if (options_.cache_dir.empty())
    return;
  lamp_norms_.save(options_.cache_dir);
  base_norms_.save(options_.cache_dir);
}

std::optional<Int> MetricEngine::lamp_norm(const GroupElement &a) const {
  return lamp_norms_.norm(a, options_.norm_cap);
}

std::optional<Int> MetricEngine::base_norm(const GroupElement &b) const {
  return base_norms_.norm(b, options_.norm_cap);
}

struct MetricEngine::TourPoints {
  std::vector<GroupElement> points; // points[0] is the identity
  int cursor_index = 0;
};

MetricEngine::TourPoints MetricEngine::tour_points(const WreathElement &x) const {
  TourPoints tp;
  tp.points.push_back(w_.base_group().identity());
  auto index_of = [&tp](const GroupElement &p) -> int {
    for (std::size_t i = 0; i < tp.points.size(); ++i)
      if (tp.points[i] == p)
        return static_cast<int>(i);
    tp.points.push_back(p);
    return static_cast<int>(tp.points.size()) - 1;
  };
  for (const auto &[position, value] : x.support)
    index_of(position);
  tp.cursor_index = index_of(x.cursor);
  return tp;
}

std::optional<PointMetric>
MetricEngine::base_point_metric(const TourPoints &tp,
                                const MetricSource &src) const {
  const Group &base = w_.base_group();
  const std::size_t n = tp.points.size();
  std::vector<Int> dist(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      auto d = base_norms_.norm(
          base.multiply(base.inverse(tp.points[i]), tp.points[j]),
          options_.norm_cap);
      if (!d)
        return std::nullopt;
      Int w = src.apply(*d);
      dist[i * n + j] = w;
      dist[j * n + i] = w;
    }
  return PointMetric(static_cast<int>(n), std::move(dist));
}

std::optional<Int> MetricEngine::exact_norm(const WreathElement &x) const {
  Int lamp_sum = 0;
  for (const auto &[position, value] : x.support) {
    auto n = lamp_norm(value);
    if (!n)
      return std::nullopt;
    lamp_sum += *n;
  }
  TourPoints tp = tour_points(x);
  auto pm = base_point_metric(tp, MetricSource::exact());
  if (!pm)
    return std::nullopt;
  return lamp_sum + tsp_path_length(*pm, 0, tp.cursor_index, options_.tsp_cap);
}

std::optional<Int> MetricEngine::estimate(const WreathElement &x,
                                          const EstimateConfig &config) const {
  Int exact_a = 0;
  Int est_a = 0;
  for (const auto &[position, value] : x.support) {
    auto n = lamp_norm(value);
    if (!n)
      return std::nullopt;
    exact_a += *n;
    est_a += config.source_a.apply(*n);
  }

  TourPoints tp = tour_points(x);

  auto mu = [&]() -> std::optional<Int> {
    auto pm = base_point_metric(tp, MetricSource::exact());
    if (!pm)
      return std::nullopt;
    return mst_weight(*pm);
  };
  auto mu_hat = [&]() -> std::optional<Int> {
    auto pm = base_point_metric(tp, config.source_b);
    if (!pm)
      return std::nullopt;
    return mst_weight(*pm);
  };
  auto eb = [&]() -> std::optional<Int> {
    auto n = base_norm(x.cursor);
    if (!n)
      return std::nullopt;
    return config.source_b.apply(*n);
  };

  std::optional<Int> tree, cursor_term;
  switch (config.variant) {
  case 1:
    tree = mu();
    if (!tree)
      return std::nullopt;
    return exact_a + *tree;
  case 2: {
    auto pm = base_point_metric(tp, MetricSource::exact());
    if (!pm)
      return std::nullopt;
    return est_a + tsp_path_length(*pm, 0, tp.cursor_index, options_.tsp_cap);
  }
  case 3:
    tree = mu();
    if (!tree)
      return std::nullopt;
    return est_a + *tree;
  case 4:
    tree = mu_hat();
    if (!tree)
      return std::nullopt;
    return exact_a + *tree;
  case 5:
    tree = mu_hat();
    if (!tree)
      return std::nullopt;
    return est_a + *tree;
  case 6:
    tree = mu();
    cursor_term = eb();
    if (!tree || !cursor_term)
      return std::nullopt;
    return exact_a + *tree + *cursor_term;
  case 7:
    tree = mu_hat();
    cursor_term = eb();
    if (!tree || !cursor_term)
      return std::nullopt;
    return est_a + *tree + *cursor_term;
  default:
    throw std::invalid_argument("estimate variant must be in 1..7");
  }
}

namespace {

std::vector<WreathElement> wreath_steps(const Wreath &w) {
  std::vector<WreathElement> steps;
  const Group &lamp = w.lamp_group();
  const Group &base = w.base_group();
  for (int i = 0; i < lamp.generator_count(); ++i) {
    GroupElement g = lamp.generator(i);
    steps.push_back(w.lamp_at(base.identity(), g));
    GroupElement inv = lamp.inverse(g);
    if (!(inv == g))
      steps.push_back(w.lamp_at(base.identity(), inv));
  }
  for (int i = 0; i < base.generator_count(); ++i) {
    GroupElement g = base.generator(i);
    GroupElement inv = base.inverse(g);
    steps.push_back(w.from_cursor(g));
    if (!(inv == g))
      steps.push_back(w.from_cursor(std::move(inv)));
  }
  return steps;
}

} // namespace

std::optional<Int> MetricEngine::bfs_norm(const WreathElement &x,
                                          Int cap) const {
  if (w_.is_identity(x))
    return 0;
  std::vector<WreathElement> steps = wreath_steps(w_);
  std::vector<Int> target_key;
  w_.encode(x, target_key);

  std::unordered_map<std::vector<Int>, Int, IntVecHash> seen;
  std::deque<std::vector<Int>> queue;
  std::vector<Int> key;
  w_.encode(w_.identity(), key);
  seen.emplace(key, 0);
  queue.push_back(std::move(key));

  Int depth = 0;
  std::size_t layer_remaining = 1;
  std::size_t next_layer = 0;
  while (!queue.empty() && depth < cap) {
    std::vector<Int> current_key = std::move(queue.front());
    queue.pop_front();
    std::size_t pos = 0;
    WreathElement current = w_.decode(current_key, pos);
    for (const WreathElement &g : steps) {
      WreathElement next = w_.multiply(current, g);
      std::vector<Int> next_key;
      w_.encode(next, next_key);
      if (next_key == target_key)
        return depth + 1;
      if (seen.emplace(next_key, depth + 1).second) {
        if (seen.size() > options_.limits.max_states)
          throw ResourceLimit("wreath BFS exceeded its state budget",
                              seen.size());
        queue.push_back(std::move(next_key));
        ++next_layer;
      }
    }
    if (--layer_remaining == 0) {
      ++depth;
      layer_remaining = next_layer;
      next_layer = 0;
    }
  }
  return std::nullopt;
}

void MetricEngine::for_each_ball_element(
    Int radius,
    const std::function<void(const WreathElement &, Int)> &visit) const {
  std::vector<WreathElement> steps = wreath_steps(w_);

  std::unordered_map<std::vector<Int>, Int, IntVecHash> seen;
  std::deque<std::vector<Int>> queue;
  std::vector<Int> key;
  w_.encode(w_.identity(), key);
  seen.emplace(key, 0);
  visit(w_.identity(), 0);
  queue.push_back(std::move(key));

  Int depth = 0;
  std::size_t layer_remaining = 1;
  std::size_t next_layer = 0;
  while (!queue.empty() && depth < radius) {
    std::vector<Int> current_key = std::move(queue.front());
    queue.pop_front();
    std::size_t pos = 0;
    WreathElement current = w_.decode(current_key, pos);
    for (const WreathElement &g : steps) {
      WreathElement next = w_.multiply(current, g);
      std::vector<Int> next_key;
      w_.encode(next, next_key);
      if (seen.emplace(next_key, depth + 1).second) {
        if (seen.size() > options_.limits.max_states)
          throw ResourceLimit("wreath ball exceeded its state budget",
                              seen.size());
        visit(next, depth + 1);
        queue.push_back(std::move(next_key));
        ++next_layer;
      }
    }
    if (--layer_remaining == 0) {
      ++depth;
      layer_remaining = next_layer;
      next_layer = 0;
    }
  }
}

std::vector<std::pair<WreathElement, Int>>
MetricEngine::ball(Int radius) const {
  std::vector<std::pair<WreathElement, Int>> out;
  for_each_ball_element(radius, [&out](const WreathElement &x, Int d) {
    out.emplace_back(x, d);
  });
  return out;
}

std::string estimate_csv(const MetricEngine &engine,
                         std::span<const WreathElement> elements,
                         const EstimateConfig &config) {
  std::string out = "id,variant,value,exact,ratio\n";
  char buf[64];
  for (const WreathElement &x : elements) {
    auto value = engine.estimate(x, config);
    auto exact = engine.exact_norm(x);
    out += engine.wreath().element_compact(x);
    out += "," + std::to_string(config.variant);
    out += value ? "," + std::to_string(*value) : ",unreachable";
    out += exact ? "," + std::to_string(*exact) : ",unreachable";
    if (value && exact && *value != 0) {
      snprintf(buf, sizeof(buf), ",%.4f",
               static_cast<double>(*exact) / static_cast<double>(*value));
      out += buf;
    } else if (value && exact) {
      out += *exact == 0 ? ",1.0000" : ",inf";
    } else {
      out += ",";
    }
    out += "\n";
  }
  return out;
}

FitResult
fit_equivalence_constants(std::span<const std::pair<Int, Int>> sample,
                          Int additive_slack) {
  if (sample.empty())
    throw std::invalid_argument("fit needs a nonempty sample");
  FitResult r;
  r.D = additive_slack;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    auto [f, g] = sample[i];
    if (f < 0 || g < 0)
      throw std::invalid_argument("fit values must be nonnegative");
    // f <= C g + D
    if (f > additive_slack) {
      if (g == 0) {
        r.bounded = false;
        r.witness = i;
        continue;
      }
      double need = static_cast<double>(f - additive_slack) /
                    static_cast<double>(g);
      if (need > r.C) {
        r.C = need;
        r.witness = i;
      }
    }
    // g / C - D <= f
    if (g > 0) {
      if (f + additive_slack == 0) {
        r.bounded = false;
        r.witness = i;
        continue;
      }
      double need = static_cast<double>(g) /
                    static_cast<double>(f + additive_slack);
      if (need > r.C) {
        r.C = need;
        r.witness = i;
      }
    }
  }
  return r;
}

} // namespace wreath
