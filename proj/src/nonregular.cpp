#include "wreath/nonregular.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace wreath {

std::size_t hash_value(const NonregularElement &x) {
  std::size_t h = 0x9e3779b97f4a7c15ull;
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (const auto &[point, value] : x.support) {
    mix(hash_value(point));
    mix(hash_value(value));
  }
  mix(hash_value(x.cursor));
  return h;
}

NonregularWreath::NonregularWreath(Group lamp, OmegaAction action)
    : lamp_(std::move(lamp)), action_(std::move(action)) {}

NonregularElement NonregularWreath::identity() const {
  return NonregularElement{{}, base_group().identity()};
}

bool NonregularWreath::is_identity(const NonregularElement &x) const {
  return x.support.empty() && base_group().is_identity(x.cursor);
}

NonregularElement
NonregularWreath::make(std::vector<std::pair<OmegaPoint, GroupElement>> support,
                       GroupElement cursor) const {
  std::sort(support.begin(), support.end(), [](const auto &a, const auto &b) {
    return compare(a.first, b.first) < 0;
  });
  std::vector<std::pair<OmegaPoint, GroupElement>> merged;
  merged.reserve(support.size());
  for (auto &entry : support) {
    if (!merged.empty() && merged.back().first == entry.first)
      merged.back().second = lamp_.multiply(merged.back().second, entry.second);
    else
      merged.push_back(std::move(entry));
  }
  std::erase_if(merged, [this](const auto &e) {
    return lamp_.is_identity(e.second);
  });
  return NonregularElement{std::move(merged), std::move(cursor)};
}

NonregularElement NonregularWreath::lamp_at(const OmegaPoint &point,
                                            const GroupElement &value) const {
  return make({{point, value}}, base_group().identity());
}

NonregularElement NonregularWreath::from_cursor(GroupElement cursor) const {
  return NonregularElement{{}, std::move(cursor)};
}

OmegaPoint NonregularWreath::pointer(int orbit,
                                     const GroupElement &cursor) const {
  return action_.act(cursor, action_.basepoint(orbit));
}

NonregularElement
NonregularWreath::multiply(const NonregularElement &x,
                           const NonregularElement &y) const {
  std::vector<std::pair<OmegaPoint, GroupElement>> support = x.support;
  support.reserve(x.support.size() + y.support.size());
  for (const auto &[point, value] : y.support)
    support.emplace_back(action_.act(x.cursor, point), value);
  return make(std::move(support), base_group().multiply(x.cursor, y.cursor));
}

NonregularElement
NonregularWreath::inverse(const NonregularElement &x) const {
  GroupElement cursor_inv = base_group().inverse(x.cursor);
  std::vector<std::pair<OmegaPoint, GroupElement>> support;
  support.reserve(x.support.size());
  for (const auto &[point, value] : x.support)
    support.emplace_back(action_.act(cursor_inv, point),
                         lamp_.inverse(value));
  return make(std::move(support), std::move(cursor_inv));
}

NonregularElement NonregularWreath::power(const NonregularElement &x,
                                          Int n) const {
  NonregularElement base = n < 0 ? inverse(x) : x;
  NonregularElement acc = identity();
  for (Int i = 0; i < std::llabs(n); ++i)
    acc = multiply(acc, base);
  return acc;
}

NonregularElement
NonregularWreath::evaluate(std::span<const NonregularLetter> word) const {
  NonregularElement acc = identity();
  for (const NonregularLetter &letter : word) {
    if (letter.sign != 1 && letter.sign != -1)
      throw ParseError("letter sign must be +1 or -1");
    if (letter.lamp) {
      if (letter.orbit < 0 || letter.orbit >= orbit_count())
        throw std::out_of_range("orbit tag out of range");
      if (letter.index < 0 || letter.index >= lamp_.generator_count())
        throw std::out_of_range("lamp generator index out of range");
      GroupElement g = lamp_.generator(letter.index);
      if (letter.sign < 0)
        g = lamp_.inverse(g);
      acc = multiply(acc, lamp_at(action_.basepoint(letter.orbit), g));
    } else {
      if (letter.index < 0 || letter.index >= base_group().generator_count())
        throw std::out_of_range("base generator index out of range");
      GroupElement g = base_group().generator(letter.index);
      if (letter.sign < 0)
        g = base_group().inverse(g);
      acc = multiply(acc, from_cursor(std::move(g)));
    }
  }
  return acc;
}

nlohmann::json
NonregularWreath::element_to_json(const NonregularElement &x) const {
  nlohmann::json support = nlohmann::json::array();
  for (const auto &[point, value] : x.support)
    support.push_back(
        {action_.point_to_json(point), lamp_.element_to_json(value)});
  return nlohmann::json{{"support", std::move(support)},
                        {"cursor", base_group().element_to_json(x.cursor)}};
}

NonregularElement
NonregularWreath::element_from_json(const nlohmann::json &j) const {
  if (!j.is_object() || !j.contains("support") || !j.contains("cursor"))
    throw ParseError("element JSON needs 'support' and 'cursor'");
  std::vector<std::pair<OmegaPoint, GroupElement>> support;
  for (const auto &entry : j.at("support")) {
    if (!entry.is_array() || entry.size() != 2)
      throw ParseError("support entries are [point, value] pairs");
    support.emplace_back(action_.point_from_json(entry[0]),
                         lamp_.element_from_json(entry[1]));
  }
  return make(std::move(support),
              base_group().element_from_json(j.at("cursor")));
}

std::string
NonregularWreath::element_compact(const NonregularElement &x) const {
  std::string out;
  for (const auto &[point, value] : x.support) {
    out += "{";
    out += action_.point_compact(point);
    out += ":";
    out += lamp_.element_compact(value);
    out += "}";
  }
  out += "@";
  out += base_group().element_compact(x.cursor);
  return out;
}

void NonregularWreath::encode(const NonregularElement &x,
                              std::vector<Int> &out) const {
  out.push_back(x.support_size());
  for (const auto &[point, value] : x.support) {
    action_.encode(point, out);
    lamp_.encode(value, out);
  }
  base_group().encode(x.cursor, out);
}

NonregularElement NonregularWreath::decode(std::span<const Int> data,
                                           std::size_t &pos) const {
  NonregularElement x;
  Int s = data[pos++];
  x.support.reserve(s);
  for (Int i = 0; i < s; ++i) {
    OmegaPoint point = action_.decode(data, pos);
    GroupElement value = lamp_.decode(data, pos);
    x.support.emplace_back(std::move(point), std::move(value));
  }
  x.cursor = base_group().decode(data, pos);
  return x;
}

NonregularMetric::NonregularMetric(NonregularWreath w, EngineOptions options)
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

void NonregularMetric::persist_caches() const {
  if (options_.cache_dir.empty())
    return;
  lamp_norms_.save(options_.cache_dir);
  base_norms_.save(options_.cache_dir);
}

std::optional<Int> NonregularMetric::lamp_norm(const GroupElement &a) const {
  return lamp_norms_.norm(a, options_.norm_cap);
}

std::optional<Int> NonregularMetric::base_norm(const GroupElement &b) const {
  return base_norms_.norm(b, options_.norm_cap);
}

std::optional<Int>
NonregularMetric::orbit_tree_weight(const NonregularElement &x,
                                    int orbit) const {
  const OmegaAction &action = w_.action();
  std::vector<OmegaPoint> points{action.basepoint(orbit)};
  auto add = [&points](const OmegaPoint &p) {
    for (const OmegaPoint &q : points)
      if (q == p)
        return;
    points.push_back(p);
  };
  for (const auto &[point, value] : x.support)
    if (action.orbit_of(point) == orbit)
      add(point);
  add(w_.pointer(orbit, x.cursor));

  const std::size_t n = points.size();
  std::vector<Int> dist(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      auto d = action.schreier_distance(points[i], points[j],
                                        options_.norm_cap);
      if (!d)
        return std::nullopt;
      dist[i * n + j] = *d;
      dist[j * n + i] = *d;
    }
  return mst_weight(PointMetric(static_cast<int>(n), std::move(dist)));
}

std::optional<Int>
NonregularMetric::estimate(const NonregularElement &x) const {
  Int total = 0;
  for (const auto &[point, value] : x.support) {
    auto n = lamp_norm(value);
    if (!n)
      return std::nullopt;
    total += *n;
  }
  for (int orbit = 0; orbit < w_.orbit_count(); ++orbit) {
    auto mu = orbit_tree_weight(x, orbit);
    if (!mu)
      return std::nullopt;
    total += *mu;
  }
  auto cursor = base_norm(x.cursor);
  if (!cursor)
    return std::nullopt;
  return total + *cursor;
}

namespace {

std::vector<NonregularElement> nonregular_steps(const NonregularWreath &w) {
  std::vector<NonregularElement> steps;
  const Group &lamp = w.lamp_group();
  const Group &base = w.base_group();
  for (int orbit = 0; orbit < w.orbit_count(); ++orbit)
    for (int i = 0; i < lamp.generator_count(); ++i) {
      GroupElement g = lamp.generator(i);
      steps.push_back(w.lamp_at(w.action().basepoint(orbit), g));
      GroupElement inv = lamp.inverse(g);
      if (!(inv == g))
        steps.push_back(w.lamp_at(w.action().basepoint(orbit), inv));
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

std::optional<Int> NonregularMetric::bfs_norm(const NonregularElement &x,
                                              Int cap) const {
  if (w_.is_identity(x))
    return 0;
  std::vector<NonregularElement> steps = nonregular_steps(w_);
  std::vector<Int> target_key;
  w_.encode(x, target_key);

  std::unordered_map<std::vector<Int>, Int, IntVecHash> seen;
  std::deque<std::vector<Int>> queue;
  std::vector<Int> key;
  w_.encode(w_.identity(), key);
  seen.emplace(key, 0);
  queue.push_back(std::move(key));

  Int depth = 0;
  std::size_t layer = 1, next_layer = 0;
  while (!queue.empty() && depth < cap) {
    std::vector<Int> current_key = std::move(queue.front());
    queue.pop_front();
    std::size_t pos = 0;
    NonregularElement current = w_.decode(current_key, pos);
    for (const NonregularElement &g : steps) {
      NonregularElement next = w_.multiply(current, g);
      std::vector<Int> next_key;
      w_.encode(next, next_key);
      if (next_key == target_key)
        return depth + 1;
      if (seen.emplace(next_key, depth + 1).second) {
        if (seen.size() > options_.limits.max_states)
          throw ResourceLimit("nonregular BFS exceeded its state budget",
                              seen.size());
        queue.push_back(std::move(next_key));
        ++next_layer;
      }
    }
    if (--layer == 0) {
      ++depth;
      layer = next_layer;
      next_layer = 0;
    }
  }
  return std::nullopt;
}

void NonregularMetric::for_each_ball_element(
    Int radius,
    const std::function<void(const NonregularElement &, Int)> &visit) const {
  std::vector<NonregularElement> steps = nonregular_steps(w_);

  std::unordered_map<std::vector<Int>, Int, IntVecHash> seen;
  std::deque<std::vector<Int>> queue;
  std::vector<Int> key;
  w_.encode(w_.identity(), key);
  seen.emplace(key, 0);
  visit(w_.identity(), 0);
  queue.push_back(std::move(key));

  Int depth = 0;
  std::size_t layer = 1, next_layer = 0;
  while (!queue.empty() && depth < radius) {
    std::vector<Int> current_key = std::move(queue.front());
    queue.pop_front();
    std::size_t pos = 0;
    NonregularElement current = w_.decode(current_key, pos);
    for (const NonregularElement &g : steps) {
      NonregularElement next = w_.multiply(current, g);
      std::vector<Int> next_key;
      w_.encode(next, next_key);
      if (seen.emplace(next_key, depth + 1).second) {
        if (seen.size() > options_.limits.max_states)
          throw ResourceLimit("nonregular ball exceeded its state budget",
                              seen.size());
        visit(next, depth + 1);
        queue.push_back(std::move(next_key));
        ++next_layer;
      }
    }
    if (--layer == 0) {
      ++depth;
      layer = next_layer;
      next_layer = 0;
    }
  }
}

std::vector<std::pair<NonregularElement, Int>>
NonregularMetric::ball(Int radius) const {
  std::vector<std::pair<NonregularElement, Int>> out;
  for_each_ball_element(radius, [&out](const NonregularElement &x, Int d) {
    out.emplace_back(x, d);
  });
  return out;
}

std::vector<NonregularLetter> parse_word(const NonregularWreath &w,
                                         std::string_view text) {
  GeneratingSet lamp_gens = lamp_generating_set(w.lamp_group());
  GeneratingSet move_gens = move_generating_set(w.base_group());
  std::vector<NonregularLetter> word;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' ||
                               text[i] == '\n'))
      ++i;
    if (i >= text.size())
      break;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t' &&
           text[j] != '\n')
      ++j;
    std::string token(text.substr(i, j - i));
    i = j;

    NonregularLetter letter;
    if (!token.empty() && token.back() == '-') {
      letter.sign = -1;
      token.pop_back();
    }
    std::string name = token;
    if (std::size_t at = token.find('@'); at != std::string::npos) {
      name = token.substr(0, at);
      std::string tag = token.substr(at + 1);
      if (tag.empty() || tag.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("bad orbit tag in token '" + token + "'");
      letter.orbit = std::stoi(tag) - 1;
      if (letter.orbit < 0 || letter.orbit >= w.orbit_count())
        throw ParseError("orbit tag out of range in token '" + token + "'");
    }
    bool found = false;
    for (int k = 0; k < lamp_gens.size() && !found; ++k)
      if (lamp_gens.labels[k] == name) {
        letter.lamp = true;
        letter.index = k;
        found = true;
      }
    if (!found)
      for (int k = 0; k < move_gens.size() && !found; ++k)
        if (move_gens.labels[k] == name) {
          letter.lamp = false;
          letter.index = k;
          found = true;
        }
    if (!found)
      throw ParseError("unknown word token '" + token + "'");
    if (!letter.lamp && name != token)
      throw ParseError("move generators take no orbit tag: '" + token + "'");
    word.push_back(letter);
  }
  return word;
}

} // namespace wreath
