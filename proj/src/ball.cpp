#include "wreath/ball.hpp"

#include <fstream>

namespace wreath {

namespace {

std::vector<GroupElement> expansion_steps(const Group &group,
                                          const GeneratingSet &gens) {
  std::vector<GroupElement> step;
  step.reserve(gens.elements.size() * 2);
  for (const GroupElement &g : gens.elements) {
    step.push_back(g);
    GroupElement inv = group.inverse(g);
    if (!(inv == g))
      step.push_back(std::move(inv));
  }
  return step;
}

} // namespace

std::vector<BallEntry> ball(const Group &group, const GeneratingSet &gens,
                            Int radius, SearchLimits limits) {
  std::vector<GroupElement> step = expansion_steps(group, gens);
  std::unordered_map<GroupElement, Int, GroupElementHash> dist;
  std::vector<BallEntry> out;

  GroupElement e = group.identity();
  dist.emplace(e, 0);
  out.push_back({e, 0});

  std::size_t layer_begin = 0;
  for (Int d = 1; d <= radius; ++d) {
    std::size_t layer_end = out.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (const GroupElement &g : step) {
        GroupElement next = group.multiply(out[i].element, g);
        if (dist.emplace(next, d).second) {
          if (dist.size() > limits.max_states)
            throw ResourceLimit("ball of " + group.to_string() +
                                    " exceeded its state budget at radius " +
                                    std::to_string(d),
                                dist.size());
          out.push_back({std::move(next), d});
        }
      }
    }
    if (out.size() == layer_end)
      break; // group exhausted
    layer_begin = layer_end;
  }
  return out;
}

std::optional<Int> word_norm(const Group &group, const GeneratingSet &gens,
                             const GroupElement &x, Int cap,
                             SearchLimits limits) {
  NormCache cache(group, gens, limits);
  return cache.norm(x, cap);
}

NormCache::NormCache(Group group, GeneratingSet gens, SearchLimits limits)
    : group_(std::move(group)), gens_(std::move(gens)), limits_(limits) {
  closed_form_ = group_.closed_form_available() &&
                 gens_ == GeneratingSet::standard(group_);
  if (!closed_form_) {
    step_ = expansion_steps(group_, gens_);
    GroupElement e = group_.identity();
    dist_.emplace(e, 0);
    frontier_.push_back(std::move(e));
  }
}

std::optional<Int> NormCache::norm(const GroupElement &x, Int cap) {
  if (closed_form_)
    return group_.closed_form_norm(x);
  auto it = dist_.find(x);
  while (it == dist_.end() && radius_ < cap) {
    grow_to(radius_ + 1);
    it = dist_.find(x);
    if (frontier_.empty())
      break; // group exhausted
  }
  if (it == dist_.end())
    return std::nullopt;
  return it->second;
}

void NormCache::grow_to(Int radius) {
  while (radius_ < radius && !frontier_.empty()) {
    std::deque<GroupElement> next_frontier;
    Int d = radius_ + 1;
    for (const GroupElement &x : frontier_) {
      for (const GroupElement &g : step_) {
        GroupElement next = group_.multiply(x, g);
        if (dist_.emplace(next, d).second) {
          if (dist_.size() > limits_.max_states)
            throw ResourceLimit("norm table of " + group_.to_string() +
                                    " exceeded its state budget at radius " +
                                    std::to_string(d),
                                dist_.size());
          next_frontier.push_back(std::move(next));
        }
      }
    }
    frontier_ = std::move(next_frontier);
    radius_ = d;
  }
}

std::string NormCache::cache_key() const {
  // Stable fingerprint of the group and generating set.
  std::size_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (char c : group_.to_string())
    mix(static_cast<std::size_t>(c));
  for (const GroupElement &g : gens_.elements)
    mix(hash_value(g));
  char buf[17];
  snprintf(buf, sizeof(buf), "%016zx", h);
  return buf;
}

bool NormCache::try_load(const std::string &dir) {
  if (closed_form_)
    return false;
  std::ifstream in(dir + "/norms-" + cache_key() + ".json");
  if (!in)
    return false;
  nlohmann::json j;
  try {
    in >> j;
    Int radius = j.at("radius").get<Int>();
    if (radius <= radius_)
      return false;
    std::unordered_map<GroupElement, Int, GroupElementHash> dist;
    std::deque<GroupElement> frontier;
    for (const auto &entry : j.at("entries")) {
      GroupElement x = group_.element_from_json(entry.at(0));
      Int d = entry.at(1).get<Int>();
      dist.emplace(x, d);
      if (d == radius)
        frontier.push_back(std::move(x));
    }
    dist_ = std::move(dist);
    frontier_ = std::move(frontier);
    radius_ = radius;
    return true;
  } catch (const std::exception &) {
    return false; // corrupt cache files are ignored
  }
}

void NormCache::save(const std::string &dir) const {
  if (closed_form_)
    return;
  nlohmann::json entries = nlohmann::json::array();
  for (const auto &[x, d] : dist_)
    entries.push_back({group_.element_to_json(x), d});
  nlohmann::json j{{"group", group_.to_string()},
                   {"radius", radius_},
                   {"entries", std::move(entries)}};
  std::ofstream out(dir + "/norms-" + cache_key() + ".json");
  if (!out)
    throw std::runtime_error("cannot write norm cache in " + dir);
  out << j;
}

} // namespace wreath
