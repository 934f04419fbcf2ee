#include "wreath/omega.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_map>

namespace wreath {

namespace {

Int positive_mod(Int value, Int modulus) {
  Int r = value % modulus;
  return r < 0 ? r + modulus : r;
}

std::vector<Int> inverse_permutation(const std::vector<Int> &perm) {
  std::vector<Int> inv(perm.size(), -1);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    Int image = perm[i];
    if (image < 0 || image >= static_cast<Int>(perm.size()) ||
        inv[image] != -1)
      throw InvariantViolation("generator action table is not a bijection");
    inv[image] = static_cast<Int>(i);
  }
  return inv;
}

} // namespace

int compare(const OmegaPoint &a, const OmegaPoint &b) {
  if (a.component != b.component)
    return a.component < b.component ? -1 : 1;
  if (std::holds_alternative<Int>(a.at)) {
    Int x = std::get<Int>(a.at), y = std::get<Int>(b.at);
    return x == y ? 0 : (x < y ? -1 : 1);
  }
  return compare(std::get<GroupElement>(a.at), std::get<GroupElement>(b.at));
}

std::size_t hash_value(const OmegaPoint &p) {
  std::size_t h = static_cast<std::size_t>(p.component) * 0x9e3779b97f4a7c15ull;
  if (std::holds_alternative<Int>(p.at))
    h ^= static_cast<std::size_t>(std::get<Int>(p.at)) + (h << 6) + (h >> 2);
  else
    h ^= hash_value(std::get<GroupElement>(p.at)) + (h << 6) + (h >> 2);
  return h;
}

OmegaAction::OmegaAction(Group base, std::vector<OmegaComponent> components)
    : base_(std::move(base)), components_(std::move(components)) {
  if (components_.empty())
    throw ParseError("an action needs at least one component");

  const int gen_count = base_.generator_count();
  for (auto &component : components_) {
    if (auto *cycle = std::get_if<CycleComponent>(&component)) {
      if (cycle->shifts.empty())
        cycle->shifts.assign(gen_count, 1);
      if (static_cast<int>(cycle->shifts.size()) != gen_count)
        throw ParseError("cycle component needs one shift per base generator");
      if (cycle->size < 0)
        throw ParseError("cycle size must be nonnegative");
      // Shifts must kill the torsion of cyclic base factors.
      int gen = 0;
      for (const Factor &f : base_.factors()) {
        for (int j = 0; j < f.generator_count(); ++j, ++gen) {
          if (f.kind != FactorKind::Cyclic)
            continue;
          Int s = cycle->shifts[gen];
          if (cycle->size == 0 ? s != 0 : (f.modulus * s) % cycle->size != 0)
            throw InvariantViolation(
                "cycle shift incompatible with torsion base generator");
        }
      }
    } else if (auto *table = std::get_if<TableComponent>(&component)) {
      if (table->size < 1)
        throw ParseError("table component needs a positive size");
      if (static_cast<int>(table->perms.size()) != gen_count)
        throw ParseError("table component needs one permutation per generator");
      table->inverse_perms.clear();
      for (const auto &perm : table->perms) {
        if (static_cast<Int>(perm.size()) != table->size)
          throw ParseError("permutation length does not match component size");
        table->inverse_perms.push_back(inverse_permutation(perm));
      }
    }
  }
  compute_orbits();
}

OmegaAction OmegaAction::regular(Group base) {
  return OmegaAction(std::move(base), {RegularComponent{}});
}

Int OmegaAction::cycle_offset(const CycleComponent &c,
                              const GroupElement &b) const {
  std::vector<Int> exps = base_.abelianized_exponents(b);
  Int offset = 0;
  for (std::size_t i = 0; i < exps.size(); ++i)
    offset += c.shifts[i] * exps[i];
  return offset;
}

OmegaPoint OmegaAction::act(const GroupElement &b, const OmegaPoint &p) const {
  const OmegaComponent &component = components_.at(p.component);
  OmegaPoint out = p;
  if (const auto *cycle = std::get_if<CycleComponent>(&component)) {
    Int value = std::get<Int>(p.at) + cycle_offset(*cycle, b);
    out.at = cycle->size > 0 ? positive_mod(value, cycle->size) : value;
  } else if (const auto *table = std::get_if<TableComponent>(&component)) {
    Int value = std::get<Int>(p.at);
    for (int letter : base_.decompose(b)) {
      const auto &perm = letter > 0 ? table->perms[letter - 1]
                                    : table->inverse_perms[-letter - 1];
      value = perm[value];
    }
    out.at = value;
  } else {
    out.at = base_.multiply(b, std::get<GroupElement>(p.at));
  }
  return out;
}

OmegaPoint OmegaAction::act_generator(int gen, int sign,
                                      const OmegaPoint &p) const {
  const OmegaComponent &component = components_.at(p.component);
  OmegaPoint out = p;
  if (const auto *cycle = std::get_if<CycleComponent>(&component)) {
    Int value = std::get<Int>(p.at) + sign * cycle->shifts.at(gen);
    out.at = cycle->size > 0 ? positive_mod(value, cycle->size) : value;
  } else if (const auto *table = std::get_if<TableComponent>(&component)) {
    const auto &perm =
        sign > 0 ? table->perms.at(gen) : table->inverse_perms.at(gen);
    out.at = perm[std::get<Int>(p.at)];
  } else {
    GroupElement g = base_.generator(gen);
    if (sign < 0)
      g = base_.inverse(g);
    out.at = base_.multiply(g, std::get<GroupElement>(p.at));
  }
  return out;
}

void OmegaAction::compute_orbits() {
  orbits_.clear();
  point_orbit_.assign(components_.size(), {});
  line_gcd_.assign(components_.size(), 0);
  first_orbit_.assign(components_.size(), 0);

  for (std::size_t c = 0; c < components_.size(); ++c) {
    first_orbit_[c] = static_cast<int>(orbits_.size());
    const OmegaComponent &component = components_[c];

    if (const auto *regular = std::get_if<RegularComponent>(&component)) {
      (void)regular;
      OrbitInfo info;
      info.component = static_cast<int>(c);
      info.basepoint = OmegaPoint{static_cast<int>(c), base_.identity()};
      orbits_.push_back(std::move(info));
      continue;
    }

    if (const auto *cycle = std::get_if<CycleComponent>(&component)) {
      if (cycle->size == 0) {
        Int g = 0;
        for (Int s : cycle->shifts)
          g = std::gcd(g, s);
        if (g == 0)
          throw InvariantViolation(
              "line component with zero shifts has infinitely many orbits");
        line_gcd_[c] = g;
        for (Int r = 0; r < g; ++r) {
          OrbitInfo info;
          info.component = static_cast<int>(c);
          info.basepoint = OmegaPoint{static_cast<int>(c), r};
          orbits_.push_back(std::move(info));
        }
        continue;
      }
    }

    // Finite component: BFS over generator moves.
    Int size = std::holds_alternative<CycleComponent>(component)
                   ? std::get<CycleComponent>(component).size
                   : std::get<TableComponent>(component).size;
    std::vector<int> orbit_of_point(size, -1);
    for (Int p = 0; p < size; ++p) {
      if (orbit_of_point[p] != -1)
        continue;
      int orbit_id = static_cast<int>(orbits_.size());
      Int orbit_size = 0;
      std::deque<Int> queue{p};
      orbit_of_point[p] = orbit_id;
      while (!queue.empty()) {
        Int q = queue.front();
        queue.pop_front();
        ++orbit_size;
        for (int gen = 0; gen < base_.generator_count(); ++gen)
          for (int sign : {1, -1}) {
            OmegaPoint moved = act_generator(
                gen, sign, OmegaPoint{static_cast<int>(c), q});
            Int r = std::get<Int>(moved.at);
            if (orbit_of_point[r] == -1) {
              orbit_of_point[r] = orbit_id;
              queue.push_back(r);
            }
          }
      }
      OrbitInfo info;
      info.component = static_cast<int>(c);
      info.basepoint = OmegaPoint{static_cast<int>(c), p}; // minimal: BFS scans upward
      info.size = orbit_size;
      orbits_.push_back(std::move(info));
    }
    point_orbit_[c] = std::move(orbit_of_point);
  }
}

int OmegaAction::orbit_of(const OmegaPoint &p) const {
  const OmegaComponent &component = components_.at(p.component);
  if (std::holds_alternative<RegularComponent>(component))
    return first_orbit_[p.component];
  if (const auto *cycle = std::get_if<CycleComponent>(&component);
      cycle && cycle->size == 0)
    return first_orbit_[p.component] +
           static_cast<int>(positive_mod(std::get<Int>(p.at),
                                         line_gcd_[p.component]));
  return point_orbit_[p.component].at(std::get<Int>(p.at));
}

std::optional<Int> OmegaAction::schreier_distance(const OmegaPoint &p,
                                                  const OmegaPoint &q,
                                                  Int cap) const {
  if (orbit_of(p) != orbit_of(q))
    throw OrbitMismatch("points lie in different orbits");
  if (p == q)
    return 0;

  const OmegaComponent &component = components_.at(p.component);
  if (std::holds_alternative<RegularComponent>(component)) {
    // Word metric in the base: cache shared across queries.
    if (!base_norms_)
      base_norms_ = std::make_shared<NormCache>(
          base_, GeneratingSet::standard(base_));
    auto d = base_norms_->norm(
        base_.multiply(base_.inverse(std::get<GroupElement>(p.at)),
                       std::get<GroupElement>(q.at)),
        cap);
    if (d && *d > cap) // closed forms know the answer past the cap
      return std::nullopt;
    return d;
  }

  std::unordered_map<Int, Int> dist{{std::get<Int>(p.at), 0}};
  std::deque<Int> queue{std::get<Int>(p.at)};
  const Int target = std::get<Int>(q.at);
  Int depth = 0;
  std::size_t layer = 1, next_layer = 0;
  while (!queue.empty() && depth < cap) {
    Int current = queue.front();
    queue.pop_front();
    for (int gen = 0; gen < base_.generator_count(); ++gen)
      for (int sign : {1, -1}) {
        OmegaPoint moved =
            act_generator(gen, sign, OmegaPoint{p.component, current});
        Int value = std::get<Int>(moved.at);
        if (value == target)
          return depth + 1;
        if (dist.emplace(value, depth + 1).second)
          queue.push_back(value), ++next_layer;
      }
    if (--layer == 0) {
      ++depth;
      layer = next_layer;
      next_layer = 0;
    }
  }
  return std::nullopt;
}

OmegaAction OmegaAction::from_json(const nlohmann::json &j) {
  if (!j.is_object() || !j.contains("base") || !j.contains("omega"))
    throw ParseError("action JSON needs 'base' and 'omega'");
  Group base = Group::parse(j.at("base").get<std::string>());
  std::vector<OmegaComponent> components;
  for (const auto &cj : j.at("omega")) {
    std::string type = cj.value("type", "");
    if (type == "regular") {
      components.push_back(RegularComponent{});
    } else if (type == "cycle" || type == "line") {
      CycleComponent c;
      c.size = type == "line" ? 0 : cj.value("size", Int{0});
      if (type == "cycle" && c.size < 1)
        throw ParseError("cycle component needs a positive size");
      if (cj.contains("shifts"))
        c.shifts = cj.at("shifts").get<std::vector<Int>>();
      components.push_back(std::move(c));
    } else if (type == "table") {
      TableComponent t;
      t.size = cj.value("size", Int{0});
      t.perms = cj.at("perms").get<std::vector<std::vector<Int>>>();
      components.push_back(std::move(t));
    } else {
      throw ParseError("unknown component type '" + type + "'");
    }
  }
  return OmegaAction(std::move(base), std::move(components));
}

nlohmann::json OmegaAction::to_json() const {
  nlohmann::json omega = nlohmann::json::array();
  for (const auto &component : components_) {
    if (std::holds_alternative<RegularComponent>(component)) {
      omega.push_back({{"type", "regular"}});
    } else if (const auto *cycle = std::get_if<CycleComponent>(&component)) {
      nlohmann::json cj{{"shifts", cycle->shifts}};
      cj["type"] = cycle->size == 0 ? "line" : "cycle";
      if (cycle->size != 0)
        cj["size"] = cycle->size;
      omega.push_back(std::move(cj));
    } else {
      const auto &table = std::get<TableComponent>(component);
      omega.push_back(
          {{"type", "table"}, {"size", table.size}, {"perms", table.perms}});
    }
  }
  return nlohmann::json{{"base", base_.to_string()}, {"omega", std::move(omega)}};
}

nlohmann::json OmegaAction::point_to_json(const OmegaPoint &p) const {
  nlohmann::json pj{{"component", p.component}, {"orbit", orbit_of(p)}};
  if (std::holds_alternative<Int>(p.at))
    pj["point"] = std::get<Int>(p.at);
  else
    pj["point"] = base_.element_to_json(std::get<GroupElement>(p.at));
  return pj;
}

OmegaPoint OmegaAction::point_from_json(const nlohmann::json &j) const {
  if (!j.is_object() || !j.contains("component") || !j.contains("point"))
    throw ParseError("point JSON needs 'component' and 'point'");
  OmegaPoint p;
  p.component = j.at("component").get<int>();
  if (p.component < 0 || p.component >= static_cast<int>(components_.size()))
    throw ParseError("point component out of range");
  if (std::holds_alternative<RegularComponent>(components_[p.component]))
    p.at = base_.element_from_json(j.at("point"));
  else {
    Int value = j.at("point").get<Int>();
    if (const auto *cycle = std::get_if<CycleComponent>(&components_[p.component]);
        cycle && cycle->size > 0)
      value = positive_mod(value, cycle->size);
    p.at = value;
  }
  return p;
}

std::string OmegaAction::point_compact(const OmegaPoint &p) const {
  std::string out = std::to_string(p.component) + "/";
  if (std::holds_alternative<Int>(p.at))
    out += std::to_string(std::get<Int>(p.at));
  else
    out += base_.element_compact(std::get<GroupElement>(p.at));
  return out;
}

void OmegaAction::encode(const OmegaPoint &p, std::vector<Int> &out) const {
  out.push_back(p.component);
  if (std::holds_alternative<Int>(p.at))
    out.push_back(std::get<Int>(p.at));
  else
    base_.encode(std::get<GroupElement>(p.at), out);
}

OmegaPoint OmegaAction::decode(std::span<const Int> data,
                               std::size_t &pos) const {
  OmegaPoint p;
  p.component = static_cast<int>(data[pos++]);
  if (std::holds_alternative<RegularComponent>(components_.at(p.component)))
    p.at = base_.decode(data, pos);
  else
    p.at = data[pos++];
  return p;
}

bool OmegaAction::operator==(const OmegaAction &other) const {
  if (!(base_ == other.base_) ||
      components_.size() != other.components_.size())
    return false;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const auto &a = components_[i];
    const auto &b = other.components_[i];
    if (a.index() != b.index())
      return false;
    if (const auto *ca = std::get_if<CycleComponent>(&a)) {
      const auto *cb = std::get_if<CycleComponent>(&b);
      if (ca->size != cb->size || ca->shifts != cb->shifts)
        return false;
    } else if (const auto *ta = std::get_if<TableComponent>(&a)) {
      const auto *tb = std::get_if<TableComponent>(&b);
      if (ta->size != tb->size || ta->perms != tb->perms)
        return false;
    }
  }
  return true;
}

} // namespace wreath
