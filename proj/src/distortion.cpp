#include "wreath/distortion.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace wreath {

UElement u_identity(const Universe &u) {
  if (const auto *g = std::get_if<Group>(&u))
    return g->identity();
  return std::get<Wreath>(u).identity();
}

bool u_is_identity(const Universe &u, const UElement &x) {
  if (const auto *g = std::get_if<Group>(&u))
    return g->is_identity(std::get<GroupElement>(x));
  return std::get<Wreath>(u).is_identity(std::get<WreathElement>(x));
}

UElement u_multiply(const Universe &u, const UElement &x, const UElement &y) {
  if (const auto *g = std::get_if<Group>(&u))
    return g->multiply(std::get<GroupElement>(x), std::get<GroupElement>(y));
  return std::get<Wreath>(u).multiply(std::get<WreathElement>(x),
                                      std::get<WreathElement>(y));
}

UElement u_inverse(const Universe &u, const UElement &x) {
  if (const auto *g = std::get_if<Group>(&u))
    return g->inverse(std::get<GroupElement>(x));
  return std::get<Wreath>(u).inverse(std::get<WreathElement>(x));
}

int u_generator_count(const Universe &u) {
  if (const auto *g = std::get_if<Group>(&u))
    return g->generator_count();
  const Wreath &w = std::get<Wreath>(u);
  return w.lamp_group().generator_count() + w.base_group().generator_count();
}

UElement u_generator(const Universe &u, int index) {
  if (const auto *g = std::get_if<Group>(&u))
    return g->generator(index);
  // Wreath generators: lamp generators at the identity position first, then
  // base generators as cursor moves.
  const Wreath &w = std::get<Wreath>(u);
  int lamps = w.lamp_group().generator_count();
  if (index < lamps)
    return w.lamp_at(w.base_group().identity(),
                     w.lamp_group().generator(index));
  return w.from_cursor(w.base_group().generator(index - lamps));
}

void u_encode(const Universe &u, const UElement &x, std::vector<Int> &out) {
  if (const auto *g = std::get_if<Group>(&u))
    g->encode(std::get<GroupElement>(x), out);
  else
    std::get<Wreath>(u).encode(std::get<WreathElement>(x), out);
}

namespace {

UElement u_decode(const Universe &u, std::span<const Int> data,
                  std::size_t &pos) {
  if (const auto *g = std::get_if<Group>(&u))
    return g->decode(data, pos);
  return std::get<Wreath>(u).decode(data, pos);
}

} // namespace

std::string u_compact(const Universe &u, const UElement &x) {
  if (const auto *g = std::get_if<Group>(&u))
    return g->element_compact(std::get<GroupElement>(x));
  return std::get<Wreath>(u).element_compact(std::get<WreathElement>(x));
}

nlohmann::json u_to_json(const Universe &u, const UElement &x) {
  if (const auto *g = std::get_if<Group>(&u))
    return g->element_to_json(std::get<GroupElement>(x));
  return std::get<Wreath>(u).element_to_json(std::get<WreathElement>(x));
}

std::string u_describe(const Universe &u) {
  if (const auto *g = std::get_if<Group>(&u))
    return g->to_string();
  const Wreath &w = std::get<Wreath>(u);
  return w.lamp_group().to_string() + " wr " + w.base_group().to_string();
}

namespace {

bool all_coordinates_even(const GroupElement &x) {
  for (const auto &part : x.parts)
    for (Int v : part)
      if (v % 2 != 0)
        return false;
  return true;
}

bool is_central_h3(const GroupElement &x) {
  // (0, 0, c) in a single-factor H3 group.
  return x.parts.size() == 1 && x.parts[0].size() == 3 && x.parts[0][0] == 0 &&
         x.parts[0][1] == 0;
}

} // namespace

std::function<bool(const UElement &)>
member_predicate(const std::string &name, const Universe &ambient) {
  if (name.empty() || name == "none")
    return nullptr;
  if (name == "even") {
    return [](const UElement &x) {
      return all_coordinates_even(std::get<GroupElement>(x));
    };
  }
  if (name == "central") {
    return [](const UElement &x) {
      return is_central_h3(std::get<GroupElement>(x));
    };
  }
  if (name == "even-lamps") {
    return [](const UElement &x) {
      for (const auto &[position, value] : std::get<WreathElement>(x).support)
        if (!all_coordinates_even(value))
          return false;
      return true;
    };
  }
  if (name == "cursor-only") {
    return [](const UElement &x) {
      return std::get<WreathElement>(x).support.empty();
    };
  }
  if (name == "central-wreath") {
    return [](const UElement &x) {
      const WreathElement &w = std::get<WreathElement>(x);
      if (!is_central_h3(w.cursor))
        return false;
      for (const auto &[position, value] : w.support)
        if (!is_central_h3(position))
          return false;
      return true;
    };
  }
  (void)ambient;
  throw ParseError("unknown membership test '" + name + "'");
}

SubgroupEmbedding embed_with_images(Universe subgroup, Universe ambient,
                                    std::vector<UElement> images,
                                    const std::string &member_name) {
  if (static_cast<int>(images.size()) != u_generator_count(subgroup))
    throw ParseError("need one ambient image per subgroup generator");
  SubgroupEmbedding emb;
  emb.member = member_predicate(member_name, ambient);
  emb.member_name = member_name == "none" ? "" : member_name;
  emb.subgroup = std::move(subgroup);
  emb.ambient = std::move(ambient);
  emb.generator_images = std::move(images);
  return emb;
}

SubgroupEmbedding
embed_subwreath(const Wreath &ambient, Group lamp_subgroup,
                const std::vector<std::vector<int>> &lamp_words,
                Group base_subgroup,
                const std::vector<std::vector<int>> &base_words,
                const std::string &member_name) {
  if (static_cast<int>(lamp_words.size()) != lamp_subgroup.generator_count() ||
      static_cast<int>(base_words.size()) != base_subgroup.generator_count())
    throw ParseError("need one word per subgroup factor generator");
  std::vector<UElement> images;
  for (const auto &word : lamp_words)
    images.emplace_back(ambient.lamp_at(
        ambient.base_group().identity(),
        ambient.lamp_group().evaluate_word(word)));
  for (const auto &word : base_words)
    images.emplace_back(
        ambient.from_cursor(ambient.base_group().evaluate_word(word)));
  return embed_with_images(Wreath(std::move(lamp_subgroup),
                                  std::move(base_subgroup)),
                           ambient, std::move(images), member_name);
}

std::string AmbientMetric::name() const {
  if (kind == Kind::Exact)
    return "exact";
  return "estimate:" + std::to_string(estimate.variant);
}

AmbientMetric AmbientMetric::from_json(const nlohmann::json &j) {
  AmbientMetric m;
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "exact")
      return m;
    if (s.rfind("estimate:", 0) == 0) {
      m.kind = Kind::Estimate;
      m.estimate.variant = std::stoi(s.substr(9));
      if (m.estimate.variant < 1 || m.estimate.variant > 7)
        throw ParseError("estimate variant must be in 1..7");
      return m;
    }
    throw ParseError("ambient metric must be 'exact' or 'estimate:k'");
  }
  if (j.is_object() && j.value("kind", "") == "estimate") {
    m.kind = Kind::Estimate;
    if (j.contains("estimate"))
      m.estimate = EstimateConfig::from_json(j.at("estimate"));
    return m;
  }
  throw ParseError("bad ambient metric description");
}

std::string DistortionTable::csv(bool plot_only) const {
  std::string out = plot_only ? "n,delta\n"
                              : "n,delta,witness,metric_kind,truncated\n";
  for (const DistortionRow &row : rows) {
    out += std::to_string(row.n) + "," + std::to_string(row.delta);
    if (!plot_only) {
      out += "," + row.witness + "," + row.metric_kind + "," +
             (row.truncated ? "1" : "0");
    }
    out += "\n";
  }
  return out;
}

nlohmann::json DistortionTable::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const DistortionRow &row : rows)
    rows_json.push_back({{"n", row.n},
                         {"delta", row.delta},
                         {"witness", row.witness},
                         {"metric_kind", row.metric_kind},
                         {"truncated", row.truncated}});
  nlohmann::json hidden_json = nlohmann::json::array();
  for (const auto &[value, element] : hidden)
    hidden_json.push_back({{"ambient_value", value}, {"element", element}});
  return nlohmann::json{{"subgroup", subgroup_desc},
                        {"ambient", ambient_desc},
                        {"member", member_name},
                        {"h_radius", h_radius},
                        {"subgroup_exhausted", subgroup_exhausted},
                        {"rows", std::move(rows_json)},
                        {"hidden", std::move(hidden_json)}};
}

DistortionTable distortion_table(const SubgroupEmbedding &embedding,
                                 const DistortionConfig &config) {
  if (config.n_max < 0 || config.h_radius < 0)
    throw std::invalid_argument("n_max and h_radius must be nonnegative");

  const Universe &H = embedding.subgroup;
  const Universe &G = embedding.ambient;

  // Ambient measurement. An element of value <= n_max only ever needs
  // factor-norm lookups <= its own value (lamp norms and pairwise tour
  // distances are both bounded by the tree weight), so raising the cap to
  // n_max makes "unreachable" imply "exceeds every row"; the extra factor
  // of two is slack, not load-bearing.
  EngineOptions opts = config.engine;
  opts.norm_cap = std::max(opts.norm_cap, 2 * config.n_max);
  std::optional<MetricEngine> engine;
  std::optional<NormCache> plain_norms;
  if (const auto *w = std::get_if<Wreath>(&G)) {
    engine.emplace(*w, opts);
  } else {
    if (config.ambient.kind == AmbientMetric::Kind::Estimate)
      throw ParseError("estimate ambient metrics need a wreath ambient group");
    plain_norms.emplace(std::get<Group>(G),
                        GeneratingSet::standard(std::get<Group>(G)),
                        opts.limits);
    if (!opts.cache_dir.empty())
      plain_norms->try_load(opts.cache_dir);
  }
  auto ambient_value = [&](const UElement &x) -> std::optional<Int> {
    if (engine) {
      const WreathElement &w = std::get<WreathElement>(x);
      if (config.ambient.kind == AmbientMetric::Kind::Exact)
        return engine->exact_norm(w);
      return engine->estimate(w, config.ambient.estimate);
    }
    return plain_norms->norm(std::get<GroupElement>(x), opts.norm_cap);
  };

  // Subgroup generators with their ambient images, inverses included.
  std::vector<std::pair<UElement, UElement>> steps;
  for (int i = 0; i < u_generator_count(H); ++i) {
    UElement g = u_generator(H, i);
    UElement image = embedding.generator_images.at(i);
    UElement g_inv = u_inverse(H, g);
    bool self_inverse = g_inv == g;
    steps.emplace_back(std::move(g), image);
    if (!self_inverse)
      steps.emplace_back(std::move(g_inv), u_inverse(G, image));
  }

  std::vector<Int> best(config.n_max + 1, -1);
  std::vector<std::string> best_witness(config.n_max + 1);

  std::unordered_map<std::vector<Int>, std::vector<Int>, IntVecHash> seen;
  std::unordered_set<std::vector<Int>, IntVecHash> image_keys;
  std::deque<std::pair<std::vector<Int>, std::vector<Int>>> queue;

  auto admit = [&](const UElement &abstract_elem, const UElement &image,
                   Int depth) -> bool {
    std::vector<Int> abstract_key, image_key;
    u_encode(H, abstract_elem, abstract_key);
    u_encode(G, image, image_key);
    auto [it, inserted] = seen.emplace(abstract_key, image_key);
    if (!inserted) {
      if (it->second != image_key)
        throw InvariantViolation(
            "generator images do not define a homomorphism: element " +
            u_compact(H, abstract_elem) + " reached two ambient values");
      return false;
    }
    if (seen.size() > opts.limits.max_states)
      throw ResourceLimit("distortion search exceeded its state budget",
                          seen.size());
    image_keys.insert(image_key);
    if (auto value = ambient_value(image);
        value && *value <= config.n_max && depth > best[*value]) {
      best[*value] = depth;
      best_witness[*value] = u_compact(H, abstract_elem);
    }
    queue.emplace_back(std::move(abstract_key), std::move(image_key));
    return true;
  };

  admit(u_identity(H), u_identity(G), 0);

  Int depth = 0;
  std::size_t layer = 1, next_layer = 0;
  bool exhausted = true;
  while (!queue.empty()) {
    if (depth >= config.h_radius) {
      exhausted = false;
      break;
    }
    auto [abstract_key, image_key] = std::move(queue.front());
    queue.pop_front();
    std::size_t pos = 0;
    UElement current = u_decode(H, abstract_key, pos);
    pos = 0;
    UElement image = u_decode(G, image_key, pos);
    for (const auto &[g, g_image] : steps) {
      if (admit(u_multiply(H, current, g), u_multiply(G, image, g_image),
                depth + 1))
        ++next_layer;
    }
    if (--layer == 0) {
      ++depth;
      layer = next_layer;
      next_layer = 0;
    }
  }

  DistortionTable table;
  table.subgroup_desc = u_describe(H);
  table.ambient_desc = u_describe(G);
  table.member_name = embedding.member_name;
  table.h_radius = config.h_radius;
  table.subgroup_exhausted = exhausted;

  // Certification: enumerate the ambient ball and look for subgroup members
  // the subgroup-side search never reached. Only possible against the exact
  // ambient metric and with a membership test.
  bool certified = exhausted;
  if (!exhausted && config.certify && embedding.member &&
      config.ambient.kind == AmbientMetric::Kind::Exact) {
    auto check = [&](const UElement &x, Int value) {
      if (!embedding.member(x))
        return;
      std::vector<Int> key;
      u_encode(G, x, key);
      if (!image_keys.count(key))
        table.hidden.emplace_back(value, u_compact(G, x));
    };
    if (engine) {
      engine->for_each_ball_element(
          config.n_max,
          [&](const WreathElement &x, Int d) { check(UElement(x), d); });
    } else {
      for (const BallEntry &entry :
           ball(std::get<Group>(G), GeneratingSet::standard(std::get<Group>(G)),
                config.n_max, opts.limits))
        check(UElement(entry.element), entry.length);
    }
    std::sort(table.hidden.begin(), table.hidden.end());
    certified = true;
  }

  Int running = 0;
  std::string running_witness = u_compact(H, u_identity(H));
  for (Int n = 0; n <= config.n_max; ++n) {
    if (best[n] > running) {
      running = best[n];
      running_witness = best_witness[n];
    }
    DistortionRow row;
    row.n = n;
    row.delta = running;
    row.witness = running_witness;
    row.metric_kind = config.ambient.name();
    if (exhausted)
      row.truncated = false;
    else if (!certified)
      row.truncated = true;
    else
      row.truncated = std::any_of(table.hidden.begin(), table.hidden.end(),
                                  [n](const auto &h) { return h.first <= n; });
    table.rows.push_back(std::move(row));
  }
  if (!opts.cache_dir.empty()) {
    if (engine)
      engine->persist_caches();
    else
      plain_norms->save(opts.cache_dir);
  }
  return table;
}

std::vector<PowerProfileRow> cyclic_power_profile(const MetricEngine &engine,
                                                  const WreathElement &x,
                                                  Int count,
                                                  const EstimateConfig &config) {
  std::vector<PowerProfileRow> rows;
  rows.reserve(count);
  WreathElement power = engine.wreath().identity();
  for (Int n = 1; n <= count; ++n) {
    power = engine.wreath().multiply(power, x);
    auto cursor_norm = engine.base_norm(power.cursor);
    auto value = engine.estimate(power, config);
    if (!cursor_norm || !value)
      throw ResourceLimit("power profile hit a norm cap at n = " +
                              std::to_string(n),
                          static_cast<std::size_t>(n));
    rows.push_back({n, power.support_size(), *cursor_norm, *value});
  }
  return rows;
}

std::string CyclicClassification::kind_name() const {
  switch (kind) {
  case Kind::FinalTorsion:
    return "FinalTorsion";
  case Kind::SupportStabilizes:
    return "SupportStabilizes";
  case Kind::NonStabilizing:
    return "NonStabilizing";
  }
  return "?";
}

CyclicClassification classify_cyclic(const MetricEngine &engine,
                                     const WreathElement &x, Int window) {
  if (window < 4)
    throw std::invalid_argument("classification window must be at least 4");
  const Group &base = engine.wreath().base_group();

  CyclicClassification result;
  GroupElement cursor_power = base.identity();
  for (Int m = 1; m <= window; ++m) {
    cursor_power = base.multiply(cursor_power, x.cursor);
    if (base.is_identity(cursor_power)) {
      result.kind = CyclicClassification::Kind::FinalTorsion;
      result.torsion_period = m;
      result.regime = "bounded: follows the lamp subgroup distortion";
      return result;
    }
  }

  std::vector<Int> sizes(window + 1, 0);
  WreathElement power = engine.wreath().identity();
  for (Int n = 1; n <= window; ++n) {
    power = engine.wreath().multiply(power, x);
    sizes[n] = power.support_size();
  }
  Int tail_start = window / 2;
  Int stable = sizes[window];
  bool stabilizes = true;
  for (Int n = tail_start; n <= window; ++n)
    if (sizes[n] != stable)
      stabilizes = false;

  if (stabilizes) {
    Int first = window;
    while (first > 1 && sizes[first - 1] == stable)
      --first;
    result.kind = CyclicClassification::Kind::SupportStabilizes;
    result.stabilized_at = first;
    result.stable_size = stable;
    result.regime = "follows the cursor power norm in the base group";
  } else {
    result.kind = CyclicClassification::Kind::NonStabilizing;
    result.regime = "linear: undistorted";
  }
  return result;
}

SuperadditivityReport superadditivity_probe(std::span<const Int> f) {
  SuperadditivityReport report;
  for (std::size_t x = 1; x < f.size(); ++x)
    for (std::size_t y = x; x + y < f.size(); ++y)
      if (f[x + y] < f[x] + f[y]) {
        report.superadditive_on_sample = false;
        report.violations.emplace_back(static_cast<Int>(x),
                                       static_cast<Int>(y), f[x] + f[y],
                                       f[x + y]);
      }
  return report;
}

SuperadditivityReport superadditivity_probe(const DistortionTable &table) {
  std::vector<Int> f;
  f.reserve(table.rows.size());
  for (const DistortionRow &row : table.rows)
    f.push_back(row.delta);
  return superadditivity_probe(f);
}

SubgroupEmbedding embedding_from_json(const nlohmann::json &j) {
  std::string kind = j.value("kind", "");
  std::string member = j.value("member", "");

  if (kind == "plain") {
    Group ambient = Group::parse(j.at("ambient").get<std::string>());
    Group subgroup = Group::parse(j.at("subgroup").get<std::string>());
    std::vector<UElement> images;
    for (const auto &word : j.at("gen_words")) {
      std::vector<int> letters = word.get<std::vector<int>>();
      images.emplace_back(ambient.evaluate_word(letters));
    }
    return embed_with_images(std::move(subgroup), std::move(ambient),
                             std::move(images), member);
  }
  if (kind == "in-wreath") {
    Wreath ambient = parse_wreath(j.at("ambient").get<std::string>());
    Group subgroup = Group::parse(j.at("subgroup").get<std::string>());
    std::vector<UElement> images;
    for (const auto &word : j.at("gen_words")) {
      std::vector<WreathLetter> letters =
          parse_word(ambient, word.get<std::string>());
      images.emplace_back(ambient.evaluate(letters));
    }
    return embed_with_images(std::move(subgroup), std::move(ambient),
                             std::move(images), member);
  }
  if (kind == "subwreath") {
    Wreath ambient = parse_wreath(j.at("ambient").get<std::string>());
    return embed_subwreath(
        ambient, Group::parse(j.at("lamp_subgroup").get<std::string>()),
        j.at("lamp_words").get<std::vector<std::vector<int>>>(),
        Group::parse(j.at("base_subgroup").get<std::string>()),
        j.at("base_words").get<std::vector<std::vector<int>>>(), member);
  }
  throw ParseError("embedding kind must be plain, in-wreath or subwreath");
}

} // namespace wreath
