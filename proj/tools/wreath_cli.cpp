// Command-line front end: evaluate lamplighter words, compute norms and
// estimates, compare estimate variants over balls, run distortion
// experiments, and inspect actions.
//
// Exit codes: 0 success, 2 parse/usage error, 3 resource cap hit,
// 4 internal invariant violation.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "wreath/distortion.hpp"
#include "wreath/metric.hpp"
#include "wreath/nonregular.hpp"
#include "wreath/version.hpp"

using namespace wreath;

namespace {

std::string fnv_hex(const std::string &text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string stamp(const std::string &canonical_config) {
  return "# wreath " + std::string(kVersion) + " " + canonical_config +
         " config=" + fnv_hex(canonical_config);
}

nlohmann::json load_json_arg(const std::string &arg) {
  // Inline JSON starts with '{'; anything else is a file path.
  std::string text = arg;
  if (text.find('{') != 0) {
    std::ifstream in(arg);
    if (!in)
      throw ParseError("cannot open '" + arg + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  }
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("bad JSON: ") + e.what());
  }
}

void write_text(const std::string &path, const std::string &text) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

MetricSource parse_source(const std::string &text) {
  if (text.empty() || text == "exact")
    return MetricSource::exact();
  std::size_t comma = text.find(',');
  if (comma == std::string::npos)
    throw ParseError("scaled source must look like 'mult,add'");
  return MetricSource::scaled(std::stoll(text.substr(0, comma)),
                              std::stoll(text.substr(comma + 1)));
}

std::string format_ratio(std::optional<Int> exact, std::optional<Int> value) {
  if (!exact || !value)
    return "";
  if (*value == 0)
    return *exact == 0 ? "1.0000" : "inf";
  char buf[32];
  snprintf(buf, sizeof(buf), "%.4f",
           static_cast<double>(*exact) / static_cast<double>(*value));
  return buf;
}

struct NormUnreachable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Int require(std::optional<Int> value, const std::string &hint) {
  if (!value)
    throw NormUnreachable("norm exceeds the search cap; " + hint);
  return *value;
}

// ---------------------------------------------------------------- eval

int cmd_eval(const std::string &group_desc, const std::string &action_desc,
             const std::string &word_text) {
  if (!action_desc.empty()) {
    nlohmann::json aj = load_json_arg(action_desc);
    Group lamp = Group::parse(aj.value("lamp", "Z2"));
    NonregularWreath w(std::move(lamp), OmegaAction::from_json(aj));
    NonregularElement x = w.evaluate(parse_word(w, word_text));
    std::cout << w.element_to_json(x).dump() << "\n";
    return 0;
  }
  Wreath w = parse_wreath(group_desc);
  WreathElement x = w.evaluate(parse_word(w, word_text));
  std::cout << w.element_to_json(x).dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------- norm

int cmd_norm(const std::string &group_desc, const std::string &mode,
             bool use_word, const std::string &word_text,
             const std::string &element_text, int tsp_cap, Int bfs_cap,
             const std::string &ea, const std::string &eb,
             const std::string &cache_dir) {
  Wreath w = parse_wreath(group_desc);
  EngineOptions options;
  options.tsp_cap = tsp_cap;
  options.norm_cap = bfs_cap;
  options.cache_dir = cache_dir;
  MetricEngine engine(w, options);

  WreathElement x = use_word
                        ? w.evaluate(parse_word(w, word_text))
                        : w.element_from_json(load_json_arg(element_text));

  std::string formula;
  Int value = 0;
  if (mode == "exact") {
    value = require(engine.exact_norm(x), "raise --bfs-cap");
    formula = "lamp norms + exact visiting path";
  } else if (mode == "bfs") {
    value = require(engine.bfs_norm(x, bfs_cap), "raise --bfs-cap");
    formula = "breadth-first search over the wreath product";
  } else if (mode.rfind("estimate:", 0) == 0) {
    EstimateConfig config;
    config.variant = std::stoi(mode.substr(9));
    if (config.variant < 1 || config.variant > 7)
      throw ParseError("estimate variant must be in 1..7");
    config.source_a = parse_source(ea);
    config.source_b = parse_source(eb);
    value = require(engine.estimate(x, config), "raise --bfs-cap");
    formula = "estimate variant " + std::to_string(config.variant);
  } else {
    throw ParseError("mode must be exact, bfs or estimate:N");
  }

  bool is_exact = mode == "exact" || mode == "bfs";
  std::cout << value << "\n";
  std::cout << "# mode=" << mode << " formula=\"" << formula
            << "\" caps=tsp:" << tsp_cap << ",bfs:" << bfs_cap
            << " exact=" << (is_exact ? "yes" : "no") << "\n";
  engine.persist_caches();
  return 0;
}

// ---------------------------------------------------------------- compare

int cmd_compare(const std::string &group_desc, Int radius, Int seed,
                const std::string &ea, const std::string &eb, Int fit_slack,
                int tsp_cap, Int bfs_cap, const std::string &out_path) {
  Wreath w = parse_wreath(group_desc);
  EngineOptions options;
  options.tsp_cap = tsp_cap;
  options.norm_cap = std::max(bfs_cap, radius);
  MetricEngine engine(w, options);

  EstimateConfig configs[7];
  for (int v = 1; v <= 7; ++v) {
    configs[v - 1].variant = v;
    configs[v - 1].source_a = parse_source(ea);
    configs[v - 1].source_b = parse_source(eb);
  }

  std::ostringstream csv;
  csv << stamp("cmd=compare group=\"" + group_desc + "\" radius=" +
               std::to_string(radius) + " seed=" + std::to_string(seed) +
               " ea=" + (ea.empty() ? "exact" : ea) + " eb=" +
               (eb.empty() ? "exact" : eb) + " slack=" +
               std::to_string(fit_slack))
      << "\n";
  csv << "id,exact";
  for (int v = 1; v <= 7; ++v)
    csv << ",v" << v;
  for (int v = 1; v <= 7; ++v)
    csv << ",r" << v;
  csv << "\n";

  std::vector<std::pair<Int, Int>> samples[7];
  engine.for_each_ball_element(radius, [&](const WreathElement &x, Int norm) {
    csv << engine.wreath().element_compact(x) << "," << norm;
    std::optional<Int> values[7];
    for (int v = 0; v < 7; ++v) {
      values[v] = engine.estimate(x, configs[v]);
      if (values[v])
        csv << "," << *values[v];
      else
        csv << ",unreachable";
      if (values[v])
        samples[v].emplace_back(*values[v], norm);
    }
    for (int v = 0; v < 7; ++v)
      csv << "," << format_ratio(norm, values[v]);
    csv << "\n";
  });

  for (int v = 0; v < 7; ++v) {
    FitResult fit = fit_equivalence_constants(samples[v], fit_slack);
    char buf[64];
    snprintf(buf, sizeof(buf), "%.4f", fit.C);
    csv << "# fit v" << (v + 1) << ": C=" << buf << " D=" << fit.D
        << " bounded=" << (fit.bounded ? "yes" : "no")
        << " witness=" << samples[v][fit.witness].first << "/"
        << samples[v][fit.witness].second << "\n";
  }

  if (out_path.empty())
    std::cout << csv.str();
  else
    write_text(out_path, csv.str());
  return 0;
}

// ---------------------------------------------------------------- orbits

int cmd_orbits(const std::string &action_desc) {
  OmegaAction action = OmegaAction::from_json(load_json_arg(action_desc));
  nlohmann::json orbits = nlohmann::json::array();
  for (int j = 0; j < action.orbit_count(); ++j) {
    const OrbitInfo &info = action.orbits()[j];
    nlohmann::json oj{{"orbit", j},
                      {"component", info.component},
                      {"basepoint", action.point_to_json(info.basepoint)}};
    if (info.size)
      oj["size"] = *info.size;
    orbits.push_back(std::move(oj));
  }
  std::cout << nlohmann::json{{"action", action.to_json()},
                              {"orbit_count", action.orbit_count()},
                              {"orbits", std::move(orbits)}}
                   .dump(2)
            << "\n";
  return 0;
}

// ------------------------------------------------------- nonregular-norm

int cmd_nonregular_norm(const std::string &action_desc,
                        const std::string &mode, bool use_word,
                        const std::string &word_text,
                        const std::string &element_text, Int bfs_cap,
                        const std::string &cache_dir) {
  nlohmann::json aj = load_json_arg(action_desc);
  Group lamp = Group::parse(aj.value("lamp", "Z2"));
  NonregularWreath w(std::move(lamp), OmegaAction::from_json(aj));
  EngineOptions options;
  options.norm_cap = bfs_cap;
  options.cache_dir = cache_dir;
  NonregularMetric metric(w, options);

  NonregularElement x = use_word
                            ? w.evaluate(parse_word(w, word_text))
                            : w.element_from_json(load_json_arg(element_text));

  Int value = 0;
  std::string formula;
  if (mode == "estimate") {
    value = require(metric.estimate(x), "raise --bfs-cap");
    formula = "lamp norms + per-orbit trees + cursor norm";
  } else if (mode == "bfs") {
    value = require(metric.bfs_norm(x, bfs_cap), "raise --bfs-cap");
    formula = "breadth-first search over the product";
  } else {
    throw ParseError("mode must be estimate or bfs");
  }
  std::cout << value << "\n";
  std::cout << "# mode=" << mode << " formula=\"" << formula
            << "\" orbits=" << w.orbit_count() << " caps=bfs:" << bfs_cap
            << " exact=" << (mode == "bfs" ? "yes" : "no") << "\n";
  metric.persist_caches();
  return 0;
}

// ---------------------------------------------------------------- distortion

int run_cyclic_experiment(const nlohmann::json &config_json,
                          const std::string &canonical, std::string prefix,
                          bool plot);

int cmd_distortion(const std::string &config_arg,
                   const std::string &prefix_override, bool plot) {
  nlohmann::json cj = load_json_arg(config_arg);
  std::string canonical = "cmd=distortion config=" + cj.dump();
  std::string prefix = !prefix_override.empty()
                           ? prefix_override
                           : cj.value("out_prefix", std::string("distortion"));

  if (cj.contains("cyclic"))
    return run_cyclic_experiment(cj, canonical, prefix, plot);

  SubgroupEmbedding emb = embedding_from_json(cj.at("embedding"));
  DistortionConfig config;
  config.n_max = cj.value("n_max", Int{10});
  config.h_radius = cj.value("h_radius", Int{10});
  if (cj.contains("ambient_metric"))
    config.ambient = AmbientMetric::from_json(cj.at("ambient_metric"));
  if (cj.contains("caps")) {
    const auto &caps = cj.at("caps");
    config.engine.tsp_cap = caps.value("tsp", config.engine.tsp_cap);
    config.engine.norm_cap = caps.value("norm", config.engine.norm_cap);
    config.engine.limits.max_states =
        caps.value("max_states", config.engine.limits.max_states);
  }
  config.certify = cj.value("certify", true);
  if (const char *dir = std::getenv("WREATH_CACHE_DIR"))
    config.engine.cache_dir = dir;

  DistortionTable table = distortion_table(emb, config);

  std::string header = stamp(canonical);
  write_text(prefix + ".csv", header + "\n" + table.csv());
  nlohmann::json out = table.to_json();
  out["version"] = kVersion;
  out["config_hash"] = fnv_hex(canonical);
  out["seed"] = cj.value("seed", Int{0});
  write_text(prefix + ".json", out.dump(2) + "\n");
  if (plot)
    write_text(prefix + "_plot.csv", table.csv(true));

  SuperadditivityReport probe = superadditivity_probe(table);
  std::cout << "subgroup " << table.subgroup_desc << " inside "
            << table.ambient_desc << " (h_radius " << table.h_radius << ", "
            << (table.subgroup_exhausted ? "exhausted" : "truncated ball")
            << ")\n";
  for (const DistortionRow &row : table.rows)
    std::cout << "n=" << row.n << " delta=" << row.delta
              << (row.truncated ? " (lower bound only)" : "") << " witness="
              << row.witness << "\n";
  std::cout << "superadditive on sample: "
            << (probe.superadditive_on_sample ? "yes" : "no") << " ("
            << probe.violations.size() << " violations)\n";
  std::cout << "wrote " << prefix << ".csv, " << prefix << ".json\n";
  return 0;
}

int run_cyclic_experiment(const nlohmann::json &config_json,
                          const std::string &canonical, std::string prefix,
                          bool plot) {
  const nlohmann::json &cy = config_json.at("cyclic");
  Wreath ambient = parse_wreath(cy.at("ambient").get<std::string>());
  EngineOptions options;
  if (config_json.contains("caps")) {
    const auto &caps = config_json.at("caps");
    options.tsp_cap = caps.value("tsp", options.tsp_cap);
    options.norm_cap = caps.value("norm", options.norm_cap);
  }
  MetricEngine engine(ambient, options);

  WreathElement x =
      cy.contains("word")
          ? ambient.evaluate(parse_word(ambient, cy.at("word").get<std::string>()))
          : ambient.element_from_json(cy.at("element"));
  Int window = cy.value("window", Int{16});
  Int powers = cy.value("powers", Int{32});
  EstimateConfig est;
  if (cy.contains("estimate"))
    est = EstimateConfig::from_json(cy.at("estimate"));

  CyclicClassification verdict = classify_cyclic(engine, x, window);
  std::cout << "classification: " << verdict.kind_name();
  if (verdict.kind == CyclicClassification::Kind::FinalTorsion)
    std::cout << " period=" << verdict.torsion_period;
  if (verdict.kind == CyclicClassification::Kind::SupportStabilizes)
    std::cout << " stabilized_at=" << verdict.stabilized_at
              << " size=" << verdict.stable_size;
  std::cout << " (finite-window heuristic)\n";
  std::cout << "regime: " << verdict.regime << "\n";

  auto profile = cyclic_power_profile(engine, x, powers, est);
  std::ostringstream profile_csv;
  profile_csv << stamp(canonical) << "\n";
  profile_csv << "n,support_size,cursor_norm,estimate\n";
  for (const PowerProfileRow &row : profile)
    profile_csv << row.n << "," << row.support_size << "," << row.cursor_norm
                << "," << row.estimate << "\n";
  write_text(prefix + "_powers.csv", profile_csv.str());

  // Distortion table of the cyclic subgroup; abstract side is Z, or Z/m for
  // a torsion element.
  Int order = 0;
  WreathElement acc = ambient.identity();
  for (Int m = 1; m <= window; ++m) {
    acc = ambient.multiply(acc, x);
    if (ambient.is_identity(acc)) {
      order = m;
      break;
    }
  }
  Group abstract_group =
      order > 0 ? Group::parse("Z/" + std::to_string(order)) : Group::parse("Z");
  SubgroupEmbedding emb = embed_with_images(
      abstract_group, ambient, std::vector<UElement>{UElement(x)});
  DistortionConfig table_config;
  table_config.n_max = config_json.value("n_max", Int{10});
  table_config.h_radius = config_json.value("h_radius", Int{10});
  table_config.engine = options;
  if (config_json.contains("ambient_metric"))
    table_config.ambient =
        AmbientMetric::from_json(config_json.at("ambient_metric"));
  DistortionTable table = distortion_table(emb, table_config);
  write_text(prefix + ".csv", stamp(canonical) + "\n" + table.csv());
  nlohmann::json out = table.to_json();
  out["version"] = kVersion;
  out["config_hash"] = fnv_hex(canonical);
  out["classification"] = verdict.kind_name();
  out["regime"] = verdict.regime;
  write_text(prefix + ".json", out.dump(2) + "\n");
  if (plot)
    write_text(prefix + "_plot.csv", table.csv(true));
  std::cout << "wrote " << prefix << ".csv, " << prefix << ".json, " << prefix
            << "_powers.csv\n";
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"word metrics, estimates and distortion in wreath products"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string group_desc, action_desc, word_text, element_text, mode, out_path;
  std::string ea, eb, config_arg, prefix_override;
  Int radius = 6, seed = 0, bfs_cap = 64, fit_slack = 2;
  int tsp_cap = kDefaultTspCap;
  bool plot = false;
  std::string cache_dir;
  if (const char *dir = std::getenv("WREATH_CACHE_DIR"))
    cache_dir = dir;

  CLI::App *eval = app.add_subcommand("eval", "evaluate a lamplighter word");
  eval->add_option("--group", group_desc, "wreath descriptor, e.g. 'Z2 wr Z'");
  eval->add_option("--action", action_desc, "nonregular action JSON or file");
  eval->add_option("word", word_text, "whitespace-separated word")->required();

  CLI::App *norm = app.add_subcommand("norm", "norm or estimate of an element");
  norm->add_option("--group", group_desc)->required();
  norm->add_option("--mode", mode, "exact | bfs | estimate:N")->required();
  norm->add_option("--word", word_text);
  norm->add_option("--element", element_text, "element JSON or file");
  norm->add_option("--tsp-cap", tsp_cap);
  norm->add_option("--bfs-cap", bfs_cap);
  norm->add_option("--ea", ea, "lamp metric source: 'exact' or 'mult,add'");
  norm->add_option("--eb", eb, "base metric source: 'exact' or 'mult,add'");

  CLI::App *compare =
      app.add_subcommand("compare", "exact vs all estimate variants on a ball");
  compare->add_option("--group", group_desc)->required();
  compare->add_option("--radius", radius);
  compare->add_option("--seed", seed);
  compare->add_option("--ea", ea);
  compare->add_option("--eb", eb);
  compare->add_option("--fit-slack", fit_slack);
  compare->add_option("--tsp-cap", tsp_cap);
  compare->add_option("--bfs-cap", bfs_cap);
  compare->add_option("--out", out_path);

  CLI::App *distortion =
      app.add_subcommand("distortion", "distortion table experiment");
  distortion->add_option("--config", config_arg, "config JSON or file")
      ->required();
  distortion->add_option("--out-prefix", prefix_override);
  distortion->add_flag("--plot", plot, "also write a two-column n,delta CSV");

  CLI::App *orbits = app.add_subcommand("orbits", "orbit decomposition");
  orbits->add_option("--action", action_desc)->required();

  CLI::App *nonreg =
      app.add_subcommand("nonregular-norm", "estimate or BFS norm");
  nonreg->add_option("--action", action_desc, "action JSON with 'lamp'")
      ->required();
  nonreg->add_option("--mode", mode, "estimate | bfs")->required();
  nonreg->add_option("--word", word_text);
  nonreg->add_option("--element", element_text);
  nonreg->add_option("--bfs-cap", bfs_cap);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (eval->parsed())
      return cmd_eval(group_desc, action_desc, word_text);
    if (norm->parsed()) {
      bool use_word = norm->count("--word") > 0;
      if (use_word == (norm->count("--element") > 0))
        throw ParseError("give exactly one of --word and --element");
      return cmd_norm(group_desc, mode, use_word, word_text, element_text,
                      tsp_cap, bfs_cap, ea, eb, cache_dir);
    }
    if (compare->parsed())
      return cmd_compare(group_desc, radius, seed, ea, eb, fit_slack, tsp_cap,
                         bfs_cap, out_path);
    if (distortion->parsed())
      return cmd_distortion(config_arg, prefix_override, plot);
    if (orbits->parsed())
      return cmd_orbits(action_desc);
    if (nonreg->parsed()) {
      bool use_word = nonreg->count("--word") > 0;
      if (use_word == (nonreg->count("--element") > 0))
        throw ParseError("give exactly one of --word and --element");
      return cmd_nonregular_norm(action_desc, mode, use_word, word_text,
                                 element_text, bfs_cap, cache_dir);
    }
  } catch (const ParseError &e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception &e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const MismatchedGroups &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const OrbitMismatch &e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const TooLarge &e) {
    std::cerr << "resource cap: " << e.what()
              << " (raise --tsp-cap, or use a spanning-tree variant)\n";
    return 3;
  } catch (const ResourceLimit &e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 3;
  } catch (const NormUnreachable &e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 3;
  } catch (const InvariantViolation &e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
