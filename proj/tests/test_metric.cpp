#include <doctest.h>

#include "oracles.hpp"
#include "wreath/metric.hpp"

using namespace wreath;

namespace {

const char *kStreetWord = "t t a t a t- t- t- t- a t- t- a t";

EstimateConfig variant(int v) {
  EstimateConfig config;
  config.variant = v;
  return config;
}

EstimateConfig perturbed(int v) {
  EstimateConfig config;
  config.variant = v;
  config.source_a = MetricSource::scaled(2, 1);
  config.source_b = MetricSource::scaled(2, 1);
  return config;
}

} // namespace

TEST_CASE("exact norm of the street-word element is 14") {
  Wreath w = parse_wreath("Z2 wr Z");
  MetricEngine engine(w);
  WreathElement x = w.evaluate(parse_word(w, kStreetWord));

  CHECK(engine.exact_norm(x) == 14);       // 4 lamps + path of length 10
  CHECK(engine.bfs_norm(x, 14) == 14);     // the group agrees
  CHECK(engine.bfs_norm(x, 13) == std::nullopt);

  CHECK(engine.exact_norm(w.identity()) == 0);
  CHECK(engine.exact_norm(w.from_cursor(
            w.base_group().element_from_json(-7))) == 7);
}

TEST_CASE("estimate examples") {
  Wreath w = parse_wreath("Z2 wr Z");
  MetricEngine engine(w);
  WreathElement x = w.evaluate(parse_word(w, kStreetWord));

  // Spanning tree over {0, -3, -1, 2, 3, -2} on the line spans 6.
  CHECK(engine.estimate(x, variant(1)) == 10);

  for (int v = 1; v <= 7; ++v) {
    CHECK(engine.estimate(w.identity(), variant(v)) == 0);
    CHECK(engine.estimate(w.identity(), perturbed(v)) == 0);
  }

  WreathElement cursor_only =
      w.from_cursor(w.base_group().element_from_json(5));
  CHECK(engine.estimate(cursor_only, variant(6)) == 10); // mu + exact E_B
}

TEST_CASE("exact norm equals the BFS norm on a radius-7 ball") {
  Wreath w = parse_wreath("Z2 wr Z");
  MetricEngine engine(w);
  engine.for_each_ball_element(7, [&](const WreathElement &x, Int norm) {
    CHECK(engine.exact_norm(x) == norm);
  });
}

TEST_CASE("variant bounds on a radius-6 ball") {
  Wreath w = parse_wreath("Z2 wr Z");
  MetricEngine engine(w);
  engine.for_each_ball_element(6, [&](const WreathElement &x, Int norm) {
    Int v1 = engine.estimate(x, variant(1)).value();
    CHECK(v1 <= norm);
    CHECK(norm <= 2 * v1);

    // Variant 2 with exact sources is the exact metric.
    CHECK(engine.estimate(x, variant(2)) == norm);

    // Variant 6 adds a cursor term dominated by the tree weight.
    Int v6 = engine.estimate(x, variant(6)).value();
    CHECK(v6 >= v1);
    CHECK(v6 <= 2 * v1);
  });
}

TEST_CASE("perturbed sources move every variant by bounded amounts") {
  Wreath w = parse_wreath("Z2 wr Z");
  MetricEngine engine(w);
  engine.for_each_ball_element(6, [&](const WreathElement &x, Int) {
    Int s = x.support_size();
    for (int v = 3; v <= 7; ++v) {
      Int plain = engine.estimate(x, variant(v)).value();
      Int moved = engine.estimate(x, perturbed(v)).value();
      CHECK(moved >= plain);              // the surrogate dominates pointwise
      CHECK(moved <= 2 * plain + 2 * (s + 1));
    }
  });
}

TEST_CASE("only variant 2 hits the path solver cap") {
  Wreath w = parse_wreath("Z2 wr Z");
  EngineOptions options;
  options.tsp_cap = 10;
  MetricEngine engine(w, options);

  std::vector<WreathLetter> word;
  for (int i = 0; i < 12; ++i) {
    word.push_back({true, 0, 1});
    word.push_back({false, 0, 1});
  }
  WreathElement wide = w.evaluate(word); // 12 lamps: 14 tour points

  CHECK_THROWS_AS(engine.exact_norm(wide), TooLarge);
  CHECK_THROWS_AS(engine.estimate(wide, variant(2)), TooLarge);
  for (int v : {1, 3, 4, 5, 6, 7})
    CHECK(engine.estimate(wide, variant(v)).has_value());
}

TEST_CASE("factor norm caps surface as unreachable") {
  Wreath w = parse_wreath("Z2 wr H3");
  EngineOptions options;
  options.norm_cap = 2;
  MetricEngine engine(w, options);
  // Cursor z = (0,0,1) has base norm 4, beyond the cap.
  WreathElement x = w.from_cursor(
      w.base_group().element_from_json(nlohmann::json{0, 0, 1}));
  CHECK(engine.exact_norm(x) == std::nullopt);
  CHECK(engine.estimate(x, variant(1)) == std::nullopt);
}

TEST_CASE("fitting equivalence constants") {
  std::vector<std::pair<Int, Int>> identical;
  for (Int i = 0; i <= 20; ++i)
    identical.emplace_back(i, i);
  CHECK(fit_equivalence_constants(identical).C == doctest::Approx(1.0));

  std::vector<std::pair<Int, Int>> doubled;
  for (Int i = 0; i <= 20; ++i)
    doubled.emplace_back(2 * i, i);
  FitResult fit = fit_equivalence_constants(doubled, 2);
  CHECK(fit.bounded);
  CHECK(fit.C <= 2.0);
  CHECK(fit.C == doctest::Approx((40.0 - 2.0) / 20.0));
  CHECK(fit.witness == 20); // the extreme pair forces the constant

  std::vector<std::pair<Int, Int>> degenerate{{0, 5}};
  CHECK(!fit_equivalence_constants(degenerate, 0).bounded);

  CHECK_THROWS_AS(fit_equivalence_constants({}), std::invalid_argument);
}

TEST_CASE("variant 1 fits the exact norm within C = 2 on a ball") {
  Wreath w = parse_wreath("Z2 wr Z");
  MetricEngine engine(w);
  std::vector<std::pair<Int, Int>> sample;
  engine.for_each_ball_element(6, [&](const WreathElement &x, Int norm) {
    sample.emplace_back(engine.estimate(x, variant(1)).value(), norm);
  });
  FitResult fit = fit_equivalence_constants(sample);
  CHECK(fit.bounded);
  CHECK(fit.C <= 2.0);
}

TEST_CASE("estimate CSV rows") {
  Wreath w = parse_wreath("Z2 wr Z");
  MetricEngine engine(w);
  WreathElement x = w.evaluate(parse_word(w, kStreetWord));
  std::vector<WreathElement> elements{w.identity(), x};
  std::string csv = estimate_csv(engine, elements, variant(1));
  CHECK(csv.find("id,variant,value,exact,ratio") == 0);
  CHECK(csv.find(",1,10,14,1.4000") != std::string::npos);
  CHECK(csv.find("@0,1,0,0,1.0000") != std::string::npos);
}

TEST_CASE("ball enumeration is deterministic") {
  Wreath w = parse_wreath("Z2 wr Z");
  MetricEngine engine(w);
  auto first = engine.ball(5);
  auto second = engine.ball(5);
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].first == second[i].first);
    CHECK(first[i].second == second[i].second);
  }
}
