#include <doctest.h>

#include "oracles.hpp"
#include "wreath/nonregular.hpp"

using namespace wreath;

namespace {

NonregularWreath lamplighter_mod(Int k) {
  return NonregularWreath(Group::parse("Z2"),
                          OmegaAction(Group::parse("Z"),
                                      {CycleComponent{k, {}}}));
}

NonregularElement random_element(const NonregularWreath &w, oracles::Rng &rng,
                                 int length) {
  std::vector<NonregularLetter> word;
  const int lamps = w.lamp_group().generator_count();
  const int moves = w.base_group().generator_count();
  for (int i = 0; i < length; ++i) {
    NonregularLetter letter;
    letter.lamp = rng.uniform(0, 2) == 0;
    letter.orbit = static_cast<int>(rng.uniform(0, w.orbit_count() - 1));
    letter.index = static_cast<int>(
        rng.uniform(0, (letter.lamp ? lamps : moves) - 1));
    letter.sign = rng.uniform(0, 1) ? 1 : -1;
    word.push_back(letter);
  }
  return w.evaluate(word);
}

NonregularElement make_mod3(const NonregularWreath &w, std::vector<Int> lamps,
                            Int cursor) {
  std::vector<std::pair<OmegaPoint, GroupElement>> support;
  for (Int p : lamps)
    support.emplace_back(OmegaPoint{0, p},
                         w.lamp_group().element_from_json(1));
  return w.make(std::move(support),
                w.base_group().element_from_json(cursor));
}

} // namespace

TEST_CASE("conjugation moves the lamp along the action") {
  NonregularWreath w = lamplighter_mod(3);
  NonregularElement conj = w.multiply(
      w.multiply(w.from_cursor(w.base_group().element_from_json(1)),
                 w.lamp_at(OmegaPoint{0, Int{0}},
                           w.lamp_group().element_from_json(1))),
      w.from_cursor(w.base_group().element_from_json(-1)));
  CHECK(conj == make_mod3(w, {1}, 0));
}

TEST_CASE("group laws on random elements") {
  oracles::Rng rng(404);
  std::vector<NonregularWreath> products;
  products.push_back(lamplighter_mod(3));
  products.push_back(NonregularWreath(
      Group::parse("Z2"),
      OmegaAction(Group::parse("Z"),
                  {CycleComponent{3, {}}, CycleComponent{2, {}}})));
  products.push_back(NonregularWreath(
      Group::parse("Z"), OmegaAction::regular(Group::parse("Z^2"))));
  for (const NonregularWreath &w : products) {
    for (int i = 0; i < 25; ++i) {
      NonregularElement x = random_element(w, rng, 10);
      NonregularElement y = random_element(w, rng, 10);
      NonregularElement z = random_element(w, rng, 10);
      CHECK(w.multiply(w.multiply(x, y), z) == w.multiply(x, w.multiply(y, z)));
      CHECK(w.is_identity(w.multiply(x, w.inverse(x))));
    }
  }
}

TEST_CASE("support stays canonical and minimal") {
  oracles::Rng rng(11);
  NonregularWreath w = lamplighter_mod(3);
  for (int i = 0; i < 40; ++i) {
    NonregularElement x = random_element(w, rng, 12);
    for (std::size_t k = 0; k < x.support.size(); ++k) {
      CHECK(!w.lamp_group().is_identity(x.support[k].second));
      if (k + 1 < x.support.size())
        CHECK(compare(x.support[k].first, x.support[k + 1].first) < 0);
    }
  }
}

TEST_CASE("the regular action reproduces the regular product") {
  Wreath regular = parse_wreath("Z2 wr Z");
  NonregularWreath w(Group::parse("Z2"),
                     OmegaAction::regular(Group::parse("Z")));
  auto lift = [&](const WreathElement &x) {
    std::vector<std::pair<OmegaPoint, GroupElement>> support;
    for (const auto &[position, value] : x.support)
      support.emplace_back(OmegaPoint{0, position}, value);
    return w.make(std::move(support), x.cursor);
  };

  oracles::Rng rng(6);
  for (int i = 0; i < 30; ++i) {
    std::vector<WreathLetter> word;
    for (int k = 0; k < 10; ++k)
      word.push_back({rng.uniform(0, 1) == 0,
                      0,
                      rng.uniform(0, 1) ? 1 : -1});
    WreathElement x = regular.evaluate(word);
    WreathElement y = regular.evaluate(
        std::span(word).subspan(0, 5));
    CHECK(lift(regular.multiply(x, y)) == w.multiply(lift(x), lift(y)));
    CHECK(lift(regular.inverse(x)) == w.inverse(lift(x)));
  }
}

TEST_CASE("estimate examples") {
  NonregularWreath w = lamplighter_mod(3);
  NonregularMetric metric(w);

  CHECK(metric.estimate(w.identity()) == 0);

  // Full three-lamp element: 3 lamps + spanning tree of the triangle. The
  // true norm is 7 (a t a t a t- t-): both sides of the factor-2 envelope.
  NonregularElement full = make_mod3(w, {0, 1, 2}, 0);
  CHECK(metric.estimate(full) == 5);
  CHECK(metric.bfs_norm(full, 8) == 7);
  CHECK(metric.bfs_norm(w.identity(), 4) == 0);

  // One lamp at the basepoint: a single generator.
  NonregularElement single = make_mod3(w, {0}, 0);
  CHECK(metric.estimate(single) == 1);
  CHECK(metric.bfs_norm(single, 4) == 1);
}

TEST_CASE("the estimate is not a pointwise upper bound on the norm") {
  // Lamps at 0 and 2 with the cursor home: the true norm is 4 (a t- a t)
  // because the walk must return, while the estimate charges only the
  // one-edge tree between the two lamps.
  NonregularWreath w = lamplighter_mod(3);
  NonregularMetric metric(w);
  NonregularElement x = make_mod3(w, {0, 2}, 0);
  CHECK(metric.estimate(x) == 3);
  CHECK(metric.bfs_norm(x, 8) == 4);
}

TEST_CASE("two-sided bounds against the BFS norm") {
  NonregularWreath w = lamplighter_mod(3);
  NonregularMetric metric(w);
  const Int omega = w.orbit_count();
  metric.for_each_ball_element(6, [&](const NonregularElement &x, Int norm) {
    Int est = metric.estimate(x).value();
    CHECK(est <= (omega + 1) * norm);

    // Doubling every orbit tree gives an honest word construction.
    Int lamp_sum = 0;
    for (const auto &[point, value] : x.support)
      lamp_sum += metric.lamp_norm(value).value();
    Int trees = 0;
    for (int j = 0; j < w.orbit_count(); ++j)
      trees += metric.orbit_tree_weight(x, j).value();
    Int cursor = metric.base_norm(x.cursor).value();
    CHECK(norm <= lamp_sum + 2 * trees + cursor);
  });
}

TEST_CASE("estimate moves by at most orbits + 1 along generators") {
  // Exhaustive on a small ball of the two-orbit product, random elsewhere.
  NonregularWreath two_orbits(
      Group::parse("Z2"),
      OmegaAction(Group::parse("Z"),
                  {CycleComponent{3, {}}, CycleComponent{2, {}}}));
  NonregularMetric metric(two_orbits);
  const Int bound = two_orbits.orbit_count() + 1;

  std::vector<NonregularLetter> generators;
  for (int orbit = 0; orbit < two_orbits.orbit_count(); ++orbit)
    generators.push_back({true, orbit, 0, 1});
  generators.push_back({false, 0, 0, 1});
  generators.push_back({false, 0, 0, -1});

  auto check_around = [&](const NonregularElement &x) {
    Int here = metric.estimate(x).value();
    for (const NonregularLetter &g : generators) {
      NonregularElement moved =
          two_orbits.multiply(x, two_orbits.evaluate(std::span(&g, 1)));
      Int there = metric.estimate(moved).value();
      CHECK(std::llabs(there - here) <= bound);
    }
  };

  metric.for_each_ball_element(
      5, [&](const NonregularElement &x, Int) { check_around(x); });

  NonregularWreath mod5 = lamplighter_mod(5);
  NonregularMetric metric5(mod5);
  oracles::Rng rng(31);
  for (int i = 0; i < 40; ++i) {
    NonregularElement x = random_element(mod5, rng, 10);
    Int here = metric5.estimate(x).value();
    for (int sign : {1, -1}) {
      NonregularLetter move{false, 0, 0, sign};
      NonregularLetter lamp{true, 0, 0, 1};
      for (const NonregularLetter &g : {move, lamp}) {
        NonregularElement moved =
            mod5.multiply(x, mod5.evaluate(std::span(&g, 1)));
        CHECK(std::llabs(metric5.estimate(moved).value() - here) <=
              mod5.orbit_count() + 1);
      }
    }
  }
}

TEST_CASE("regular actions agree with the regular engine's variant 6") {
  Wreath regular = parse_wreath("Z2 wr Z");
  MetricEngine engine(regular);
  NonregularWreath w(Group::parse("Z2"),
                     OmegaAction::regular(Group::parse("Z")));
  NonregularMetric metric(w);
  EstimateConfig v6;
  v6.variant = 6;

  oracles::Rng rng(13);
  engine.for_each_ball_element(6, [&](const WreathElement &x, Int) {
    std::vector<std::pair<OmegaPoint, GroupElement>> support;
    for (const auto &[position, value] : x.support)
      support.emplace_back(OmegaPoint{0, position}, value);
    NonregularElement lifted = w.make(std::move(support), x.cursor);
    CHECK(metric.estimate(lifted) == engine.estimate(x, v6));
  });
}

TEST_CASE("orbit-tagged words") {
  NonregularWreath w(
      Group::parse("Z2"),
      OmegaAction(Group::parse("Z"),
                  {CycleComponent{3, {}}, CycleComponent{2, {}}}));
  NonregularElement x = w.evaluate(parse_word(w, "a@1 t a@2 t-"));
  REQUIRE(x.support.size() == 2);
  CHECK(x.support[0].first == OmegaPoint{0, Int{0}});
  CHECK(x.support[1].first == OmegaPoint{1, Int{1}});
  CHECK(w.base_group().is_identity(x.cursor));

  CHECK_THROWS_AS(parse_word(w, "a@3"), ParseError);
  CHECK_THROWS_AS(parse_word(w, "t@1"), ParseError);
  CHECK_THROWS_AS(parse_word(w, "b"), ParseError);
}

TEST_CASE("element JSON round trips") {
  oracles::Rng rng(88);
  NonregularWreath w(
      Group::parse("Z2"),
      OmegaAction(Group::parse("Z"),
                  {CycleComponent{3, {}}, RegularComponent{}}));
  for (int i = 0; i < 20; ++i) {
    NonregularElement x = random_element(w, rng, 10);
    CHECK(w.element_from_json(w.element_to_json(x)) == x);
    std::vector<Int> buffer;
    w.encode(x, buffer);
    std::size_t pos = 0;
    CHECK(w.decode(buffer, pos) == x);
  }
}
