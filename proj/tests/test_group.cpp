#include <doctest.h>

#include <set>
#include <unordered_set>

#include "oracles.hpp"
#include "wreath/ball.hpp"
#include "wreath/group.hpp"

using namespace wreath;

namespace {

GroupElement elem(const Group &g, const nlohmann::json &j) {
  return g.element_from_json(j);
}

const std::vector<std::string> kBuiltins = {"Z",  "Z^2", "Z/5",
                                            "F2", "H3",  "Z x Z/3"};

} // namespace

TEST_CASE("group descriptors parse and print") {
  for (const auto &text : kBuiltins)
    CHECK(Group::parse(text).to_string() == text);
  CHECK(Group::parse("Z2").to_string() == "Z/2");
  CHECK(Group::parse("Z5").to_string() == "Z/5");
  CHECK_THROWS_AS(Group::parse("Q"), ParseError);
  CHECK_THROWS_AS(Group::parse("Z^0"), ParseError);
  CHECK_THROWS_AS(Group::parse("Z/1"), ParseError);
  CHECK_THROWS_AS(Group::parse(""), ParseError);
}

TEST_CASE("multiplication examples") {
  Group z2 = Group::parse("Z^2");
  CHECK(z2.multiply(elem(z2, {1, 2}), elem(z2, {3, -1})) == elem(z2, {4, 1}));

  Group h3 = Group::parse("H3");
  CHECK(h3.multiply(elem(h3, {1, 0, 0}), elem(h3, {0, 1, 0})) ==
        elem(h3, {1, 1, 1}));

  Group f2 = Group::parse("F2");
  CHECK(f2.multiply(elem(f2, {1}), elem(f2, {-1})) == f2.identity());

  CHECK_THROWS_AS(z2.multiply(elem(z2, {1, 2}), h3.identity()),
                  MismatchedGroups);
}

TEST_CASE("word evaluation examples") {
  Group z = Group::parse("Z");
  CHECK(z.evaluate_word(std::vector<int>{1, 1, -1}) == elem(z, 1));

  Group h3 = Group::parse("H3");
  CHECK(h3.evaluate_word(std::vector<int>{1, 2, -1, -2}) == elem(h3, {0, 0, 1}));

  Group f2 = Group::parse("F2");
  CHECK(f2.evaluate_word(std::vector<int>{1, 2, -2, 1}) == elem(f2, {1, 1}));

  CHECK_THROWS_AS(z.evaluate_word(std::vector<int>{2}), std::out_of_range);
  CHECK_THROWS_AS(z.evaluate_word(std::vector<int>{0}), std::out_of_range);
}

TEST_CASE("closed-form norms") {
  Group z2 = Group::parse("Z^2");
  auto std_z2 = GeneratingSet::standard(z2);
  CHECK(word_norm(z2, std_z2, elem(z2, {2, -3}), 100) == 5);

  Group z5 = Group::parse("Z/5");
  CHECK(word_norm(z5, GeneratingSet::standard(z5), elem(z5, 4), 100) == 1);

  Group mixed = Group::parse("Z x Z/3");
  CHECK(word_norm(mixed, GeneratingSet::standard(mixed), elem(mixed, {-4, 2}),
                  100) == 5);
}

TEST_CASE("norms over custom generating sets fall back to BFS") {
  // Z/5 generated by 2: every residue is within two steps.
  Group z5 = Group::parse("Z/5");
  GeneratingSet doubled{{elem(z5, 2)}, {"g"}};
  CHECK(word_norm(z5, doubled, elem(z5, 2), 10) == 1);
  CHECK(word_norm(z5, doubled, elem(z5, 1), 10) == 2); // 2 + 2 + 2 = 6 = 1
  CHECK(word_norm(z5, doubled, elem(z5, 0), 10) == 0);

  // 2Z inside Z never reaches odd numbers; the search exhausts and says so.
  Group z = Group::parse("Z");
  GeneratingSet evens{{elem(z, 2)}, {"g"}};
  CHECK(word_norm(z, evens, elem(z, 6), 10) == 3);
  CHECK(word_norm(z, evens, elem(z, 7), 10) == std::nullopt);
}

TEST_CASE("H3 norm of the central generator is 4") {
  Group h3 = Group::parse("H3");
  GroupElement z = elem(h3, {0, 0, 1});

  // Independent oracle: no word of length <= 3 evaluates to z, and some
  // length-4 word does.
  bool found_short = false, found4 = false;
  oracles::for_each_word(2, 4, [&](const std::vector<int> &word) {
    if (h3.evaluate_word(word) == z) {
      if (word.size() <= 3)
        found_short = true;
      else
        found4 = true;
    }
  });
  CHECK(!found_short);
  CHECK(found4);

  CHECK(word_norm(h3, GeneratingSet::standard(h3), z, 10) == 4);
  CHECK(word_norm(h3, GeneratingSet::standard(h3), z, 3) == std::nullopt);
}

TEST_CASE("balls") {
  Group z = Group::parse("Z");
  auto ball_z = ball(z, GeneratingSet::standard(z), 2);
  REQUIRE(ball_z.size() == 5);
  std::set<Int> lengths;
  for (const auto &entry : ball_z)
    lengths.insert(entry.length);
  CHECK(lengths == std::set<Int>{0, 1, 2});

  Group f2 = Group::parse("F2");
  CHECK(ball(f2, GeneratingSet::standard(f2), 1).size() == 5);

  // H3 ball vs. independent word enumeration.
  Group h3 = Group::parse("H3");
  std::set<std::vector<std::vector<Int>>> reached;
  oracles::for_each_word(2, 3, [&](const std::vector<int> &word) {
    reached.insert(h3.evaluate_word(word).parts);
  });
  auto ball_h3 = ball(h3, GeneratingSet::standard(h3), 3);
  CHECK(ball_h3.size() == reached.size());
  for (const auto &entry : ball_h3)
    CHECK(reached.count(entry.element.parts) == 1);
}

TEST_CASE("ball respects the state budget") {
  Group f2 = Group::parse("F2");
  SearchLimits limits;
  limits.max_states = 100;
  CHECK_THROWS_AS(ball(f2, GeneratingSet::standard(f2), 10, limits),
                  ResourceLimit);
}

TEST_CASE("group axioms on random elements") {
  oracles::Rng rng(20240811);
  for (const auto &text : kBuiltins) {
    Group g = Group::parse(text);
    for (int i = 0; i < 50; ++i) {
      GroupElement a = rng.element(g, 6);
      GroupElement b = rng.element(g, 6);
      GroupElement c = rng.element(g, 6);
      CHECK(g.multiply(g.multiply(a, b), c) == g.multiply(a, g.multiply(b, c)));
      CHECK(g.multiply(a, g.identity()) == a);
      CHECK(g.multiply(g.identity(), a) == a);
      CHECK(g.is_identity(g.multiply(a, g.inverse(a))));
      CHECK(g.is_identity(g.multiply(g.inverse(a), a)));
    }
  }
}

TEST_CASE("norm is symmetric under inversion on a radius-6 ball") {
  for (const auto &text : {"Z^2", "Z/5", "F2", "H3"}) {
    Group g = Group::parse(text);
    auto gens = GeneratingSet::standard(g);
    NormCache norms(g, gens);
    for (const auto &entry : ball(g, gens, 6)) {
      auto n = norms.norm(g.inverse(entry.element), 6);
      REQUIRE(n.has_value());
      CHECK(*n == entry.length);
    }
  }
}

TEST_CASE("closed forms agree with BFS lengths on radius-6 balls") {
  for (const auto &text : {"Z^2", "Z/5", "F2"}) {
    Group g = Group::parse(text);
    for (const auto &entry : ball(g, GeneratingSet::standard(g), 6))
      CHECK(g.closed_form_norm(entry.element) == entry.length);
  }
}

TEST_CASE("triangle inequality on random pairs from a radius-5 ball") {
  oracles::Rng rng(7);
  for (const auto &text : {"Z^2", "H3", "F2"}) {
    Group g = Group::parse(text);
    auto gens = GeneratingSet::standard(g);
    auto entries = ball(g, gens, 5);
    NormCache norms(g, gens);
    for (int i = 0; i < 100; ++i) {
      const auto &x = entries[rng.uniform(0, entries.size() - 1)];
      const auto &y = entries[rng.uniform(0, entries.size() - 1)];
      auto n = norms.norm(g.multiply(x.element, y.element), 10);
      REQUIRE(n.has_value());
      CHECK(*n <= x.length + y.length);
    }
  }
}

TEST_CASE("ball lengths change by at most one along generators") {
  Group g = Group::parse("Z x Z/3");
  auto gens = GeneratingSet::standard(g);
  std::unordered_map<GroupElement, Int, GroupElementHash> lengths;
  for (const auto &entry : ball(g, gens, 5))
    lengths.emplace(entry.element, entry.length);
  for (const auto &[element, length] : lengths) {
    for (const auto &gen : gens.elements) {
      auto it = lengths.find(g.multiply(element, gen));
      if (it != lengths.end())
        CHECK(std::llabs(it->second - length) <= 1);
      else
        CHECK(length >= 5); // neighbors may only be missing at the boundary
    }
  }
}

TEST_CASE("element JSON round trips") {
  oracles::Rng rng(99);
  for (const auto &text : kBuiltins) {
    Group g = Group::parse(text);
    for (int i = 0; i < 20; ++i) {
      GroupElement x = rng.element(g, 5);
      CHECK(g.element_from_json(g.element_to_json(x)) == x);
    }
  }
  Group z5 = Group::parse("Z/5");
  CHECK(elem(z5, -1) == elem(z5, 4)); // residues normalize into range
  Group f1 = Group::parse("F1");
  CHECK(f1.element_from_json(nlohmann::json{1, -1}) == f1.identity());
}

TEST_CASE("encode/decode round trips") {
  oracles::Rng rng(123);
  for (const auto &text : kBuiltins) {
    Group g = Group::parse(text);
    for (int i = 0; i < 20; ++i) {
      GroupElement x = rng.element(g, 6);
      std::vector<Int> buffer;
      g.encode(x, buffer);
      std::size_t pos = 0;
      CHECK(g.decode(buffer, pos) == x);
      CHECK(pos == buffer.size());
    }
  }
}

TEST_CASE("generator labels are unique") {
  for (const auto &text : {"Z", "Z^3", "F2", "H3", "Z x Z", "H3 x F2 x Z/4"}) {
    Group g = Group::parse(text);
    auto labels = g.generator_labels();
    REQUIRE(static_cast<int>(labels.size()) == g.generator_count());
    std::set<std::string> unique(labels.begin(), labels.end());
    CHECK(unique.size() == labels.size());
  }
}

TEST_CASE("canonical element order is total and consistent") {
  Group f2 = Group::parse("F2");
  GroupElement a = elem(f2, {1});
  GroupElement b = elem(f2, {1, 2});
  CHECK(compare(a, a) == 0);
  CHECK(compare(a, b) < 0); // shortlex: shorter first
  CHECK(compare(b, a) > 0);
}

TEST_CASE("norm cache persists and reloads") {
  Group h3 = Group::parse("H3");
  auto gens = GeneratingSet::standard(h3);
  NormCache original(h3, gens);
  GroupElement z = elem(h3, {0, 0, 1});
  CHECK(original.norm(z, 6) == 4);
  original.save("/tmp");

  NormCache reloaded(h3, gens);
  CHECK(reloaded.try_load("/tmp"));
  CHECK(reloaded.grown_radius() == original.grown_radius());
  CHECK(reloaded.norm(z, 6) == 4);
  CHECK(reloaded.norm(elem(h3, {0, 0, 2}), 8) == 6);
}
