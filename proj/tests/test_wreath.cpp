#include <doctest.h>

#include "oracles.hpp"
#include "wreath/wreath.hpp"

using namespace wreath;

namespace {

const char *kStreetWord = "t t a t a t- t- t- t- a t- t- a t";

WreathElement random_element(const Wreath &w, oracles::Rng &rng, int length) {
  std::vector<WreathLetter> word;
  const int lamps = w.lamp_group().generator_count();
  const int moves = w.base_group().generator_count();
  for (int i = 0; i < length; ++i) {
    WreathLetter letter;
    letter.lamp = rng.uniform(0, 2) == 0; // moves twice as likely: spread out
    letter.index = static_cast<int>(
        rng.uniform(0, (letter.lamp ? lamps : moves) - 1));
    letter.sign = rng.uniform(0, 1) ? 1 : -1;
    word.push_back(letter);
  }
  return w.evaluate(word);
}

WreathElement lamp_int(const Wreath &w, Int position, Int value) {
  return w.lamp_at(w.base_group().element_from_json(position),
                   w.lamp_group().element_from_json(value));
}

WreathElement with_cursor(const Wreath &w, const WreathElement &x, Int cursor) {
  return w.multiply(
      x, w.from_cursor(w.base_group().element_from_json(cursor)));
}

} // namespace

TEST_CASE("lamplighter street word") {
  Wreath w = parse_wreath("Z2 wr Z");
  WreathElement x = w.evaluate(parse_word(w, kStreetWord));
  REQUIRE(x.support.size() == 4);
  std::vector<Int> positions;
  for (const auto &[position, value] : x.support) {
    positions.push_back(position.parts[0][0]);
    CHECK(value.parts[0][0] == 1);
  }
  CHECK(positions == std::vector<Int>{-3, -1, 2, 3});
  CHECK(x.cursor.parts[0][0] == -2);
}

TEST_CASE("multiplication moves the second support by the first cursor") {
  Wreath w = parse_wreath("Z2 wr Z");
  WreathElement left = with_cursor(w, lamp_int(w, 1, 1), 1);
  WreathElement right = with_cursor(w, lamp_int(w, 1, 1), -1);
  WreathElement product = w.multiply(left, right);
  REQUIRE(product.support.size() == 2);
  CHECK(product.support[0].first.parts[0][0] == 1);
  CHECK(product.support[1].first.parts[0][0] == 2);
  CHECK(w.base_group().is_identity(product.cursor));
}

TEST_CASE("conjugating a lamp by a cursor moves it there") {
  for (const char *desc : {"Z2 wr Z", "Z wr H3", "Z/3 wr F2"}) {
    Wreath w = parse_wreath(desc);
    oracles::Rng rng(42);
    for (int i = 0; i < 20; ++i) {
      GroupElement b = rng.element(w.base_group(), 4);
      GroupElement a = rng.element(w.lamp_group(), 3);
      if (w.lamp_group().is_identity(a))
        continue;
      WreathElement conj = w.multiply(
          w.multiply(w.from_cursor(b),
                     w.lamp_at(w.base_group().identity(), a)),
          w.from_cursor(w.base_group().inverse(b)));
      CHECK(conj == w.lamp_at(b, a));
    }
  }
}

TEST_CASE("inverse examples") {
  Wreath w = parse_wreath("Z2 wr Z");
  CHECK(w.inverse(w.identity()) == w.identity());

  WreathElement x = with_cursor(w, lamp_int(w, 2, 1), 3);
  WreathElement expected = with_cursor(w, lamp_int(w, -1, 1), -3);
  CHECK(w.inverse(x) == expected);
  CHECK(w.is_identity(w.multiply(x, w.inverse(x))));

  GroupElement b = w.base_group().element_from_json(5);
  CHECK(w.inverse(w.from_cursor(b)) ==
        w.from_cursor(w.base_group().inverse(b)));
}

TEST_CASE("inverse law on random elements") {
  oracles::Rng rng(17);
  for (const char *desc : {"Z2 wr Z", "Z wr Z^2", "Z/3 wr F2"}) {
    Wreath w = parse_wreath(desc);
    for (int i = 0; i < 30; ++i) {
      WreathElement x = random_element(w, rng, 12);
      CHECK(w.is_identity(w.multiply(x, w.inverse(x))));
      CHECK(w.is_identity(w.multiply(w.inverse(x), x)));
    }
  }
}

TEST_CASE("associativity on random triples") {
  oracles::Rng rng(99);
  for (const char *desc : {"Z2 wr Z", "Z wr H3", "Z/4 wr Z^2"}) {
    Wreath w = parse_wreath(desc);
    for (int i = 0; i < 30; ++i) {
      WreathElement x = random_element(w, rng, 8);
      WreathElement y = random_element(w, rng, 8);
      WreathElement z = random_element(w, rng, 8);
      CHECK(w.multiply(w.multiply(x, y), z) == w.multiply(x, w.multiply(y, z)));
    }
  }
}

TEST_CASE("powers") {
  Wreath w = parse_wreath("Z2 wr Z");

  WreathElement a = lamp_int(w, 0, 1);
  CHECK(w.is_identity(w.power(a, 2))); // torsion lamps cancel

  WreathElement at = with_cursor(w, a, 1);
  WreathElement cubed = w.power(at, 3);
  REQUIRE(cubed.support.size() == 3);
  for (Int p = 0; p < 3; ++p)
    CHECK(cubed.support[p].first.parts[0][0] == p);
  CHECK(cubed.cursor.parts[0][0] == 3);

  CHECK(w.is_identity(w.power(at, 0)));
  CHECK(w.power(at, -2) == w.inverse(w.power(at, 2)));
}

TEST_CASE("power is additive in the exponent") {
  oracles::Rng rng(5);
  Wreath w = parse_wreath("Z2 wr Z");
  for (int i = 0; i < 15; ++i) {
    WreathElement x = random_element(w, rng, 8);
    for (Int m : {-2, 0, 1, 3})
      for (Int n : {-1, 2, 4})
        CHECK(w.power(x, m + n) == w.multiply(w.power(x, m), w.power(x, n)));
  }
}

TEST_CASE("support stays canonical") {
  oracles::Rng rng(3);
  Wreath w = parse_wreath("Z/3 wr Z^2");
  for (int i = 0; i < 40; ++i) {
    WreathElement x = random_element(w, rng, 14);
    for (std::size_t k = 0; k < x.support.size(); ++k) {
      CHECK(!w.lamp_group().is_identity(x.support[k].second));
      if (k + 1 < x.support.size())
        CHECK(compare(x.support[k].first, x.support[k + 1].first) < 0);
    }
  }
}

TEST_CASE("support size is subadditive") {
  oracles::Rng rng(31);
  Wreath w = parse_wreath("Z2 wr Z");
  for (int i = 0; i < 40; ++i) {
    WreathElement x = random_element(w, rng, 10);
    WreathElement y = random_element(w, rng, 10);
    CHECK(w.multiply(x, y).support_size() <=
          x.support_size() + y.support_size());
  }
}

TEST_CASE("normal form reconstruction is the identity map") {
  oracles::Rng rng(8);
  for (const char *desc : {"Z2 wr Z", "Z wr H3"}) {
    Wreath w = parse_wreath(desc);
    CHECK(w.reconstruct_from_normal_form(w.identity()) == w.identity());
    for (int i = 0; i < 25; ++i) {
      WreathElement x = random_element(w, rng, 10);
      CHECK(w.reconstruct_from_normal_form(x) == x);
    }
  }
}

TEST_CASE("word evaluation edge cases") {
  Wreath w = parse_wreath("Z2 wr Z");
  CHECK(w.is_identity(w.evaluate(std::vector<WreathLetter>{})));
  CHECK(w.is_identity(w.evaluate(parse_word(w, "a a"))));
  CHECK_THROWS_AS(parse_word(w, "a b t"), ParseError);
}

TEST_CASE("word evaluation over custom generating sets") {
  Wreath w = parse_wreath("Z wr Z");
  // Lamps write +2, moves jump by 3.
  GeneratingSet lamp_gens{{w.lamp_group().element_from_json(2)}, {"a"}};
  GeneratingSet move_gens{{w.base_group().element_from_json(3)}, {"t"}};
  std::vector<WreathLetter> word{{true, 0, 1}, {false, 0, 1}, {true, 0, -1}};
  WreathElement x = w.evaluate(word, lamp_gens, move_gens);
  REQUIRE(x.support.size() == 2);
  CHECK(x.support[0].first.parts[0][0] == 0);
  CHECK(x.support[0].second.parts[0][0] == 2);
  CHECK(x.support[1].first.parts[0][0] == 3);
  CHECK(x.support[1].second.parts[0][0] == -2);
  CHECK(x.cursor.parts[0][0] == 3);
}

TEST_CASE("element JSON round trips and stays canonical") {
  Wreath w = parse_wreath("Z2 wr Z");
  WreathElement x = w.evaluate(parse_word(w, kStreetWord));
  nlohmann::json j = w.element_to_json(x);
  CHECK(w.element_from_json(j) == x);
  // Out-of-order, duplicated support entries normalize away.
  nlohmann::json messy{
      {"support", {{3, 1}, {0, 1}, {0, 1}, {5, 0}}},
      {"cursor", 2},
  };
  WreathElement y = w.element_from_json(messy);
  REQUIRE(y.support.size() == 1);
  CHECK(y.support[0].first.parts[0][0] == 3);

  oracles::Rng rng(12);
  Wreath wh = parse_wreath("Z wr H3");
  for (int i = 0; i < 20; ++i) {
    WreathElement r = random_element(wh, rng, 10);
    CHECK(wh.element_from_json(wh.element_to_json(r)) == r);
  }
}

TEST_CASE("encode/decode round trips") {
  oracles::Rng rng(71);
  for (const char *desc : {"Z2 wr Z", "Z wr H3", "Z/3 wr F2"}) {
    Wreath w = parse_wreath(desc);
    for (int i = 0; i < 25; ++i) {
      WreathElement x = random_element(w, rng, 12);
      std::vector<Int> buffer;
      w.encode(x, buffer);
      std::size_t pos = 0;
      CHECK(w.decode(buffer, pos) == x);
      CHECK(pos == buffer.size());
    }
  }
}

TEST_CASE("wreath descriptor errors") {
  CHECK_THROWS_AS(parse_wreath("Z2"), ParseError);
  CHECK_THROWS_AS(parse_wreath("Q wr Z"), ParseError);
}
