#include "wreath/wreath.hpp"

#include <algorithm>

namespace wreath {

std::size_t hash_value(const WreathElement &x) {
  std::size_t h = 0x84222325cbf29ce4ull;
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (const auto &[position, value] : x.support) {
    mix(hash_value(position));
    mix(hash_value(value));
  }
  mix(hash_value(x.cursor));
  return h;
}

Wreath::Wreath(Group lamp, Group base)
    : lamp_(std::move(lamp)), base_(std::move(base)) {}

WreathElement Wreath::identity() const {
  return WreathElement{{}, base_.identity()};
}

bool Wreath::is_identity(const WreathElement &x) const {
  return x.support.empty() && base_.is_identity(x.cursor);
}

WreathElement
Wreath::make(std::vector<std::pair<GroupElement, GroupElement>> support,
             GroupElement cursor) const {
  std::sort(support.begin(), support.end(),
            [](const auto &a, const auto &b) {
              return element_less(a.first, b.first);
            });
  std::vector<std::pair<GroupElement, GroupElement>> merged;
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
  return WreathElement{std::move(merged), std::move(cursor)};
}

WreathElement Wreath::lamp_at(const GroupElement &position,
                              const GroupElement &value) const {
  return make({{position, value}}, base_.identity());
}

WreathElement Wreath::from_cursor(GroupElement cursor) const {
  return WreathElement{{}, std::move(cursor)};
}

WreathElement Wreath::multiply(const WreathElement &x,
                               const WreathElement &y) const {
  std::vector<std::pair<GroupElement, GroupElement>> support = x.support;
  support.reserve(x.support.size() + y.support.size());
  for (const auto &[position, value] : y.support)
    support.emplace_back(base_.multiply(x.cursor, position), value);
  return make(std::move(support), base_.multiply(x.cursor, y.cursor));
}

WreathElement Wreath::inverse(const WreathElement &x) const {
  GroupElement cursor_inv = base_.inverse(x.cursor);
  std::vector<std::pair<GroupElement, GroupElement>> support;
  support.reserve(x.support.size());
  for (const auto &[position, value] : x.support)
    support.emplace_back(base_.multiply(cursor_inv, position),
                         lamp_.inverse(value));
  return make(std::move(support), std::move(cursor_inv));
}

WreathElement Wreath::power(const WreathElement &x, Int n) const {
  WreathElement base = n < 0 ? inverse(x) : x;
  WreathElement acc = identity();
  for (Int i = 0; i < std::llabs(n); ++i)
    acc = multiply(acc, base);
  return acc;
}

WreathElement Wreath::evaluate(std::span<const WreathLetter> word,
                               const GeneratingSet &lamp_gens,
                               const GeneratingSet &move_gens) const {
  WreathElement acc = identity();
  for (const WreathLetter &letter : word) {
    if (letter.sign != 1 && letter.sign != -1)
      throw ParseError("letter sign must be +1 or -1");
    if (letter.lamp) {
      if (letter.index < 0 || letter.index >= lamp_gens.size())
        throw std::out_of_range("lamp generator index out of range");
      GroupElement g = lamp_gens.elements[letter.index];
      if (letter.sign < 0)
        g = lamp_.inverse(g);
      acc = multiply(acc, lamp_at(base_.identity(), g));
    } else {
      if (letter.index < 0 || letter.index >= move_gens.size())
        throw std::out_of_range("move generator index out of range");
      GroupElement g = move_gens.elements[letter.index];
      if (letter.sign < 0)
        g = base_.inverse(g);
      acc = multiply(acc, from_cursor(std::move(g)));
    }
  }
  return acc;
}

WreathElement Wreath::evaluate(std::span<const WreathLetter> word) const {
  return evaluate(word, GeneratingSet::standard(lamp_),
                  GeneratingSet::standard(base_));
}

WreathElement
Wreath::reconstruct_from_normal_form(const WreathElement &x) const {
  WreathElement acc = identity();
  for (const auto &[position, value] : x.support) {
    acc = multiply(acc, from_cursor(position));
    acc = multiply(acc, lamp_at(base_.identity(), value));
    acc = multiply(acc, from_cursor(base_.inverse(position)));
  }
  return multiply(acc, from_cursor(x.cursor));
}

nlohmann::json Wreath::element_to_json(const WreathElement &x) const {
  nlohmann::json support = nlohmann::json::array();
  for (const auto &[position, value] : x.support)
    support.push_back(
        {base_.element_to_json(position), lamp_.element_to_json(value)});
  return nlohmann::json{{"support", std::move(support)},
                        {"cursor", base_.element_to_json(x.cursor)}};
}

WreathElement Wreath::element_from_json(const nlohmann::json &j) const {
  if (!j.is_object() || !j.contains("support") || !j.contains("cursor"))
    throw ParseError("wreath element JSON needs 'support' and 'cursor'");
  std::vector<std::pair<GroupElement, GroupElement>> support;
  for (const auto &entry : j.at("support")) {
    if (!entry.is_array() || entry.size() != 2)
      throw ParseError("support entries are [position, value] pairs");
    support.emplace_back(base_.element_from_json(entry[0]),
                         lamp_.element_from_json(entry[1]));
  }
  return make(std::move(support), base_.element_from_json(j.at("cursor")));
}

std::string Wreath::element_compact(const WreathElement &x) const {
  std::string out;
  for (const auto &[position, value] : x.support) {
    out += "{";
    out += base_.element_compact(position);
    out += ":";
    out += lamp_.element_compact(value);
    out += "}";
  }
  out += "@";
  out += base_.element_compact(x.cursor);
  return out;
}

void Wreath::encode(const WreathElement &x, std::vector<Int> &out) const {
  out.push_back(x.support_size());
  for (const auto &[position, value] : x.support) {
    base_.encode(position, out);
    lamp_.encode(value, out);
  }
  base_.encode(x.cursor, out);
}

WreathElement Wreath::decode(std::span<const Int> data,
                             std::size_t &pos) const {
  WreathElement x;
  Int s = data[pos++];
  x.support.reserve(s);
  for (Int i = 0; i < s; ++i) {
    GroupElement position = base_.decode(data, pos);
    GroupElement value = lamp_.decode(data, pos);
    x.support.emplace_back(std::move(position), std::move(value));
  }
  x.cursor = base_.decode(data, pos);
  return x;
}

Wreath parse_wreath(std::string_view text) {
  std::size_t at = text.find(" wr ");
  if (at == std::string_view::npos)
    throw ParseError("wreath descriptor must look like 'A wr B'");
  return Wreath(Group::parse(text.substr(0, at)),
                Group::parse(text.substr(at + 4)));
}

namespace {

GeneratingSet relabeled_standard(const Group &group, const char *prefix) {
  GeneratingSet set = GeneratingSet::standard(group);
  if (set.size() == 1) {
    set.labels = {prefix};
  } else {
    for (int i = 0; i < set.size(); ++i)
      set.labels[i] = prefix + std::to_string(i + 1);
  }
  return set;
}

} // namespace

GeneratingSet lamp_generating_set(const Group &lamp) {
  return relabeled_standard(lamp, "a");
}

GeneratingSet move_generating_set(const Group &base) {
  return relabeled_standard(base, "t");
}

std::vector<WreathLetter> parse_word(const Wreath &w, std::string_view text) {
  GeneratingSet lamp_gens = lamp_generating_set(w.lamp_group());
  GeneratingSet move_gens = move_generating_set(w.base_group());
  std::vector<WreathLetter> word;
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

    WreathLetter letter;
    if (!token.empty() && token.back() == '-') {
      letter.sign = -1;
      token.pop_back();
    }
    bool found = false;
    for (int k = 0; k < lamp_gens.size() && !found; ++k)
      if (lamp_gens.labels[k] == token) {
        letter.lamp = true;
        letter.index = k;
        found = true;
      }
    for (int k = 0; k < move_gens.size() && !found; ++k)
      if (move_gens.labels[k] == token) {
        letter.lamp = false;
        letter.index = k;
        found = true;
      }
    if (!found)
      throw ParseError("unknown word token '" + token + "'");
    word.push_back(letter);
  }
  return word;
}

} // namespace wreath
