#include "wreath/group.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace wreath {

namespace {

Int positive_mod(Int value, Int modulus) {
  Int r = value % modulus;
  return r < 0 ? r + modulus : r;
}

void free_reduce_append(std::vector<Int> &word, Int letter) {
  if (!word.empty() && word.back() == -letter)
    word.pop_back();
  else
    word.push_back(letter);
}

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos)
    return "";
  std::size_t e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

Factor parse_factor(const std::string &token) {
  if (token == "Z")
    return Factor{FactorKind::FreeAbelian, 1, 0};
  if (token == "H3")
    return Factor{FactorKind::Heisenberg, 0, 0};

  auto tail_number = [&](std::size_t from) -> Int {
    const std::string digits = token.substr(from);
    if (digits.empty() ||
        digits.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("bad group descriptor token '" + token + "'");
    return std::strtoll(digits.c_str(), nullptr, 10);
  };

  if (token.rfind("Z^", 0) == 0) {
    Int k = tail_number(2);
    if (k < 1)
      throw ParseError("rank must be positive in '" + token + "'");
    return Factor{FactorKind::FreeAbelian, static_cast<int>(k), 0};
  }
  if (token.rfind("Z/", 0) == 0) {
    Int n = tail_number(2);
    if (n < 2)
      throw ParseError("modulus must be at least 2 in '" + token + "'");
    return Factor{FactorKind::Cyclic, 1, n};
  }
  // "Z5" style shorthand for Z/5 (so lamplighter descriptors read "Z2 wr Z").
  if (token.size() > 1 && token[0] == 'Z' &&
      token.find_first_not_of("0123456789", 1) == std::string::npos) {
    Int n = tail_number(1);
    if (n < 2)
      throw ParseError("modulus must be at least 2 in '" + token + "'");
    return Factor{FactorKind::Cyclic, 1, n};
  }
  if (token.size() > 1 && token[0] == 'F' &&
      token.find_first_not_of("0123456789", 1) == std::string::npos) {
    Int k = tail_number(1);
    if (k < 1)
      throw ParseError("rank must be positive in '" + token + "'");
    return Factor{FactorKind::Free, static_cast<int>(k), 0};
  }
  throw ParseError("unknown group descriptor token '" + token + "'");
}

} // namespace

int Factor::generator_count() const {
  switch (kind) {
  case FactorKind::FreeAbelian:
  case FactorKind::Free:
    return rank;
  case FactorKind::Cyclic:
    return 1;
  case FactorKind::Heisenberg:
    return 2;
  }
  return 0;
}

int Factor::value_width() const {
  switch (kind) {
  case FactorKind::FreeAbelian:
    return rank;
  case FactorKind::Cyclic:
    return 1;
  case FactorKind::Free:
    return -1;
  case FactorKind::Heisenberg:
    return 3;
  }
  return 0;
}

int compare(const GroupElement &a, const GroupElement &b) {
  if (a.parts.size() != b.parts.size())
    return a.parts.size() < b.parts.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.parts.size(); ++i) {
    const auto &pa = a.parts[i];
    const auto &pb = b.parts[i];
    if (pa.size() != pb.size())
      return pa.size() < pb.size() ? -1 : 1;
    for (std::size_t j = 0; j < pa.size(); ++j)
      if (pa[j] != pb[j])
        return pa[j] < pb[j] ? -1 : 1;
  }
  return 0;
}

std::size_t hash_value(const GroupElement &x) {
  std::size_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (const auto &part : x.parts) {
    mix(part.size());
    for (Int v : part)
      mix(static_cast<std::size_t>(v));
  }
  return h;
}

Group::Group(std::vector<Factor> factors) : factors_(std::move(factors)) {
  if (factors_.empty())
    throw ParseError("a group needs at least one factor");
}

Group Group::parse(std::string_view text) {
  std::vector<Factor> factors;
  std::string rest(text);
  std::size_t pos = 0;
  while (true) {
    std::size_t next = rest.find(" x ", pos);
    std::string token = trim(next == std::string::npos
                                 ? rest.substr(pos)
                                 : rest.substr(pos, next - pos));
    if (token.empty())
      throw ParseError("empty factor in group descriptor '" + rest + "'");
    factors.push_back(parse_factor(token));
    if (next == std::string::npos)
      break;
    pos = next + 3;
  }
  return Group(std::move(factors));
}

std::string Group::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i)
      out += " x ";
    const Factor &f = factors_[i];
    switch (f.kind) {
    case FactorKind::FreeAbelian:
      out += f.rank == 1 ? "Z" : "Z^" + std::to_string(f.rank);
      break;
    case FactorKind::Cyclic:
      out += "Z/" + std::to_string(f.modulus);
      break;
    case FactorKind::Free:
      out += "F" + std::to_string(f.rank);
      break;
    case FactorKind::Heisenberg:
      out += "H3";
      break;
    }
  }
  return out;
}

GroupElement Group::identity() const {
  GroupElement e;
  e.parts.reserve(factors_.size());
  for (const Factor &f : factors_) {
    int w = f.value_width();
    e.parts.emplace_back(w < 0 ? 0 : w, 0);
  }
  return e;
}

bool Group::is_identity(const GroupElement &x) const {
  for (const auto &part : x.parts)
    for (Int v : part)
      if (v != 0)
        return false;
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].kind == FactorKind::Free && !x.parts[i].empty())
      return false;
  return true;
}

namespace {

void check_widths(const Group &group, const Factor &factor,
                  const std::vector<Int> &part) {
  int w = factor.value_width();
  if (w >= 0 && static_cast<int>(part.size()) != w)
    throw MismatchedGroups("element does not belong to " + group.to_string());
}

} // namespace

GroupElement Group::multiply(const GroupElement &x, const GroupElement &y) const {
  if (x.parts.size() != factors_.size() || y.parts.size() != factors_.size())
    throw MismatchedGroups("element does not belong to " + to_string());
  GroupElement out;
  out.parts.resize(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const Factor &f = factors_[i];
    const auto &a = x.parts[i];
    const auto &b = y.parts[i];
    check_widths(*this, f, a);
    check_widths(*this, f, b);
    auto &r = out.parts[i];
    switch (f.kind) {
    case FactorKind::FreeAbelian:
      r.resize(f.rank);
      for (int j = 0; j < f.rank; ++j)
        r[j] = a[j] + b[j];
      break;
    case FactorKind::Cyclic:
      r = {positive_mod(a[0] + b[0], f.modulus)};
      break;
    case FactorKind::Free:
      r = a;
      for (Int letter : b)
        free_reduce_append(r, letter);
      break;
    case FactorKind::Heisenberg:
      r = {a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1]};
      break;
    }
  }
  return out;
}

GroupElement Group::inverse(const GroupElement &x) const {
  if (x.parts.size() != factors_.size())
    throw MismatchedGroups("element does not belong to " + to_string());
  GroupElement out;
  out.parts.resize(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const Factor &f = factors_[i];
    const auto &a = x.parts[i];
    check_widths(*this, f, a);
    auto &r = out.parts[i];
    switch (f.kind) {
    case FactorKind::FreeAbelian:
      r.resize(f.rank);
      for (int j = 0; j < f.rank; ++j)
        r[j] = -a[j];
      break;
    case FactorKind::Cyclic:
      r = {positive_mod(-a[0], f.modulus)};
      break;
    case FactorKind::Free:
      r.reserve(a.size());
      for (auto it = a.rbegin(); it != a.rend(); ++it)
        r.push_back(-*it);
      break;
    case FactorKind::Heisenberg:
      r = {-a[0], -a[1], -a[2] + a[0] * a[1]};
      break;
    }
  }
  return out;
}

int Group::generator_count() const {
  int n = 0;
  for (const Factor &f : factors_)
    n += f.generator_count();
  return n;
}

GroupElement Group::generator(int index) const {
  GroupElement g = identity();
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const Factor &f = factors_[i];
    int count = f.generator_count();
    if (index < count) {
      switch (f.kind) {
      case FactorKind::FreeAbelian:
        g.parts[i][index] = 1;
        break;
      case FactorKind::Cyclic:
        g.parts[i][0] = positive_mod(1, f.modulus);
        break;
      case FactorKind::Free:
        g.parts[i] = {index + 1};
        break;
      case FactorKind::Heisenberg:
        g.parts[i][index] = 1;
        break;
      }
      return g;
    }
    index -= count;
  }
  throw std::out_of_range("generator index out of range");
}

std::vector<std::string> Group::generator_labels() const {
  std::vector<std::string> labels;
  for (const Factor &f : factors_) {
    switch (f.kind) {
    case FactorKind::FreeAbelian:
      if (f.rank == 1)
        labels.push_back("t");
      else
        for (int j = 0; j < f.rank; ++j)
          labels.push_back("t" + std::to_string(j + 1));
      break;
    case FactorKind::Cyclic:
      labels.push_back("s");
      break;
    case FactorKind::Free:
      if (f.rank <= 2) {
        labels.push_back("x");
        if (f.rank == 2)
          labels.push_back("y");
      } else {
        for (int j = 0; j < f.rank; ++j)
          labels.push_back("x" + std::to_string(j + 1));
      }
      break;
    case FactorKind::Heisenberg:
      labels.push_back("x");
      labels.push_back("y");
      break;
    }
  }
  // Disambiguate collisions across factors of the same kind.
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::size_t occurrences = 0;
    for (const auto &l : labels)
      if (l == labels[i])
        ++occurrences;
    if (occurrences > 1) {
      std::string base = labels[i];
      int counter = 1;
      for (auto &l : labels)
        if (l == base)
          l = base + "_" + std::to_string(counter++);
    }
  }
  return labels;
}

GroupElement Group::evaluate_word(std::span<const int> word) const {
  GroupElement acc = identity();
  const int n = generator_count();
  for (int letter : word) {
    if (letter == 0 || std::abs(letter) > n)
      throw std::out_of_range("word letter " + std::to_string(letter) +
                              " out of range for " + to_string());
    GroupElement g = generator(std::abs(letter) - 1);
    if (letter < 0)
      g = inverse(g);
    acc = multiply(acc, g);
  }
  return acc;
}

bool Group::closed_form_available() const {
  for (const Factor &f : factors_)
    if (f.kind == FactorKind::Heisenberg)
      return false;
  return true;
}

std::optional<Int> Group::closed_form_norm(const GroupElement &x) const {
  Int total = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const Factor &f = factors_[i];
    const auto &a = x.parts[i];
    switch (f.kind) {
    case FactorKind::FreeAbelian:
      for (Int v : a)
        total += std::llabs(v);
      break;
    case FactorKind::Cyclic:
      total += std::min(a[0], f.modulus - a[0]);
      break;
    case FactorKind::Free:
      total += static_cast<Int>(a.size());
      break;
    case FactorKind::Heisenberg:
      return std::nullopt;
    }
  }
  return total;
}

std::vector<Int> Group::abelianized_exponents(const GroupElement &x) const {
  std::vector<Int> exps;
  exps.reserve(generator_count());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const Factor &f = factors_[i];
    const auto &a = x.parts[i];
    switch (f.kind) {
    case FactorKind::FreeAbelian:
      exps.insert(exps.end(), a.begin(), a.end());
      break;
    case FactorKind::Cyclic:
      exps.push_back(a[0]);
      break;
    case FactorKind::Free: {
      std::vector<Int> sums(f.rank, 0);
      for (Int letter : a)
        sums[std::llabs(letter) - 1] += letter > 0 ? 1 : -1;
      exps.insert(exps.end(), sums.begin(), sums.end());
      break;
    }
    case FactorKind::Heisenberg:
      exps.push_back(a[0]);
      exps.push_back(a[1]);
      break;
    }
  }
  return exps;
}

std::vector<int> Group::decompose(const GroupElement &x) const {
  std::vector<int> word;
  int base = 0;
  auto push_power = [&word](int gen, Int exponent) {
    for (Int k = 0; k < std::llabs(exponent); ++k)
      word.push_back(exponent > 0 ? gen : -gen);
  };
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const Factor &f = factors_[i];
    const auto &a = x.parts[i];
    switch (f.kind) {
    case FactorKind::FreeAbelian:
      for (int j = 0; j < f.rank; ++j)
        push_power(base + j + 1, a[j]);
      break;
    case FactorKind::Cyclic: {
      Int r = a[0];
      if (f.modulus - r < r)
        r = r - f.modulus; // shorter to walk backwards
      push_power(base + 1, r);
      break;
    }
    case FactorKind::Free:
      for (Int letter : a)
        word.push_back(letter > 0 ? base + static_cast<int>(letter)
                                  : -(base + static_cast<int>(-letter)));
      break;
    case FactorKind::Heisenberg: {
      // (a, b, c) = x^a y^b z^(c - ab) with z = x y x^-1 y^-1.
      int gx = base + 1, gy = base + 2;
      push_power(gx, a[0]);
      push_power(gy, a[1]);
      Int zc = a[2] - a[0] * a[1];
      for (Int k = 0; k < std::llabs(zc); ++k) {
        if (zc > 0) {
          word.insert(word.end(), {gx, gy, -gx, -gy});
        } else {
          word.insert(word.end(), {gy, gx, -gy, -gx});
        }
      }
      break;
    }
    }
    base += f.generator_count();
  }
  return word;
}

void Group::validate(const GroupElement &x) const {
  if (x.parts.size() != factors_.size())
    throw MismatchedGroups("element has " + std::to_string(x.parts.size()) +
                           " parts, group " + to_string() + " expects " +
                           std::to_string(factors_.size()));
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const Factor &f = factors_[i];
    const auto &a = x.parts[i];
    int w = f.value_width();
    if (w >= 0 && static_cast<int>(a.size()) != w)
      throw MismatchedGroups("factor value has wrong width for " + to_string());
    if (f.kind == FactorKind::Cyclic && (a[0] < 0 || a[0] >= f.modulus))
      throw MismatchedGroups("cyclic residue out of range");
    if (f.kind == FactorKind::Free) {
      for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] == 0 || std::llabs(a[j]) > f.rank)
          throw MismatchedGroups("free word letter out of range");
        if (j + 1 < a.size() && a[j] == -a[j + 1])
          throw MismatchedGroups("free word is not reduced");
      }
    }
  }
}

nlohmann::json Group::element_to_json(const GroupElement &x) const {
  auto factor_json = [](const Factor &f,
                        const std::vector<Int> &a) -> nlohmann::json {
    if (f.value_width() == 1)
      return a[0];
    return nlohmann::json(a);
  };
  if (factors_.size() == 1)
    return factor_json(factors_[0], x.parts[0]);
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < factors_.size(); ++i)
    arr.push_back(factor_json(factors_[i], x.parts[i]));
  return arr;
}

GroupElement Group::element_from_json(const nlohmann::json &j) const {
  auto factor_from = [](const Factor &f,
                        const nlohmann::json &v) -> std::vector<Int> {
    if (f.value_width() == 1) {
      if (!v.is_number_integer())
        throw ParseError("expected an integer element value");
      return {v.get<Int>()};
    }
    if (!v.is_array())
      throw ParseError("expected an array element value");
    std::vector<Int> out;
    for (const auto &e : v) {
      if (!e.is_number_integer())
        throw ParseError("expected integer coordinates");
      out.push_back(e.get<Int>());
    }
    return out;
  };

  GroupElement x;
  if (factors_.size() == 1) {
    x.parts.push_back(factor_from(factors_[0], j));
  } else {
    if (!j.is_array() || j.size() != factors_.size())
      throw ParseError("expected one value per factor of " + to_string());
    for (std::size_t i = 0; i < factors_.size(); ++i)
      x.parts.push_back(factor_from(factors_[i], j[i]));
  }
  // Normalize rather than reject: reduce free words, wrap residues.
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const Factor &f = factors_[i];
    auto &a = x.parts[i];
    if (f.kind == FactorKind::Cyclic)
      a[0] = positive_mod(a[0], f.modulus);
    if (f.kind == FactorKind::Free) {
      std::vector<Int> reduced;
      for (Int letter : a) {
        if (letter == 0 || std::llabs(letter) > f.rank)
          throw ParseError("free word letter out of range");
        free_reduce_append(reduced, letter);
      }
      a = std::move(reduced);
    }
  }
  validate(x);
  return x;
}

std::string Group::element_compact(const GroupElement &x) const {
  std::ostringstream out;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i)
      out << "|";
    const Factor &f = factors_[i];
    const auto &a = x.parts[i];
    if (f.value_width() == 1) {
      out << a[0];
      continue;
    }
    out << (f.kind == FactorKind::Free ? "[" : "(");
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (j)
        out << " ";
      out << a[j];
    }
    out << (f.kind == FactorKind::Free ? "]" : ")");
  }
  return out.str();
}

void Group::encode(const GroupElement &x, std::vector<Int> &out) const {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto &a = x.parts[i];
    if (factors_[i].value_width() < 0)
      out.push_back(static_cast<Int>(a.size()));
    out.insert(out.end(), a.begin(), a.end());
  }
}

GroupElement Group::decode(std::span<const Int> data, std::size_t &pos) const {
  GroupElement x;
  x.parts.resize(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    int w = factors_[i].value_width();
    std::size_t len = w >= 0 ? static_cast<std::size_t>(w)
                             : static_cast<std::size_t>(data[pos++]);
    x.parts[i].assign(data.begin() + pos, data.begin() + pos + len);
    pos += len;
  }
  return x;
}

GeneratingSet GeneratingSet::standard(const Group &group) {
  GeneratingSet s;
  int n = group.generator_count();
  s.elements.reserve(n);
  for (int i = 0; i < n; ++i)
    s.elements.push_back(group.generator(i));
  s.labels = group.generator_labels();
  return s;
}

} // namespace wreath
