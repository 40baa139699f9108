#include "arithdyn/exact/parse.hpp"

#include <cctype>
#include <string>

#include "arithdyn/error.hpp"

namespace arithdyn {
namespace {

class TermParser {
 public:
  TermParser(std::string_view text, const std::vector<std::string>& names) : s_(text), names_(names) {}

  MultiPoly run() {
    MultiPoly out(names_.size());
    skip_ws();
    if (pos_ == s_.size()) fail("empty polynomial");
    bool first = true;
    while (true) {
      skip_ws();
      if (pos_ == s_.size()) break;
      int sign = 1;
      if (s_[pos_] == '+' || s_[pos_] == '-') {
        sign = s_[pos_] == '-' ? -1 : 1;
        ++pos_;
        skip_ws();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      term(out, sign);
    }
    return out;
  }

 private:
  void term(MultiPoly& out, int sign) {
    Integer coef(sign);
    MultiPoly::Exponents e(names_.size(), 0);
    bool have_factor = false;
    while (true) {
      skip_ws();
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        coef *= number();
      } else if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        std::size_t v = variable();
        e[v] += static_cast<std::uint32_t>(exponent());
      } else {
        fail("expected a coefficient or variable");
      }
      have_factor = true;
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '*' && !(pos_ + 1 < s_.size() && s_[pos_ + 1] == '*')) {
        ++pos_;
        continue;
      }
      // Implicit product: `2x`, `3 x^2`.
      if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) continue;
      break;
    }
    if (!have_factor) fail("empty term");
    out.add_term(e, coef);
  }

  Integer number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return Integer(std::string(s_.substr(start, pos_ - start)));
  }

  std::size_t variable() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    std::string_view id = s_.substr(start, pos_ - start);
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == id) return i;
    }
    fail("unknown variable '" + std::string(id) + "'");
  }

  unsigned long exponent() {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '^') {
      ++pos_;
    } else if (pos_ + 1 < s_.size() && s_[pos_] == '*' && s_[pos_ + 1] == '*') {
      pos_ += 2;
    } else {
      return 1;
    }
    skip_ws();
    if (pos_ == s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected exponent");
    Integer e = number();
    if (e > kPolyDegreeCap) fail("exponent too large");
    return e.get_ui();
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("polynomial '" + std::string(s_) + "' at column " + std::to_string(pos_) + ": " + msg);
  }

  std::string_view s_;
  const std::vector<std::string>& names_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

MultiPoly parse_multipoly(std::string_view text, const std::vector<std::string>& names) {
  return TermParser(text, names).run();
}

PolyZ parse_poly(std::string_view text, std::string_view var) {
  MultiPoly m = parse_multipoly(text, {std::string(var)});
  int deg = -1;
  for (const auto& [e, c] : m.terms()) deg = std::max(deg, static_cast<int>(e[0]));
  if (deg < 0) return PolyZ();
  std::vector<Integer> coeffs(static_cast<std::size_t>(deg) + 1, Integer(0));
  for (const auto& [e, c] : m.terms()) coeffs[e[0]] = c;
  return PolyZ(std::move(coeffs));
}

Integer parse_integer(std::string_view text) {
  std::string_view t = trim(text);
  std::size_t i = 0;
  if (!t.empty() && (t[0] == '-' || t[0] == '+')) i = 1;
  if (i == t.size()) throw ParseError("expected an integer, got '" + std::string(text) + "'");
  for (std::size_t k = i; k < t.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(t[k]))) {
      throw ParseError("expected an integer, got '" + std::string(text) + "'");
    }
  }
  return Integer(std::string(t[0] == '+' ? t.substr(1) : t));
}

Rational parse_rational(std::string_view text) {
  std::string_view t = trim(text);
  std::size_t slash = t.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(t));
  Integer num = parse_integer(t.substr(0, slash));
  Integer den = parse_integer(t.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace arithdyn
