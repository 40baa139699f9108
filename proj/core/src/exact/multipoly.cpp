#include "arithdyn/exact/multipoly.hpp"

#include <sstream>

#include "arithdyn/error.hpp"

namespace arithdyn {

MultiPoly MultiPoly::constant(std::size_t nvars, const Integer& c) {
  MultiPoly r(nvars);
  r.add_term(Exponents(nvars, 0), c);
  return r;
}

MultiPoly MultiPoly::variable(std::size_t nvars, std::size_t index) {
  if (index >= nvars) throw MathError(Errc::kInvalidArgument, "variable index out of range");
  MultiPoly r(nvars);
  Exponents e(nvars, 0);
  e[index] = 1;
  r.add_term(e, Integer(1));
  return r;
}

void MultiPoly::add_term(const Exponents& e, const Integer& c) {
  if (e.size() != nvars_) throw MathError(Errc::kInvalidArgument, "exponent vector arity mismatch");
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

int MultiPoly::partial_degree(std::span<const std::size_t> vars, const Exponents& e) const {
  int d = 0;
  for (std::size_t v : vars) d += static_cast<int>(e.at(v));
  return d;
}

Integer MultiPoly::eval(std::span<const Integer> values) const {
  if (values.size() != nvars_) throw MathError(Errc::kInvalidArgument, "evaluation arity mismatch");
  Integer total(0);
  for (const auto& [e, c] : terms_) {
    Integer term = c;
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (e[i] != 0) term *= pow_int(values[i], e[i]);
    }
    total += term;
  }
  return total;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  if (o.nvars_ != nvars_) throw MathError(Errc::kInvalidArgument, "arity mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  if (o.nvars_ != nvars_) throw MathError(Errc::kInvalidArgument, "arity mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, Integer(-c));
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  if (a.nvars_ != b.nvars_) throw MathError(Errc::kInvalidArgument, "arity mismatch");
  MultiPoly r(a.nvars_);
  MultiPoly::Exponents e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

MultiPoly operator*(MultiPoly a, const Integer& c) {
  if (sgn(c) == 0) return MultiPoly(a.nvars_);
  for (auto& [e, v] : a.terms_) v *= c;
  return a;
}

std::string MultiPoly::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Integer mag = abs(c);
    if (first) {
      if (sgn(c) < 0) os << '-';
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    bool wrote = false;
    if (mag != 1) {
      os << mag.get_str();
      wrote = true;
    }
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      if (wrote) os << '*';
      os << names.at(i);
      if (e[i] > 1) os << '^' << e[i];
      wrote = true;
    }
    if (!wrote) os << '1';
  }
  return os.str();
}

}  // namespace arithdyn
