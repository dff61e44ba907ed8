#include "psdrank/polynomial.hpp"

#include <charconv>
#include <cmath>

#include "psdrank/error.hpp"

namespace psdrank {

namespace mp = boost::multiprecision;

Monomial monomial_product(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

int monomial_degree(const Monomial& mono) {
  int d = 0;
  for (const auto& [index, exponent] : mono) d += exponent;
  return d;
}

Polynomial Polynomial::constant(const BigRational& value) {
  Polynomial p;
  p.add_term({}, value);
  return p;
}

Polynomial Polynomial::variable(int index) {
  Polynomial p;
  p.add_term({{index, 1}}, 1);
  return p;
}

void Polynomial::add_term(const Monomial& mono, const BigRational& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.emplace(mono, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  for (const auto& [mono, coeff] : other.terms_) add_term(mono, coeff);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  for (const auto& [mono, coeff] : other.terms_) add_term(mono, -coeff);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) out.add_term(monomial_product(ma, mb), ca * cb);
  }
  return out;
}

Polynomial operator*(const BigRational& s, const Polynomial& p) {
  Polynomial out;
  if (s == 0) return out;
  for (const auto& [mono, coeff] : p.terms_) out.terms_.emplace(mono, s * coeff);
  return out;
}

int Polynomial::total_degree() const {
  int d = 0;
  for (const auto& [mono, coeff] : terms_) d = std::max(d, monomial_degree(mono));
  return d;
}

double Polynomial::evaluate(const std::vector<double>& values) const {
  double total = 0.0;
  for (const auto& [mono, coeff] : terms_) {
    double term = coeff.convert_to<double>();
    for (const auto& [index, exponent] : mono) term *= std::pow(values.at(static_cast<std::size_t>(index)), exponent);
    total += term;
  }
  return total;
}

BigRational rational_from_double(double value) {
  if (!std::isfinite(value)) throw Error(ErrorCode::invalid_argument, "non-finite coefficient");
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::scientific);
  const std::string text(buffer, result.ptr);

  // d[.ddd]e[+-]xx
  const auto e_pos = text.find('e');
  std::string mantissa = text.substr(0, e_pos);
  int exponent = std::stoi(text.substr(e_pos + 1));
  bool negative = false;
  if (!mantissa.empty() && mantissa[0] == '-') {
    negative = true;
    mantissa.erase(0, 1);
  }
  const auto dot = mantissa.find('.');
  std::string digits = mantissa;
  if (dot != std::string::npos) {
    exponent -= static_cast<int>(mantissa.size() - dot - 1);
    digits.erase(dot, 1);
  }
  BigInt numerator(digits);
  if (negative) numerator = -numerator;
  if (exponent >= 0) return BigRational(numerator * mp::pow(BigInt(10), static_cast<unsigned>(exponent)));
  return BigRational(numerator, mp::pow(BigInt(10), static_cast<unsigned>(-exponent)));
}

std::string rational_to_string(const BigRational& value) {
  const BigInt& den = mp::denominator(value);
  if (den == 1) return mp::numerator(value).str();
  return mp::numerator(value).str() + "/" + den.str();
}

BigRational parse_rational(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return BigRational(BigInt(text));
    const BigInt den(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorCode::parse_error, "zero denominator in '" + text + "'");
    return BigRational(BigInt(text.substr(0, slash)), den);
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const Error*>(&e)) throw;
    throw Error(ErrorCode::parse_error, "bad rational '" + text + "'");
  }
}

}  // namespace psdrank
