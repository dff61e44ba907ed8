#pragma once

// Sparse multivariate polynomials with exact rational coefficients.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "psdrank/combinatorics.hpp"

namespace psdrank {

// (variable index, exponent) pairs sorted by index; exponents positive.
using Monomial = std::vector<std::pair<int, int>>;

Monomial monomial_product(const Monomial& a, const Monomial& b);
int monomial_degree(const Monomial& mono);

class Polynomial {
 public:
  Polynomial() = default;
  static Polynomial constant(const BigRational& value);
  static Polynomial variable(int index);

  void add_term(const Monomial& mono, const BigRational& coeff);

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const BigRational& s, const Polynomial& p);
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  const std::map<Monomial, BigRational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;  // 0 for constants and the zero polynomial

  // Values indexed by variable index.
  double evaluate(const std::vector<double>& values) const;

 private:
  std::map<Monomial, BigRational> terms_;
};

// Exact rational equal to the shortest decimal that round-trips the double.
BigRational rational_from_double(double value);

std::string rational_to_string(const BigRational& value);
BigRational parse_rational(const std::string& text);

}  // namespace psdrank
