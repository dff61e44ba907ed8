#pragma once

// Exact evaluation of the Pascal-minor sums psi_I and the algebraic degree of
// semidefinite programming delta(n, m, r).
//
// Indexing convention: the binomial matrix has entries C(a, b) for a, b >= 0,
// and an element i of an index set selects Pascal row a = i - 1. With this
// shift psi({i}) = 2^(i-1) and psi([1, p]) = 1. The tests pin the convention
// by checking the minor sum against both closed-form interval products.

#include <cstdint>
#include <initializer_list>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace psdrank {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Strictly increasing subset of {1, ..., m}.
class IndexSet {
 public:
  IndexSet() = default;
  // Throws Error(invalid_argument) unless elements are distinct and in [1, m];
  // elements are sorted on construction.
  IndexSet(std::vector<int> elements, int m);
  IndexSet(std::initializer_list<int> elements, int m)
      : IndexSet(std::vector<int>(elements), m) {}

  static IndexSet interval(int first, int last, int m);  // [first, last], empty if first > last

  const std::vector<int>& elements() const { return elements_; }
  int ambient() const { return m_; }
  int size() const { return static_cast<int>(elements_.size()); }
  bool empty() const { return elements_.empty(); }
  long element_sum() const;
  IndexSet complement() const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<int> elements_;
  int m_ = 0;
};

BigInt binomial(int n, int k);

// Fraction-free Gaussian elimination; the matrix is taken by value and
// destroyed. Square input required.
BigInt bareiss_determinant(std::vector<std::vector<BigInt>> a);

// Sum of all |I| x |I| minors of the binomial matrix restricted to rows I.
BigInt psi(const IndexSet& index_set);

// psi on the interval [p+1, q] through the double product over 0 <= i <= j < p
// of (r+i+j+1)/(i+j+1), r = q - p. Evaluated in exact rational arithmetic.
BigInt psi_interval_product(int p, int q);

// delta(t_{m-r}, m, r) = psi([m-r+1, m]) through the binomial
// product over i < m-r of C(m+i, m-r-i) / C(2i+1, i). r = 0 gives psi of the
// empty set, 1.
BigInt psi_interval_harris_tu(int m, int r);

// Algebraic degree delta(n, m, r): sum of psi(I) psi(I^c) over I with |I| = m-r
// and element sum n. Zero when no subset qualifies.
BigInt delta(long n, int m, int r);

// All subsets of {1..m} with the given size and element sum, in lexicographic order.
std::vector<IndexSet> subsets_with_size_and_sum(int m, int size, long sum);

// log2 of a positive integer, accurate to double precision at any size.
double log2_big(const BigInt& value);

struct PsiIntervalCheck {
  BigInt lhs;              // psi([p+1, q])
  double rhs = 0.0;        // (1 + (q-p)/(2p-1))^{t_p}; may be +inf for huge exponents
  double log2_lhs = 0.0;
  double log2_rhs = 0.0;
  bool holds = false;      // decided exactly: lhs (2p-1)^{t_p} >= (p+q-1)^{t_p}
};

PsiIntervalCheck check_psi_interval_lower_bound(int p, int q);

struct AlgDegCheck {
  int m = 0;
  long n = 0;              // t_{m/2} + 1
  int r = 0;               // m/2 + 1
  BigInt delta;
  double log2_delta = 0.0;
  double threshold = 0.0;  // m^2 / 20
  bool holds = false;      // decided exactly: delta^20 >= 2^{m^2}
};

AlgDegCheck check_lemma_algdeg(int m);

}  // namespace psdrank
