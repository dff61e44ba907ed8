#include "psdrank/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "psdrank/error.hpp"

namespace psdrank {

namespace mp = boost::multiprecision;

IndexSet::IndexSet(std::vector<int> elements, int m) : elements_(std::move(elements)), m_(m) {
  if (m < 0) throw Error(ErrorCode::invalid_argument, "ambient size must be non-negative");
  std::sort(elements_.begin(), elements_.end());
  for (std::size_t k = 0; k < elements_.size(); ++k) {
    if (elements_[k] < 1 || elements_[k] > m) {
      throw Error(ErrorCode::invalid_argument,
                  "index " + std::to_string(elements_[k]) + " outside [1, " + std::to_string(m) + "]");
    }
    if (k > 0 && elements_[k] == elements_[k - 1]) {
      throw Error(ErrorCode::invalid_argument, "duplicate index " + std::to_string(elements_[k]));
    }
  }
}

IndexSet IndexSet::interval(int first, int last, int m) {
  std::vector<int> e;
  for (int i = first; i <= last; ++i) e.push_back(i);
  return IndexSet(std::move(e), m);
}

long IndexSet::element_sum() const {
  long s = 0;
  for (int e : elements_) s += e;
  return s;
}

IndexSet IndexSet::complement() const {
  std::vector<int> rest;
  rest.reserve(static_cast<std::size_t>(m_) - elements_.size());
  std::size_t k = 0;
  for (int i = 1; i <= m_; ++i) {
    if (k < elements_.size() && elements_[k] == i) {
      ++k;
    } else {
      rest.push_back(i);
    }
  }
  return IndexSet(std::move(rest), m_);
}

BigInt binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (int i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

BigInt bareiss_determinant(std::vector<std::vector<BigInt>> a) {
  const std::size_t n = a.size();
  for (const auto& row : a) {
    if (row.size() != n) throw Error(ErrorCode::dimension_mismatch, "determinant needs a square matrix");
  }
  if (n == 0) return 1;

  int sign = 1;
  BigInt previous = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && a[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / previous;
      }
    }
    previous = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

namespace {

class PascalTable {
 public:
  explicit PascalTable(int rows) : rows_(rows + 1) {
    for (int a = 0; a <= rows; ++a) {
      rows_[a].resize(static_cast<std::size_t>(a) + 1);
      rows_[a][0] = 1;
      rows_[a][a] = 1;
      for (int b = 1; b < a; ++b) rows_[a][b] = rows_[a - 1][b - 1] + rows_[a - 1][b];
    }
  }

  const BigInt& operator()(int a, int b) const {
    static const BigInt zero = 0;
    return (b < 0 || b > a) ? zero : rows_[a][b];
  }

 private:
  std::vector<std::vector<BigInt>> rows_;
};

// Column subsets J with j_l <= a_l (a = Pascal rows, ascending). Any J that
// violates this has its first l rows supported on l-1 columns, so the minor vanishes.
void accumulate_minors(const PascalTable& pascal, const std::vector<int>& rows, std::size_t level,
                       std::vector<int>& columns, BigInt& total) {
  const std::size_t k = rows.size();
  if (level == k) {
    std::vector<std::vector<BigInt>> minor(k, std::vector<BigInt>(k));
    for (std::size_t s = 0; s < k; ++s) {
      for (std::size_t t = 0; t < k; ++t) minor[s][t] = pascal(rows[s], columns[t]);
    }
    total += bareiss_determinant(std::move(minor));
    return;
  }
  const int first = level == 0 ? 0 : columns[level - 1] + 1;
  for (int j = first; j <= rows[level]; ++j) {
    columns[level] = j;
    accumulate_minors(pascal, rows, level + 1, columns, total);
  }
}

BigInt psi_with_table(const PascalTable& pascal, const IndexSet& index_set) {
  if (index_set.empty()) return 1;
  std::vector<int> rows;
  rows.reserve(index_set.elements().size());
  for (int i : index_set.elements()) rows.push_back(i - 1);
  std::vector<int> columns(rows.size());
  BigInt total = 0;
  accumulate_minors(pascal, rows, 0, columns, total);
  return total;
}

BigInt to_integer(const BigRational& value, const char* what) {
  if (mp::denominator(value) != 1) {
    throw Error(ErrorCode::numerical_failure, std::string(what) + " did not reduce to an integer");
  }
  return mp::numerator(value);
}

long triangular_number(long k) { return k * (k + 1) / 2; }

void collect_subsets(int m, int size, long sum, int next, std::vector<int>& chosen,
                     std::vector<IndexSet>& out) {
  const int remaining = size - static_cast<int>(chosen.size());
  if (remaining == 0) {
    if (sum == 0) out.emplace_back(chosen, m);
    return;
  }
  for (int v = next; v <= m - remaining + 1; ++v) {
    // Sums over `remaining` distinct values in [v, m] fill the range
    // [smallest, largest] contiguously.
    const long smallest = static_cast<long>(remaining) * v + triangular_number(remaining - 1);
    const long largest = static_cast<long>(remaining) * (m - remaining + 1) + triangular_number(remaining - 1);
    if (sum < smallest) break;
    if (sum > largest) return;
    chosen.push_back(v);
    collect_subsets(m, size, sum - v, v + 1, chosen, out);
    chosen.pop_back();
  }
}

}  // namespace

BigInt psi(const IndexSet& index_set) {
  if (index_set.empty()) return 1;
  const PascalTable pascal(index_set.elements().back());
  return psi_with_table(pascal, index_set);
}

BigInt psi_interval_product(int p, int q) {
  if (p < 0 || p > q) {
    throw Error(ErrorCode::invalid_argument, "psi_interval_product requires 0 <= p <= q");
  }
  const int r = q - p;
  BigRational product = 1;
  for (int i = 0; i < p; ++i) {
    for (int j = i; j < p; ++j) {
      product *= BigRational(r + i + j + 1, i + j + 1);
    }
  }
  return to_integer(product, "interval product");
}

BigInt psi_interval_harris_tu(int m, int r) {
  if (r < 0 || r > m) throw Error(ErrorCode::invalid_argument, "psi_interval_harris_tu requires 0 <= r <= m");
  BigRational product = 1;
  for (int i = 0; i < m - r; ++i) {
    product *= BigRational(binomial(m + i, m - r - i), binomial(2 * i + 1, i));
  }
  return to_integer(product, "binomial product");
}

std::vector<IndexSet> subsets_with_size_and_sum(int m, int size, long sum) {
  std::vector<IndexSet> out;
  if (size < 0 || size > m || sum < 0) return out;
  std::vector<int> chosen;
  chosen.reserve(static_cast<std::size_t>(size));
  collect_subsets(m, size, sum, 1, chosen, out);
  return out;
}

BigInt delta(long n, int m, int r) {
  if (r < 1 || r > m) throw Error(ErrorCode::invalid_argument, "delta requires 1 <= r <= m");
  if (n < 0) throw Error(ErrorCode::invalid_argument, "delta requires n >= 0");

  const PascalTable pascal(m);
  std::map<std::vector<int>, BigInt> cache;
  auto cached_psi = [&](const IndexSet& s) -> const BigInt& {
    auto it = cache.find(s.elements());
    if (it == cache.end()) it = cache.emplace(s.elements(), psi_with_table(pascal, s)).first;
    return it->second;
  };

  BigInt total = 0;
  for (const IndexSet& subset : subsets_with_size_and_sum(m, m - r, n)) {
    total += cached_psi(subset) * cached_psi(subset.complement());
  }
  return total;
}

double log2_big(const BigInt& value) {
  if (value <= 0) throw Error(ErrorCode::invalid_argument, "log2 of a non-positive integer");
  const unsigned top = mp::msb(value);
  if (top < 63) return std::log2(static_cast<double>(static_cast<unsigned long long>(value)));
  const unsigned shift = top - 62;
  const auto leading = static_cast<unsigned long long>(BigInt(value >> shift));
  return std::log2(static_cast<double>(leading)) + static_cast<double>(shift);
}

PsiIntervalCheck check_psi_interval_lower_bound(int p, int q) {
  if (p < 1) throw Error(ErrorCode::invalid_argument, "psi interval bound requires p >= 1");
  if (q < p) throw Error(ErrorCode::invalid_argument, "psi interval bound requires p <= q");

  PsiIntervalCheck check;
  check.lhs = psi_interval_product(p, q);
  const auto exponent = static_cast<unsigned>(triangular_number(p));
  const long numerator = p + q - 1;  // base = (p+q-1)/(2p-1)
  const long denominator = 2L * p - 1;

  check.log2_lhs = log2_big(check.lhs);
  check.log2_rhs = exponent * (std::log2(static_cast<double>(numerator)) - std::log2(static_cast<double>(denominator)));
  check.rhs = std::exp2(check.log2_rhs);
  check.holds = check.lhs * mp::pow(BigInt(denominator), exponent) >= mp::pow(BigInt(numerator), exponent);
  return check;
}

AlgDegCheck check_lemma_algdeg(int m) {
  if (m % 2 != 0) throw Error(ErrorCode::invalid_argument, "check_lemma_algdeg requires even m");
  if (m < 4) throw Error(ErrorCode::invalid_argument, "check_lemma_algdeg requires m >= 4");

  AlgDegCheck check;
  check.m = m;
  check.n = triangular_number(m / 2) + 1;
  check.r = m / 2 + 1;
  check.delta = delta(check.n, m, check.r);
  check.log2_delta = log2_big(check.delta);
  check.threshold = static_cast<double>(m) * m / 20.0;
  check.holds = mp::pow(check.delta, 20) >= (BigInt(1) << (m * m));
  return check;
}

}  // namespace psdrank
