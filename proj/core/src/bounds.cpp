#include "psdrank/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "psdrank/error.hpp"

namespace psdrank {

namespace mp = boost::multiprecision;

namespace {

bool is_power_of_two(const BigInt& d) { return d > 0 && mp::lsb(d) == mp::msb(d); }

// log2 that returns exact integers on powers of two.
double exact_log2(const BigInt& d) {
  if (is_power_of_two(d)) return static_cast<double>(mp::msb(d));
  return log2_big(d);
}

}  // namespace

long triangular(long m) {
  if (m < 0) throw Error(ErrorCode::invalid_argument, "triangular requires m >= 0");
  return m * (m + 1) / 2;
}

bool PatakiRange::contains(int r) const {
  return std::find(ranks.begin(), ranks.end(), r) != ranks.end();
}

bool satisfies_pataki(int m, long n, int r) {
  if (r < 0 || r > m) return false;
  return n >= triangular(m - r) && triangular(r) <= triangular(m) - n;
}

PatakiRange pataki_range(int m, long n) {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "pataki_range requires m >= 1");
  if (n < 1 || n > triangular(m)) {
    throw Error(ErrorCode::invalid_argument, "pataki_range requires 1 <= n <= t_m");
  }
  PatakiRange range;
  range.m = m;
  range.n = n;
  for (int r = 0; r <= m; ++r) {
    if (!satisfies_pataki(m, n, r)) continue;
    range.ranks.push_back(r);
    if (n > triangular(m - r)) range.strict_ranks.push_back(r);
  }
  return range;
}

BigInt bezout_kkt_count(int m) {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "bezout_kkt_count requires m >= 1");
  return BigInt(1) << (m * m);
}

BigInt max_vertices(int m) {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "max_vertices requires m >= 1");
  return BigInt(1) << (m * m);
}

PsdRankBound psd_rank_lower_bound(const BigInt& d) {
  if (d <= 0) throw Error(ErrorCode::invalid_argument, "psd_rank_lower_bound requires d >= 1");
  PsdRankBound out;
  out.bound = std::sqrt(exact_log2(d));
  out.ceil_bound = static_cast<long>(std::ceil(out.bound));
  return out;
}

double lp_extension_lower_bound(const BigInt& d) {
  if (d <= 0) throw Error(ErrorCode::invalid_argument, "lp_extension_lower_bound requires d >= 1");
  return exact_log2(d);
}

}  // namespace psdrank
