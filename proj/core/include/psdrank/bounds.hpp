#pragma once

#include <vector>

#include "psdrank/combinatorics.hpp"

namespace psdrank {

// t_m = m(m+1)/2, the dimension of the space of m x m symmetric matrices.
long triangular(long m);

// Ranks r in [0, m] with n >= t_{m-r} and t_r <= t_m - n. The strict sublist
// additionally has n > t_{m-r}.
struct PatakiRange {
  int m = 0;
  long n = 0;
  std::vector<int> ranks;
  std::vector<int> strict_ranks;

  bool contains(int r) const;
};

bool satisfies_pataki(int m, long n, int r);
PatakiRange pataki_range(int m, long n);

// 2^{m^2}: the Bezout count of the KKT system and the vertex bound for a size-m lift.
BigInt bezout_kkt_count(int m);
BigInt max_vertices(int m);

struct PsdRankBound {
  double bound = 0.0;  // sqrt(log2 d)
  long ceil_bound = 0;  // psd rank is an integer
};

// sqrt(log2 d); exact for powers of two.
PsdRankBound psd_rank_lower_bound(const BigInt& d);

// log2 d for a polytope with d vertices.
double lp_extension_lower_bound(const BigInt& d);

}  // namespace psdrank
