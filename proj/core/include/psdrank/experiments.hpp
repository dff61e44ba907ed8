#pragma once

// Random-spectrahedron experiments with Gaussian pencils.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "psdrank/bounds.hpp"
#include "psdrank/combinatorics.hpp"
#include "psdrank/linalg.hpp"

namespace psdrank {

// Per-trial seeds derived from a global seed by counter.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t counter);

// Standard Gaussian on S^m for the Frobenius inner product: diagonal entries
// N(0, 1), off-diagonal N(0, 1/2).
SymMat random_symmetric(int m, std::mt19937_64& rng);

struct RandomPencil {
  Pencil pencil;
  double shift = 0.0;  // multiple of the identity added to A_0
};

// n+1 independent Gaussian matrices. With interiorize, A_0 gets
// (|lambda_min| + 0.1) I added whenever lambda_min < 0.1.
RandomPencil random_pencil(int m, int n, std::uint64_t seed, bool interiorize = false);

enum class TrialOutcome { counted, infeasible, unbounded, failed };

struct RankFrequencyTable {
  int m = 0;
  int n = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  std::map<int, int> counts;  // rank of X at the optimum -> occurrences
  int skipped = 0;
  int skipped_infeasible = 0;
  int skipped_unbounded = 0;
  int skipped_failed = 0;
  int rank_uncertain = 0;  // counted trials whose spectrum gap was below 1e2
  PatakiRange pataki;

  int counted() const { return trials - skipped; }
  int count(int r) const;
  int inside_pataki() const;
};

// Raw Gaussian A_0; infeasible or unbounded trials are skipped and counted.
RankFrequencyTable rank_frequency(int m, int n, int trials, std::uint64_t seed);

struct TightnessReport {
  int m = 0;
  long n = 0;  // t_{m/2} + 1
  int r = 0;   // m/2 + 1
  BigInt delta;
  double log2_delta = 0.0;
  double psd_bound = 0.0;         // sqrt(log2 delta)
  double tightness_bound = 0.0;   // sqrt(20 log2 delta)
  bool m_within_bound = false;    // m <= sqrt(20 log2 delta), decided exactly
  std::vector<std::pair<int, BigInt>> delta_by_rank;  // every r in the Pataki range
  std::optional<RankFrequencyTable> table;
  double target_rank_frequency = 0.0;  // share of counted trials with rank r
};

// m even, 4 <= m <= 16; trials > 0 requires m <= 12.
TightnessReport tightness_report(int m, int trials, std::uint64_t seed);

struct ThresholdScan {
  std::vector<AlgDegCheck> rows;  // even m from 4 to max_m
  std::optional<int> first_holding_m;
  bool strictly_increasing = true;
};

ThresholdScan tightness_threshold_scan(int max_m);

std::string rank_table_to_json(const RankFrequencyTable& table);
// Columns: rank,count,in_pataki,strict
std::string rank_table_to_csv(const RankFrequencyTable& table);
std::string tightness_to_json(const TightnessReport& report, const ThresholdScan& scan);

}  // namespace psdrank
