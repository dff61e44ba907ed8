#include "psdrank/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "parallel.hpp"
#include "psdrank/error.hpp"
#include "psdrank/sdp.hpp"

namespace psdrank {

namespace mp = boost::multiprecision;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t counter) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SymMat random_symmetric(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double off_diagonal_sd = std::sqrt(0.5);
  Eigen::MatrixXd a(m, m);
  for (int i = 0; i < m; ++i) {
    a(i, i) = normal(rng);
    for (int j = i + 1; j < m; ++j) {
      a(i, j) = off_diagonal_sd * normal(rng);
      a(j, i) = a(i, j);
    }
  }
  return SymMat(a);
}

RandomPencil random_pencil(int m, int n, std::uint64_t seed, bool interiorize) {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "random_pencil requires m >= 1");
  if (n < 1 || n > triangular(m)) throw Error(ErrorCode::invalid_argument, "random_pencil requires 1 <= n <= t_m");
  std::mt19937_64 rng(seed);
  std::vector<SymMat> mats;
  mats.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) mats.push_back(random_symmetric(m, rng));

  RandomPencil out;
  if (interiorize) {
    const double lambda_min = sym_eig(mats[0]).values.minCoeff();
    if (lambda_min < 0.1) {
      out.shift = std::abs(lambda_min) + 0.1;
      mats[0] = SymMat(mats[0].matrix() + out.shift * Eigen::MatrixXd::Identity(m, m));
    }
  }
  out.pencil = Pencil(std::move(mats));
  return out;
}

int RankFrequencyTable::count(int r) const {
  const auto it = counts.find(r);
  return it == counts.end() ? 0 : it->second;
}

int RankFrequencyTable::inside_pataki() const {
  int inside = 0;
  for (const auto& [rank, occurrences] : counts) {
    if (pataki.contains(rank)) inside += occurrences;
  }
  return inside;
}

namespace {

struct TrialResult {
  TrialOutcome outcome = TrialOutcome::failed;
  int rank = -1;
  bool uncertain = false;
};

TrialResult run_trial(int m, int n, std::uint64_t trial_seed) {
  TrialResult result;
  const RandomPencil instance = random_pencil(m, n, trial_seed, false);
  std::mt19937_64 rng(derive_seed(trial_seed, 0xC0FFEE));
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd c(n);
  for (int i = 0; i < n; ++i) c(i) = normal(rng);

  try {
    const auto center = strictly_feasible_point(instance.pencil);
    if (!center) {
      result.outcome = TrialOutcome::infeasible;
      return result;
    }
    const SdpSolution sol = solve_sdp(recenter(instance.pencil, *center), c);
    switch (sol.status) {
      case SdpStatus::optimal:
        result.outcome = TrialOutcome::counted;
        result.rank = sol.rank_X;
        result.uncertain = sol.rank_uncertain;
        break;
      case SdpStatus::unbounded: result.outcome = TrialOutcome::unbounded; break;
      case SdpStatus::infeasible: result.outcome = TrialOutcome::infeasible; break;
      case SdpStatus::numerical_failure: result.outcome = TrialOutcome::failed; break;
    }
  } catch (const Error&) {
    result.outcome = TrialOutcome::failed;
  }
  return result;
}

}  // namespace

RankFrequencyTable rank_frequency(int m, int n, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::invalid_argument, "rank_frequency requires trials >= 1");
  RankFrequencyTable table;
  table.m = m;
  table.n = n;
  table.trials = trials;
  table.seed = seed;
  table.pataki = pataki_range(m, n);

  std::vector<TrialResult> results(static_cast<std::size_t>(trials));
  detail::parallel_for(results.size(), [&](std::size_t t) { results[t] = run_trial(m, n, derive_seed(seed, t)); });

  for (const auto& r : results) {
    switch (r.outcome) {
      case TrialOutcome::counted:
        ++table.counts[r.rank];
        if (r.uncertain) ++table.rank_uncertain;
        continue;
      case TrialOutcome::infeasible: ++table.skipped_infeasible; break;
      case TrialOutcome::unbounded: ++table.skipped_unbounded; break;
      case TrialOutcome::failed: ++table.skipped_failed; break;
    }
    ++table.skipped;
  }
  return table;
}

TightnessReport tightness_report(int m, int trials, std::uint64_t seed) {
  if (m % 2 != 0 || m < 4 || m > 16) {
    throw Error(ErrorCode::invalid_argument, "tightness_report requires even m in [4, 16]");
  }
  if (trials > 0 && m > 12) {
    throw Error(ErrorCode::invalid_argument, "random SDP trials are limited to m <= 12");
  }
  const AlgDegCheck check = check_lemma_algdeg(m);
  TightnessReport report;
  report.m = m;
  report.n = check.n;
  report.r = check.r;
  report.delta = check.delta;
  report.log2_delta = check.log2_delta;
  report.psd_bound = std::sqrt(check.log2_delta);
  report.tightness_bound = std::sqrt(20.0 * check.log2_delta);
  // m <= sqrt(20 log2 delta)  <=>  delta^20 >= 2^{m^2}
  report.m_within_bound = check.holds;

  for (int r : pataki_range(m, report.n).ranks) {
    if (r >= 1) report.delta_by_rank.emplace_back(r, delta(report.n, m, r));
  }
  if (trials > 0) {
    report.table = rank_frequency(m, static_cast<int>(report.n), trials, seed);
    const int counted = report.table->counted();
    report.target_rank_frequency =
        counted > 0 ? static_cast<double>(report.table->count(report.r)) / counted : 0.0;
  }
  return report;
}

ThresholdScan tightness_threshold_scan(int max_m) {
  if (max_m < 4) throw Error(ErrorCode::invalid_argument, "threshold scan requires max_m >= 4");
  ThresholdScan scan;
  for (int m = 4; m <= max_m; m += 2) {
    scan.rows.push_back(check_lemma_algdeg(m));
    const auto& row = scan.rows.back();
    if (row.holds && !scan.first_holding_m) scan.first_holding_m = m;
    if (scan.rows.size() > 1 && !(row.delta > scan.rows[scan.rows.size() - 2].delta)) {
      scan.strictly_increasing = false;
    }
  }
  return scan;
}

namespace {

nlohmann::ordered_json pataki_json(const PatakiRange& range) {
  return {{"m", range.m}, {"n", range.n}, {"ranks", range.ranks}, {"strict_ranks", range.strict_ranks}};
}

nlohmann::ordered_json table_json(const RankFrequencyTable& table) {
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (const auto& [rank, occurrences] : table.counts) counts[std::to_string(rank)] = occurrences;
  return {{"m", table.m},
          {"n", table.n},
          {"trials", table.trials},
          {"seed", table.seed},
          {"counts", counts},
          {"counted", table.counted()},
          {"inside_pataki", table.inside_pataki()},
          {"skipped", table.skipped},
          {"skipped_infeasible", table.skipped_infeasible},
          {"skipped_unbounded", table.skipped_unbounded},
          {"skipped_failed", table.skipped_failed},
          {"rank_uncertain", table.rank_uncertain},
          {"pataki", pataki_json(table.pataki)}};
}

}  // namespace

std::string rank_table_to_json(const RankFrequencyTable& table) { return table_json(table).dump(2); }

std::string rank_table_to_csv(const RankFrequencyTable& table) {
  std::ostringstream out;
  out << "rank,count,in_pataki,strict\n";
  for (int r = 0; r <= table.m; ++r) {
    const bool strict =
        std::find(table.pataki.strict_ranks.begin(), table.pataki.strict_ranks.end(), r) != table.pataki.strict_ranks.end();
    out << r << ',' << table.count(r) << ',' << (table.pataki.contains(r) ? 1 : 0) << ',' << (strict ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string tightness_to_json(const TightnessReport& report, const ThresholdScan& scan) {
  nlohmann::ordered_json by_rank = nlohmann::ordered_json::array();
  for (const auto& [r, value] : report.delta_by_rank) {
    by_rank.push_back({{"r", r}, {"delta", value.str()}, {"log2_delta", value > 0 ? log2_big(value) : 0.0}});
  }
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : scan.rows) {
    rows.push_back({{"m", row.m},
                    {"n", row.n},
                    {"r", row.r},
                    {"delta", row.delta.str()},
                    {"log2_delta", row.log2_delta},
                    {"threshold", row.threshold},
                    {"holds", row.holds}});
  }
  nlohmann::ordered_json doc = {{"m", report.m},
                                {"n", report.n},
                                {"r", report.r},
                                {"delta", report.delta.str()},
                                {"log2_delta", report.log2_delta},
                                {"psd_bound", report.psd_bound},
                                {"tightness_bound", report.tightness_bound},
                                {"m_within_bound", report.m_within_bound},
                                {"delta_by_rank", by_rank},
                                {"scan", {{"rows", rows},
                                          {"first_holding_m", scan.first_holding_m ? nlohmann::ordered_json(*scan.first_holding_m)
                                                                                  : nlohmann::ordered_json(nullptr)},
                                          {"strictly_increasing", scan.strictly_increasing}}}};
  if (report.table) {
    doc["target_rank_frequency"] = report.target_rank_frequency;
    doc["table"] = table_json(*report.table);
  }
  return doc.dump(2);
}

}  // namespace psdrank
