#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "psdrank/bounds.hpp"
#include "psdrank/combinatorics.hpp"
#include "psdrank/error.hpp"
#include "psdrank/experiments.hpp"
#include "psdrank/kkt.hpp"
#include "psdrank/pencil_io.hpp"
#include "psdrank/polar.hpp"
#include "psdrank/sdp.hpp"
#include "psdrank/version.hpp"

namespace psdrank::cli {

using Json = nlohmann::ordered_json;

namespace {

// Thrown by subcommands for conditions that are not core errors.
struct Failure {
  int code;
  std::string message;
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

Json manifest(const CLI::App& sub, const std::vector<std::uint64_t>& seeds) {
  Json flags = Json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_name();
    if (name == "--help" || name == "-h") continue;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      if (results.size() == 1) {
        flags[name] = results.front();
      } else {
        flags[name] = results;
      }
    } else if (!opt->get_default_str().empty() && opt->get_default_str() != "{}") {
      flags[name] = opt->get_default_str();
    }
  }
  return {{"subcommand", sub.get_name()},
          {"flags", flags},
          {"seeds", seeds},
          {"version", kVersion},
          {"timestamp", utc_timestamp()}};
}

std::string csv_with_manifest(const Json& man, const std::string& body) {
  return "# manifest: " + man.dump() + "\n" + body;
}

std::string json_with_manifest(const Json& man, Json result) {
  Json doc = {{"manifest", man}, {"result", std::move(result)}};
  return doc.dump(2) + "\n";
}

Json pataki_json(const PatakiRange& range) {
  return {{"m", range.m}, {"n", range.n}, {"ranks", range.ranks}, {"strict_ranks", range.strict_ranks}};
}

Json bound_json(const PsdRankBound& b) { return {{"bound", b.bound}, {"ceil", b.ceil_bound}}; }

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::numerical_failure: return kExitNumerical;
    case ErrorCode::not_interior:
    case ErrorCode::all_skipped:
    case ErrorCode::insufficient_samples: return kExitInput;
    case ErrorCode::invalid_argument:
    case ErrorCode::dimension_mismatch:
    case ErrorCode::pataki_violation:
    case ErrorCode::missing_variable:
    case ErrorCode::parse_error:
    case ErrorCode::io_error: return kExitUsage;
  }
  return kExitUsage;
}

// Unwraps {"manifest": ..., "result": ...} documents.
std::string strip_envelope(const std::string& text) {
  const Json doc = Json::parse(text, nullptr, false);
  if (!doc.is_discarded() && doc.is_object() && doc.contains("result")) return doc.at("result").dump();
  return text;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Json pipeline_json(const PipelineResult& res) {
  Json out = {{"d_est", res.d_est ? Json(*res.d_est) : Json(nullptr)},
              {"psd_bound", res.psd_bound ? bound_json(*res.psd_bound) : Json(nullptr)},
              {"largest_degree_tested", res.largest_degree_tested},
              {"inconclusive", !res.d_est.has_value()},
              {"points", res.cloud.points.size()},
              {"skipped", res.cloud.skipped.size()},
              {"report", Json::parse(fit_report_to_json(res.report))}};
  return out;
}

struct Output {
  std::string body;
  int code = kExitOk;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lower bounds on positive semidefinite rank"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", std::string(kVersion));

  std::string out_path;
  std::string format = "json";
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub, std::vector<std::string> formats) {
    sub->add_option("--out", out_path, "Write output to this file instead of stdout");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember(std::move(formats)));
  };

  std::map<const CLI::App*, std::function<Output(const CLI::App&)>> handlers;

  // psi
  auto* psi_cmd = app.add_subcommand("psi", "Sum of maximal minors of the Pascal matrix on rows I");
  std::vector<int> psi_set;
  std::vector<int> psi_interval;
  int psi_m = 0;
  auto* set_opt = psi_cmd->add_option("--set", psi_set, "Index set I, comma separated (may be empty)")
                      ->expected(0, CLI::detail::expected_max_vector_size)
                      ->delimiter(',');
  auto* interval_opt = psi_cmd->add_option("--interval", psi_interval, "p q: the interval [p+1, q]")->expected(2);
  psi_cmd->add_option("--m", psi_m, "Ambient size (default: largest element)");
  set_opt->excludes(interval_opt);
  add_common(psi_cmd, {"json", "text"});
  handlers[psi_cmd] = [&](const CLI::App& sub) -> Output {
    if (sub.count("--set") == 0 && sub.count("--interval") == 0) {
      throw Failure{kExitUsage, "psi requires --set or --interval"};
    }
    Json result;
    std::string text;
    if (sub.count("--set") > 0) {
      const int largest = psi_set.empty() ? 0 : *std::max_element(psi_set.begin(), psi_set.end());
      const IndexSet set(psi_set, psi_m > 0 ? psi_m : std::max(largest, 1));
      const BigInt value = psi(set);
      result = {{"set", set.elements()}, {"value", value.str()}};
      text = value.str() + "\n";
    } else {
      const int p = psi_interval[0];
      const int q = psi_interval[1];
      if (p < 0 || p > q) throw Failure{kExitUsage, "--interval requires 0 <= p <= q"};
      const BigInt by_minors = psi(IndexSet::interval(p + 1, q, std::max(q, 1)));
      const BigInt by_product = psi_interval_product(p, q);
      const BigInt by_binomials = psi_interval_harris_tu(q, q - p);
      const bool agree = by_minors == by_product && by_product == by_binomials;
      const std::string message = agree ? "all three formulas agree" : "formulas disagree";
      result = {{"p", p},
                {"q", q},
                {"value", by_minors.str()},
                {"minor_sum", by_minors.str()},
                {"product", by_product.str()},
                {"binomial_product", by_binomials.str()},
                {"agree", agree},
                {"message", message}};
      text = by_minors.str() + "\n" + message + "\n";
      if (!agree) {
        return {format == "text" ? text : json_with_manifest(manifest(sub, {}), result), kExitNumerical};
      }
    }
    return {format == "text" ? text : json_with_manifest(manifest(sub, {}), result)};
  };

  // degree
  auto* degree_cmd = app.add_subcommand("degree", "Algebraic degree delta(n, m, r) of semidefinite programming");
  long deg_n = 0;
  int deg_m = 0;
  int deg_r = 0;
  bool all_ranks = false;
  bool force = false;
  degree_cmd->add_option("--n", deg_n, "Number of coordinates")->required();
  degree_cmd->add_option("--m", deg_m, "Matrix size")->required();
  degree_cmd->add_option("--r", deg_r, "Rank (ignored with --all-ranks)");
  degree_cmd->add_flag("--all-ranks", all_ranks, "One row per rank in the Pataki range, plus their sum");
  degree_cmd->add_flag("--force", force, "Evaluate outside the Pataki range");
  add_common(degree_cmd, {"json", "csv", "text"});
  handlers[degree_cmd] = [&](const CLI::App& sub) -> Output {
    const Json man = manifest(sub, {});
    if (all_ranks) {
      const PatakiRange range = pataki_range(deg_m, deg_n);
      Json rows = Json::array();
      std::ostringstream csv;
      csv << "r,delta,log2_delta\n";
      BigInt sum = 0;
      for (int r : range.ranks) {
        if (r < 1) continue;
        const BigInt value = delta(deg_n, deg_m, r);
        sum += value;
        const double lg = value > 0 ? log2_big(value) : 0.0;
        rows.push_back({{"r", r}, {"delta", value.str()}, {"log2_delta", lg}});
        csv << r << ',' << value.str() << ',' << std::setprecision(17) << lg << '\n';
      }
      if (format == "csv") return {csv_with_manifest(man, csv.str())};
      if (format == "text") return {csv.str() + "sum," + sum.str() + "\n"};
      return {json_with_manifest(man, {{"n", deg_n},
                                       {"m", deg_m},
                                       {"pataki", pataki_json(range)},
                                       {"rows", rows},
                                       {"sum", sum.str()},
                                       {"log2_sum", sum > 0 ? log2_big(sum) : 0.0}})};
    }
    if (sub.count("--r") == 0) throw Failure{kExitUsage, "degree requires --r or --all-ranks"};
    const bool in_range = satisfies_pataki(deg_m, deg_n, deg_r);
    if (!in_range && !force) {
      throw Failure{kExitUsage, "r = " + std::to_string(deg_r) + " is outside the Pataki range for (m, n) = (" +
                                    std::to_string(deg_m) + ", " + std::to_string(deg_n) + "); use --force"};
    }
    const BigInt value = delta(deg_n, deg_m, deg_r);
    const double lg = value > 0 ? log2_big(value) : 0.0;
    if (format == "text") return {value.str() + "\n"};
    if (format == "csv") {
      std::ostringstream csv;
      csv << "n,m,r,delta,log2_delta\n" << deg_n << ',' << deg_m << ',' << deg_r << ',' << value.str() << ','
          << std::setprecision(17) << lg << '\n';
      return {csv_with_manifest(man, csv.str())};
    }
    return {json_with_manifest(
        man, {{"n", deg_n}, {"m", deg_m}, {"r", deg_r}, {"delta", value.str()}, {"log2_delta", lg}, {"in_pataki_range", in_range}})};
  };

  // pataki
  auto* pataki_cmd = app.add_subcommand("pataki", "Ranks allowed at generic optima");
  int pat_m = 0;
  long pat_n = 0;
  pataki_cmd->add_option("--m", pat_m, "Matrix size")->required();
  pataki_cmd->add_option("--n", pat_n, "Number of coordinates")->required();
  add_common(pataki_cmd, {"json", "text"});
  handlers[pataki_cmd] = [&](const CLI::App& sub) -> Output {
    const PatakiRange range = pataki_range(pat_m, pat_n);
    if (format == "text") {
      std::ostringstream s;
      for (std::size_t k = 0; k < range.ranks.size(); ++k) s << (k ? " " : "") << range.ranks[k];
      return {s.str() + "\n"};
    }
    return {json_with_manifest(manifest(sub, {}), pataki_json(range))};
  };

  // bound
  auto* bound_cmd = app.add_subcommand("bound", "sqrt(log2 d) psd-rank bound and log2 d LP bound");
  std::string bound_d;
  int bound_m = 0;
  auto* d_opt = bound_cmd->add_option("--d", bound_d, "Degree of the algebraic boundary of the polar (decimal)");
  auto* bm_opt = bound_cmd->add_option("--bezout-m", bound_m, "Use d = 2^{m^2}");
  d_opt->excludes(bm_opt);
  add_common(bound_cmd, {"json", "text"});
  handlers[bound_cmd] = [&](const CLI::App& sub) -> Output {
    BigInt d;
    if (sub.count("--d") > 0) {
      if (bound_d.empty() || !std::all_of(bound_d.begin(), bound_d.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
        throw Failure{kExitUsage, "--d must be a non-negative decimal integer"};
      }
      d = BigInt(bound_d);
    } else if (sub.count("--bezout-m") > 0) {
      d = bezout_kkt_count(bound_m);
    } else {
      throw Failure{kExitUsage, "bound requires --d or --bezout-m"};
    }
    const PsdRankBound b = psd_rank_lower_bound(d);
    std::ostringstream bound_text;
    bound_text << std::setprecision(17) << b.bound;
    if (format == "text") return {bound_text.str() + " " + std::to_string(b.ceil_bound) + "\n"};
    return {json_with_manifest(manifest(sub, {}), {{"d", d.str()},
                                                    {"bound", b.bound},
                                                    {"ceil", b.ceil_bound},
                                                    {"lp_bound", lp_extension_lower_bound(d)}})};
  };

  // kkt-export
  auto* kkt_cmd = app.add_subcommand("kkt-export", "Build and export a KKT polynomial system");
  std::string pencil_path;
  std::string variant_name = "plain";
  int kkt_rank = -1;
  std::vector<double> kkt_c;
  bool kkt_force = false;
  kkt_cmd->add_option("--pencil", pencil_path, "Pencil JSON file")->required();
  kkt_cmd->add_option("--variant", variant_name, "System variant")
      ->check(CLI::IsMember({"plain", "normalized", "rank"}));
  kkt_cmd->add_option("--rank", kkt_rank, "Rank r for the rank variant");
  kkt_cmd->add_option("--c", kkt_c, "Numeric objective for the plain variant (default: symbolic)")->delimiter(',');
  kkt_cmd->add_flag("--force", kkt_force, "Allow ranks outside the Pataki range");
  std::string kkt_format = "plain_text";
  kkt_cmd->add_option("--out", out_path, "Write output to this file instead of stdout");
  kkt_cmd->add_option("--format", kkt_format, "Output format")->check(CLI::IsMember({"plain_text", "json"}));
  handlers[kkt_cmd] = [&](const CLI::App& sub) -> Output {
    const Pencil pencil = load_pencil(pencil_path);
    PolySystem system;
    switch (parse_kkt_variant(variant_name)) {
      case KktVariant::plain:
        system = build_kkt(pencil, kkt_c.empty() ? std::nullopt : std::optional<Eigen::VectorXd>(to_vector(kkt_c)));
        break;
      case KktVariant::normalized: system = build_kkt_normalized(pencil); break;
      case KktVariant::rank:
        if (sub.count("--rank") == 0) throw Failure{kExitUsage, "--variant rank requires --rank"};
        system = build_kkt_rank(pencil, kkt_rank, kkt_force);
        break;
    }
    const Json man = manifest(sub, {});
    const ExportFormat fmt = parse_export_format(kkt_format);
    if (fmt == ExportFormat::plain_text) return {csv_with_manifest(man, export_system(system, fmt))};
    Json doc = Json::parse(export_system(system, fmt));
    doc["manifest"] = man;
    return {doc.dump(2) + "\n"};
  };

  // sample-polar
  auto* sample_cmd = app.add_subcommand("sample-polar", "Sample boundary points of the polar");
  int num_dirs = 0;
  sample_cmd->add_option("--pencil", pencil_path, "Pencil JSON file")->required();
  sample_cmd->add_option("--dirs", num_dirs, "Number of sampled directions")->required()->check(CLI::PositiveNumber);
  sample_cmd->add_option("--seed", seed, "Direction seed");
  add_common(sample_cmd, {"json", "csv"});
  handlers[sample_cmd] = [&](const CLI::App& sub) -> Output {
    const BoundaryCloud cloud = sample_polar_boundary(load_pencil(pencil_path), num_dirs, seed);
    const Json man = manifest(sub, {seed});
    if (format == "csv") return {csv_with_manifest(man, cloud_to_csv(cloud))};
    return {json_with_manifest(man, Json::parse(cloud_to_json(cloud)))};
  };

  // fit-degree
  auto* fit_cmd = app.add_subcommand("fit-degree", "Minimal degree of a polynomial vanishing on a point cloud");
  std::string cloud_path;
  int max_degree = 6;
  double kernel_tol = kKernelTolerance;
  fit_cmd->add_option("--cloud", cloud_path, "Cloud JSON file (as written by sample-polar)")->required();
  fit_cmd->add_option("--max-degree", max_degree, "Largest degree tested")->check(CLI::PositiveNumber);
  fit_cmd->add_option("--kernel-tol", kernel_tol, "Relative singular-value threshold");
  add_common(fit_cmd, {"json"});
  handlers[fit_cmd] = [&](const CLI::App& sub) -> Output {
    const BoundaryCloud cloud = parse_cloud_json(strip_envelope(read_text_file(cloud_path)));
    FitOptions options;
    options.kernel_tolerance = kernel_tol;
    const DegreeFitReport report = fit_min_vanishing_degree(cloud, max_degree, options);
    return {json_with_manifest(manifest(sub, {cloud.seed}), Json::parse(fit_report_to_json(report)))};
  };

  // pipeline
  auto* pipe_cmd = app.add_subcommand("pipeline", "Sample, fit and bound end to end");
  pipe_cmd->add_option("--pencil", pencil_path, "Pencil JSON file")->required();
  pipe_cmd->add_option("--dirs", num_dirs, "Number of directions (0: three times the monomial count)");
  pipe_cmd->add_option("--max-degree", max_degree, "Largest degree tested")->check(CLI::PositiveNumber);
  pipe_cmd->add_option("--seed", seed, "Direction seed");
  add_common(pipe_cmd, {"json"});
  handlers[pipe_cmd] = [&](const CLI::App& sub) -> Output {
    const PipelineResult res = bound_pipeline(load_pencil(pencil_path), num_dirs, max_degree, seed);
    return {json_with_manifest(manifest(sub, {seed}), pipeline_json(res))};
  };

  // rank-freq
  auto* freq_cmd = app.add_subcommand("rank-freq", "Optimal-rank frequencies over random Gaussian SDPs");
  int freq_m = 0;
  int freq_n = 0;
  int trials = 200;
  freq_cmd->add_option("--m", freq_m, "Matrix size")->required();
  freq_cmd->add_option("--n", freq_n, "Number of coordinates")->required();
  freq_cmd->add_option("--trials", trials, "Number of trials")->check(CLI::PositiveNumber);
  freq_cmd->add_option("--seed", seed, "Global seed; trial seeds are derived by counter");
  add_common(freq_cmd, {"json", "csv"});
  handlers[freq_cmd] = [&](const CLI::App& sub) -> Output {
    const RankFrequencyTable table = rank_frequency(freq_m, freq_n, trials, seed);
    const Json man = manifest(sub, {seed});
    if (format == "csv") return {csv_with_manifest(man, rank_table_to_csv(table))};
    return {json_with_manifest(man, Json::parse(rank_table_to_json(table)))};
  };

  // tightness
  auto* tight_cmd = app.add_subcommand("tightness", "Tightness regime n = t_{m/2}+1, r = m/2+1");
  int tight_m = 0;
  int tight_trials = 200;
  tight_cmd->add_option("--m", tight_m, "Even matrix size, 4..16 (trials need m <= 12)")->required();
  tight_cmd->add_option("--trials", tight_trials, "Random SDP trials (0 skips the empirical part)")
      ->check(CLI::NonNegativeNumber);
  tight_cmd->add_option("--seed", seed, "Global seed");
  add_common(tight_cmd, {"json"});
  handlers[tight_cmd] = [&](const CLI::App& sub) -> Output {
    const TightnessReport report = tightness_report(tight_m, tight_trials, seed);
    const ThresholdScan scan = tightness_threshold_scan(tight_m);
    return {json_with_manifest(manifest(sub, {seed}), Json::parse(tightness_to_json(report, scan)))};
  };

  // pentagon
  auto* pent_cmd = app.add_subcommand("pentagon", "Regular-pentagon shadow demo; expects d = 5");
  int pent_dirs = 600;
  pent_cmd->add_option("--dirs", pent_dirs, "Number of sampled directions")->check(CLI::PositiveNumber);
  pent_cmd->add_option("--max-degree", max_degree, "Largest degree tested")->check(CLI::PositiveNumber);
  pent_cmd->add_option("--seed", seed, "Direction seed");
  add_common(pent_cmd, {"json"});
  handlers[pent_cmd] = [&](const CLI::App& sub) -> Output {
    const Pencil pencil = pentagon_fixture();
    const PipelineResult res = bound_pipeline(pencil, pent_dirs, max_degree, seed);
    const SupportFunction support = pencil_support(pencil);
    Json vertex_support = Json::array();
    for (int k = 0; k < 5; ++k) {
      const double angle = 2.0 * std::numbers::pi * k / 5.0;
      Eigen::VectorXd dir(2);
      dir << std::cos(angle), std::sin(angle);
      const auto value = support(dir);
      vertex_support.push_back(value ? Json(*value) : Json(nullptr));
    }
    Json result = pipeline_json(res);
    result["vertex_support"] = vertex_support;
    const bool ok = res.d_est && *res.d_est == 5;
    result["expected_degree"] = 5;
    result["matches_expected"] = ok;
    Output output{json_with_manifest(manifest(sub, {seed}), result)};
    if (!ok) {
      err << "pentagon: expected d = 5, got " << (res.d_est ? std::to_string(*res.d_est) : "none") << "\n";
      output.code = kExitNumerical;
    }
    return output;
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  try {
    const Output output = handlers.at(sub)(*sub);
    if (out_path.empty()) {
      out << output.body;
    } else {
      write_text_file(out_path, output.body);
    }
    return output.code;
  } catch (const Failure& f) {
    err << sub->get_name() << ": " << f.message << "\n";
    return f.code;
  } catch (const Error& e) {
    err << sub->get_name() << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    err << sub->get_name() << ": parse_error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace psdrank::cli
