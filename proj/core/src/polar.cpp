#include "psdrank/polar.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "json.hpp"
#include "parallel.hpp"
#include "psdrank/error.hpp"
#include "psdrank/sdp.hpp"

namespace psdrank {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using nlohmann::json;

std::vector<VectorXd> sample_directions(int dim, int count, std::uint64_t seed) {
  if (dim < 1) throw Error(ErrorCode::invalid_argument, "direction dimension must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<VectorXd> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  while (static_cast<int>(out.size()) < count) {
    VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = normal(rng);
    const double norm = v.norm();
    if (norm < 1e-12) continue;
    out.push_back(v / norm);
  }
  return out;
}

BoundaryCloud sample_boundary(const SupportFunction& support, int dim, int num_dirs, std::uint64_t seed) {
  if (num_dirs < 1) throw Error(ErrorCode::invalid_argument, "num_dirs must be positive");
  const std::vector<VectorXd> directions = sample_directions(dim, num_dirs, seed);

  std::vector<std::optional<double>> values(directions.size());
  detail::parallel_for(directions.size(), [&](std::size_t i) {
    try {
      values[i] = support(directions[i]);
    } catch (const Error&) {
      values[i] = std::nullopt;
    }
  });

  BoundaryCloud cloud;
  cloud.ambient_dim = dim;
  cloud.seed = seed;
  for (std::size_t i = 0; i < directions.size(); ++i) {
    if (!values[i] || !std::isfinite(*values[i]) || *values[i] <= kValueFloor) {
      cloud.skipped.push_back(directions[i]);
      continue;
    }
    cloud.directions.push_back(directions[i]);
    cloud.values.push_back(*values[i]);
    cloud.points.push_back(directions[i] / *values[i]);
  }
  if (cloud.points.empty()) throw Error(ErrorCode::all_skipped, "no direction produced a boundary point");
  return cloud;
}

SupportFunction pencil_support(const Pencil& pencil) {
  return [pencil](const VectorXd& direction) -> std::optional<double> {
    const VectorXd lifted = pencil.projection ? VectorXd(pencil.projection->transpose() * direction) : direction;
    return support_value(pencil, lifted);
  };
}

BoundaryCloud sample_polar_boundary(const Pencil& pencil, int num_dirs, std::uint64_t seed) {
  if (pencil.m == 0 || sym_eig(pencil.constant()).values.minCoeff() <= 0.0) {
    throw Error(ErrorCode::not_interior, "A_0 must be positive definite");
  }
  return sample_boundary(pencil_support(pencil), pencil.image_dim(), num_dirs, seed);
}

namespace {

void exponents_recursive(int dim, int remaining, std::vector<int>& current, int position,
                         std::vector<std::vector<int>>& out) {
  if (position == dim - 1) {
    current[position] = remaining;
    out.push_back(current);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[position] = e;
    exponents_recursive(dim, remaining - e, current, position + 1, out);
  }
}

double evaluate_monomial(const VectorXd& point, const std::vector<int>& exponents) {
  double v = 1.0;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] > 0) v *= std::pow(point(static_cast<Eigen::Index>(i)), exponents[i]);
  }
  return v;
}

}  // namespace

std::vector<std::vector<int>> monomial_exponents(int dim, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> current(static_cast<std::size_t>(dim), 0);
  for (int d = 0; d <= degree; ++d) exponents_recursive(dim, d, current, 0, out);
  return out;
}

int monomial_count(int dim, int degree) {
  // C(degree + dim, dim)
  long count = 1;
  for (int i = 1; i <= dim; ++i) count = count * (degree + i) / i;
  return static_cast<int>(count);
}

DegreeFitReport fit_min_vanishing_degree(const BoundaryCloud& cloud, int max_degree, const FitOptions& options) {
  if (max_degree < 1) throw Error(ErrorCode::invalid_argument, "max_degree must be at least 1");
  if (cloud.points.empty()) throw Error(ErrorCode::insufficient_samples, "empty cloud");
  const int dim = cloud.ambient_dim;
  const int samples = static_cast<int>(cloud.points.size());
  if (samples < options.sample_factor * monomial_count(dim, 1)) {
    throw Error(ErrorCode::insufficient_samples,
                std::to_string(samples) + " points cannot support a degree-1 fit in dimension " + std::to_string(dim));
  }

  DegreeFitReport report;
  report.options = options;
  double mean_sq = 0.0;
  for (const auto& p : cloud.points) mean_sq += p.squaredNorm();
  report.rms_radius = std::sqrt(mean_sq / samples);
  if (!(report.rms_radius > 0.0)) report.rms_radius = 1.0;

  std::vector<VectorXd> scaled;
  scaled.reserve(cloud.points.size());
  for (const auto& p : cloud.points) scaled.push_back(p / report.rms_radius);

  for (int degree = 1; degree <= max_degree; ++degree) {
    const auto exponents = monomial_exponents(dim, degree);
    const int cols = static_cast<int>(exponents.size());
    if (samples < options.sample_factor * cols) break;

    MatrixXd vandermonde(samples, cols);
    for (int i = 0; i < samples; ++i) {
      for (int j = 0; j < cols; ++j) vandermonde(i, j) = evaluate_monomial(scaled[i], exponents[j]);
    }
    Eigen::JacobiSVD<MatrixXd> svd(vandermonde, Eigen::ComputeThinV);
    const VectorXd& sigma = svd.singularValues();  // descending

    DegreeDiagnostics diag;
    diag.degree = degree;
    diag.monomial_count = cols;
    diag.sample_count = samples;
    diag.sigma_max = sigma(0);
    for (int k = cols - 1; k >= std::max(0, cols - 6); --k) diag.singular_tail.push_back(sigma(k));
    const double threshold = options.kernel_tolerance * sigma(0);
    diag.kernel_dim = static_cast<int>((sigma.array() <= threshold).count());
    if (diag.kernel_dim > 0 && diag.kernel_dim < cols) {
      const double floor = std::numeric_limits<double>::epsilon() * sigma(0);
      diag.gap = sigma(cols - diag.kernel_dim - 1) / std::max(sigma(cols - diag.kernel_dim), floor);
    }
    report.degrees_tested.push_back(degree);
    report.per_degree.push_back(diag);

    if (diag.kernel_dim > 0 && !report.fitted_degree) {
      report.fitted_degree = degree;
      const VectorXd kernel = svd.matrixV().col(cols - 1);
      VectorXd coeffs(cols);
      for (int j = 0; j < cols; ++j) {
        int total = 0;
        for (int e : exponents[j]) total += e;
        coeffs(j) = kernel(j) / std::pow(report.rms_radius, total);
      }
      coeffs.normalize();
      report.fitted_exponents = exponents;
      report.fitted_polynomial.assign(coeffs.data(), coeffs.data() + cols);
      for (const auto& p : cloud.points) {
        double value = 0.0;
        for (int j = 0; j < cols; ++j) value += coeffs(j) * evaluate_monomial(p, exponents[j]);
        report.fit_residual = std::max(report.fit_residual, std::abs(value));
      }
    }
  }
  return report;
}

Pencil pentagon_fixture() {
  // A(x,y,s,t) =
  //   [ 1+s   t     x+s   y-t ]
  //   [ t     1-s  -y-t   x-s ]
  //   [ x+s  -y-t   1+x  -y   ]
  //   [ y-t   x-s  -y     1-x ]
  MatrixXd a0 = MatrixXd::Identity(4, 4);
  MatrixXd ax(4, 4), ay(4, 4), as(4, 4), at(4, 4);
  ax << 0, 0, 1, 0,
        0, 0, 0, 1,
        1, 0, 1, 0,
        0, 1, 0, -1;
  ay << 0, 0, 0, 1,
        0, 0, -1, 0,
        0, -1, 0, -1,
        1, 0, -1, 0;
  as << 1, 0, 1, 0,
        0, -1, 0, -1,
        1, 0, 0, 0,
        0, -1, 0, 0;
  at << 0, 1, 0, -1,
        1, 0, -1, 0,
        0, -1, 0, 0,
        -1, 0, 0, 0;
  MatrixXd projection = MatrixXd::Zero(2, 4);
  projection(0, 0) = 1.0;
  projection(1, 1) = 1.0;
  return Pencil({SymMat(a0), SymMat(ax), SymMat(ay), SymMat(as), SymMat(at)}, projection);
}

PipelineResult bound_pipeline(const Pencil& pencil, int num_dirs, int max_degree, std::uint64_t seed,
                              const FitOptions& options) {
  if (max_degree < 1) throw Error(ErrorCode::invalid_argument, "max_degree must be at least 1");
  if (num_dirs <= 0) num_dirs = 3 * monomial_count(pencil.image_dim(), max_degree);

  PipelineResult result;
  result.cloud = sample_polar_boundary(pencil, num_dirs, seed);
  result.report = fit_min_vanishing_degree(result.cloud, max_degree, options);
  result.largest_degree_tested = result.report.degrees_tested.empty() ? 0 : result.report.degrees_tested.back();
  if (result.report.fitted_degree) {
    result.d_est = *result.report.fitted_degree;
    result.psd_bound = psd_rank_lower_bound(BigInt(*result.d_est));
  }
  return result;
}

namespace {

json vector_to_json(const VectorXd& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

std::vector<VectorXd> vectors_from_json(const json& arr, int dim) {
  std::vector<VectorXd> out;
  for (const auto& item : arr) {
    const auto values = item.get<std::vector<double>>();
    if (static_cast<int>(values.size()) != dim) throw Error(ErrorCode::parse_error, "vector of wrong dimension in cloud");
    out.push_back(Eigen::Map<const VectorXd>(values.data(), dim));
  }
  return out;
}

}  // namespace

std::string cloud_to_json(const BoundaryCloud& cloud) {
  json points = json::array();
  json directions = json::array();
  json skipped = json::array();
  for (const auto& p : cloud.points) points.push_back(vector_to_json(p));
  for (const auto& d : cloud.directions) directions.push_back(vector_to_json(d));
  for (const auto& s : cloud.skipped) skipped.push_back(vector_to_json(s));
  const json doc{{"ambient_dim", cloud.ambient_dim}, {"seed", cloud.seed},         {"points", points},
                 {"directions", directions},         {"values", cloud.values}, {"skipped", skipped}};
  return doc.dump(2);
}

BoundaryCloud parse_cloud_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    BoundaryCloud cloud;
    cloud.ambient_dim = doc.at("ambient_dim").get<int>();
    if (cloud.ambient_dim < 1) throw Error(ErrorCode::parse_error, "ambient_dim must be positive");
    cloud.seed = doc.value("seed", std::uint64_t{0});
    cloud.points = vectors_from_json(doc.at("points"), cloud.ambient_dim);
    if (doc.contains("directions")) cloud.directions = vectors_from_json(doc["directions"], cloud.ambient_dim);
    if (doc.contains("values")) cloud.values = doc["values"].get<std::vector<double>>();
    if (doc.contains("skipped")) cloud.skipped = vectors_from_json(doc["skipped"], cloud.ambient_dim);
    return cloud;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("cloud JSON: ") + e.what());
  }
}

std::string cloud_to_csv(const BoundaryCloud& cloud) {
  std::string out;
  for (int i = 0; i < cloud.ambient_dim; ++i) out += "p" + std::to_string(i + 1) + ",";
  out += "value\n";
  char buffer[64];
  for (std::size_t k = 0; k < cloud.points.size(); ++k) {
    for (int i = 0; i < cloud.ambient_dim; ++i) {
      std::snprintf(buffer, sizeof(buffer), "%.17g,", cloud.points[k](i));
      out += buffer;
    }
    std::snprintf(buffer, sizeof(buffer), "%.17g\n", k < cloud.values.size() ? cloud.values[k] : 0.0);
    out += buffer;
  }
  return out;
}

std::string fit_report_to_json(const DegreeFitReport& report) {
  json per_degree = json::array();
  for (const auto& d : report.per_degree) {
    per_degree.push_back({{"degree", d.degree},
                          {"monomial_count", d.monomial_count},
                          {"sample_count", d.sample_count},
                          {"singular_tail", d.singular_tail},
                          {"sigma_max", d.sigma_max},
                          {"kernel_dim", d.kernel_dim},
                          {"gap", d.gap}});
  }
  json doc{{"degrees_tested", report.degrees_tested},
           {"per_degree", per_degree},
           {"fitted_degree", report.fitted_degree ? json(*report.fitted_degree) : json(nullptr)},
           {"fitted_exponents", report.fitted_exponents},
           {"fitted_polynomial", report.fitted_polynomial},
           {"fit_residual", report.fit_residual},
           {"rms_radius", report.rms_radius},
           {"kernel_tolerance", report.options.kernel_tolerance},
           {"fit_tolerance", report.options.fit_tolerance}};
  return doc.dump(2);
}

}  // namespace psdrank
