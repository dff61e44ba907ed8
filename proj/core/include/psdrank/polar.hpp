#pragma once

// Boundary sampling of polars and minimal vanishing-degree estimation.
//
// For a body C containing the origin in its interior, c / h_C(c) lies on the
// boundary of the polar whenever the support value h_C(c) is positive. For a
// shadow pi(S), h_C(c) = max_{x in S} <pi^T c, x>.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "psdrank/bounds.hpp"
#include "psdrank/linalg.hpp"

namespace psdrank {

inline constexpr double kValueFloor = 1e-9;
inline constexpr double kKernelTolerance = 1e-7;

struct BoundaryCloud {
  int ambient_dim = 0;
  std::vector<Eigen::VectorXd> points;      // direction / value
  std::vector<Eigen::VectorXd> directions;  // unit directions that produced a point
  std::vector<double> values;               // support values
  std::vector<Eigen::VectorXd> skipped;     // unbounded, failed or near-zero value
  std::uint64_t seed = 0;
};

using SupportFunction = std::function<std::optional<double>(const Eigen::VectorXd&)>;

// Seeded directions uniform on the unit sphere (normalized Gaussians).
std::vector<Eigen::VectorXd> sample_directions(int dim, int count, std::uint64_t seed);

// Generic sampler over any support oracle. Throws Error(all_skipped) if no
// direction yields a point.
BoundaryCloud sample_boundary(const SupportFunction& support, int dim, int num_dirs, std::uint64_t seed);

// Support SDP per direction, lifting through the projection when present.
// Throws Error(not_interior) unless A_0 is positive definite.
BoundaryCloud sample_polar_boundary(const Pencil& pencil, int num_dirs, std::uint64_t seed);

// Support oracle h_C for the body described by the pencil.
SupportFunction pencil_support(const Pencil& pencil);

struct DegreeDiagnostics {
  int degree = 0;
  int monomial_count = 0;
  int sample_count = 0;
  std::vector<double> singular_tail;  // smallest singular values, ascending
  double sigma_max = 0.0;
  int kernel_dim = 0;
  // sigma of the last non-kernel direction over sigma of the largest kernel
  // direction (floored at machine epsilon * sigma_max); 0 when no kernel.
  double gap = 0.0;
};

struct FitOptions {
  double kernel_tolerance = kKernelTolerance;
  int sample_factor = 2;  // minimum samples per monomial
  double fit_tolerance = 1e-6;
};

struct DegreeFitReport {
  std::vector<int> degrees_tested;
  std::vector<DegreeDiagnostics> per_degree;
  std::optional<int> fitted_degree;
  // Unit-norm coefficients in original coordinates, one per exponent vector.
  std::vector<std::vector<int>> fitted_exponents;
  std::vector<double> fitted_polynomial;
  double fit_residual = 0.0;  // max |p(point)| over the cloud
  double rms_radius = 1.0;
  FitOptions options;
};

// Exponent vectors of total degree <= degree in dim variables, graded order.
std::vector<std::vector<int>> monomial_exponents(int dim, int degree);
int monomial_count(int dim, int degree);

// Throws Error(insufficient_samples) if the cloud cannot support even degree 1.
DegreeFitReport fit_min_vanishing_degree(const BoundaryCloud& cloud, int max_degree, const FitOptions& options = {});

// Exact 4x4 pencil in (x, y, s, t) whose (x, y)-shadow is the regular pentagon
// with vertices (cos 2k pi/5, sin 2k pi/5).
Pencil pentagon_fixture();

struct PipelineResult {
  BoundaryCloud cloud;
  DegreeFitReport report;
  std::optional<int> d_est;
  std::optional<PsdRankBound> psd_bound;
  int largest_degree_tested = 0;  // when inconclusive: no vanishing degree up to here
};

// num_dirs <= 0 selects 3 * monomial_count(image_dim, max_degree).
PipelineResult bound_pipeline(const Pencil& pencil, int num_dirs, int max_degree, std::uint64_t seed,
                              const FitOptions& options = {});

std::string cloud_to_json(const BoundaryCloud& cloud);
BoundaryCloud parse_cloud_json(std::string_view text);
std::string cloud_to_csv(const BoundaryCloud& cloud);
std::string fit_report_to_json(const DegreeFitReport& report);

}  // namespace psdrank
