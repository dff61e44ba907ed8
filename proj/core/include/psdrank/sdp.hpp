#pragma once

// Small dense semidefinite programs of the form
//
//   max c^T x  s.t.  X = A_0 + x_1 A_1 + ... + x_n A_n  is PSD,
//
// with dual  min Trace(A_0 Z)  s.t.  A^*(Z) + c = 0,  Z PSD.
// At an optimum c^T x = Trace(A_0 Z) and XZ = 0.

#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "psdrank/linalg.hpp"

namespace psdrank {

enum class SdpStatus { optimal, infeasible, unbounded, numerical_failure };

std::string_view to_string(SdpStatus status);

struct SdpResiduals {
  double primal = 0.0;           // ||X - A_0 - A(x)||_F
  double dual = 0.0;             // ||A^*(Z) + c||
  double complementarity = 0.0;  // Trace(XZ)
};

struct SdpSolution {
  SdpStatus status = SdpStatus::numerical_failure;
  Eigen::VectorXd x;
  SymMat X;
  SymMat Z;
  double value = 0.0;
  int rank_X = 0;
  int rank_Z = 0;
  Eigen::VectorXd spectrum_X;  // descending, for auditing rank decisions
  Eigen::VectorXd spectrum_Z;
  bool rank_uncertain = false;  // lambda_r / lambda_{r+1} < 1e2 for X or Z
  SdpResiduals residuals;
  std::optional<Eigen::VectorXd> ray;  // set when unbounded: A(ray) PSD, c^T ray > 0
  int iterations = 0;
};

struct SdpOptions {
  double tolerance = 1e-11;        // target relative gap and dual infeasibility
  double accept_tolerance = 1e-7;  // looser bar for declaring optimal after stalling
  int max_iterations = 150;
  double rank_tolerance = kRankTolerance;
  double divergence_bound = 1e8;
};

// Requires A_0 positive definite (throws Error(not_interior) otherwise).
// Iteration-limit or breakdown is reported as status numerical_failure.
SdpSolution solve_sdp(const Pencil& pencil, const Eigen::VectorXd& c, const SdpOptions& options = {});

// Support value max_{x in S} c^T x, or nullopt when unbounded or failed.
std::optional<double> support_value(const Pencil& pencil, const Eigen::VectorXd& c,
                                    const SdpOptions& options = {});

// Finds x with A_0 + A(x) positive definite by maximizing the smallest
// eigenvalue inside the box |x_i| <= box. Returns nullopt if none exists there.
std::optional<Eigen::VectorXd> strictly_feasible_point(const Pencil& pencil, double box = 1e4);

// Pencil translated so that the origin moves to `center`.
Pencil recenter(const Pencil& pencil, const Eigen::VectorXd& center);

}  // namespace psdrank
