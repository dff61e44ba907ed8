#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace psdrank {

// Dense real symmetric matrix. Construction symmetrizes: entries become
// (M + M^T)/2, so (i,j) and (j,i) are bit-identical afterwards.
class SymMat {
 public:
  SymMat() = default;
  explicit SymMat(int m) : data_(Eigen::MatrixXd::Zero(m, m)) {}
  explicit SymMat(const Eigen::MatrixXd& entries);

  static SymMat identity(int m) { return SymMat(Eigen::MatrixXd::Identity(m, m)); }
  static SymMat diagonal(const std::vector<double>& d);

  int size() const { return static_cast<int>(data_.rows()); }
  double operator()(int i, int j) const { return data_(i, j); }
  const Eigen::MatrixXd& matrix() const { return data_; }

 private:
  Eigen::MatrixXd data_;
};

// Affine matrix pencil A_0 + x_1 A_1 + ... + x_n A_n with an optional linear
// projection R^n -> R^k (a k x n matrix) describing a shadow.
struct Pencil {
  int m = 0;
  int n = 0;
  std::vector<SymMat> mats;  // A_0 .. A_n
  std::optional<Eigen::MatrixXd> projection;

  // Throws Error(dimension_mismatch) on inconsistent shapes.
  Pencil(std::vector<SymMat> matrices, std::optional<Eigen::MatrixXd> proj = std::nullopt);
  Pencil() = default;

  const SymMat& constant() const { return mats.front(); }
  const SymMat& coefficient(int i) const { return mats.at(static_cast<std::size_t>(i) + 1); }
  // Dimension of the space where the body lives: k if projected, else n.
  int image_dim() const { return projection ? static_cast<int>(projection->rows()) : n; }
};

// A_0 + sum_i x_i A_i.
SymMat eval_pencil(const Pencil& pencil, const Eigen::VectorXd& x);

// (Trace(A_1 Z), ..., Trace(A_n Z)).
Eigen::VectorXd adjoint(const Pencil& pencil, const SymMat& z);

double trace_inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

struct SymEig {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // columns match values
};

SymEig sym_eig(const SymMat& m);

inline constexpr double kRankTolerance = 1e-6;

// Eigenvalues above tolerance * max(scale, lambda_max).
int rank_of(const SymMat& m, double scale, double tolerance = kRankTolerance);

}  // namespace psdrank
