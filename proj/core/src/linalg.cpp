#include "psdrank/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "psdrank/error.hpp"

namespace psdrank {

SymMat::SymMat(const Eigen::MatrixXd& entries) {
  if (entries.rows() != entries.cols()) {
    throw Error(ErrorCode::dimension_mismatch, "symmetric matrix must be square");
  }
  data_ = 0.5 * (entries + entries.transpose());
}

SymMat SymMat::diagonal(const std::vector<double>& d) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
  return SymMat(m);
}

Pencil::Pencil(std::vector<SymMat> matrices, std::optional<Eigen::MatrixXd> proj)
    : mats(std::move(matrices)), projection(std::move(proj)) {
  if (mats.empty()) throw Error(ErrorCode::dimension_mismatch, "pencil needs at least A_0");
  m = mats.front().size();
  n = static_cast<int>(mats.size()) - 1;
  for (const auto& a : mats) {
    if (a.size() != m) throw Error(ErrorCode::dimension_mismatch, "pencil matrices differ in size");
  }
  if (projection && projection->cols() != n) {
    throw Error(ErrorCode::dimension_mismatch,
                "projection has " + std::to_string(projection->cols()) + " columns, expected " + std::to_string(n));
  }
}

SymMat eval_pencil(const Pencil& pencil, const Eigen::VectorXd& x) {
  if (x.size() != pencil.n) {
    throw Error(ErrorCode::dimension_mismatch, "eval_pencil: x has length " + std::to_string(x.size()) +
                                                   ", expected " + std::to_string(pencil.n));
  }
  Eigen::MatrixXd out = pencil.constant().matrix();
  for (int i = 0; i < pencil.n; ++i) out += x(i) * pencil.coefficient(i).matrix();
  return SymMat(out);
}

double trace_inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return a.cwiseProduct(b).sum(); }

Eigen::VectorXd adjoint(const Pencil& pencil, const SymMat& z) {
  if (z.size() != pencil.m) throw Error(ErrorCode::dimension_mismatch, "adjoint: Z has the wrong size");
  Eigen::VectorXd out(pencil.n);
  for (int i = 0; i < pencil.n; ++i) out(i) = trace_inner(pencil.coefficient(i).matrix(), z.matrix());
  return out;
}

SymEig sym_eig(const SymMat& m) {
  SymEig out;
  if (m.size() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::numerical_failure, "symmetric eigensolver did not converge");
  }
  const Eigen::Index size = m.size();
  out.values.resize(size);
  out.vectors.resize(size, size);
  // Eigen returns ascending order.
  for (Eigen::Index k = 0; k < size; ++k) {
    out.values(k) = solver.eigenvalues()(size - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(size - 1 - k);
  }
  return out;
}

int rank_of(const SymMat& m, double scale, double tolerance) {
  if (m.size() == 0) return 0;
  const SymEig eig = sym_eig(m);
  const double reference = std::max(scale, eig.values(0));
  if (reference <= 0.0) return 0;
  const double threshold = tolerance * reference;
  return static_cast<int>((eig.values.array() > threshold).count());
}

}  // namespace psdrank
