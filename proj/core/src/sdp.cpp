#include "psdrank/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "psdrank/error.hpp"

namespace psdrank {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string_view to_string(SdpStatus status) {
  switch (status) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::infeasible: return "infeasible";
    case SdpStatus::unbounded: return "unbounded";
    case SdpStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double min_eigenvalue(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

MatrixXd symmetrized(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

// Largest alpha keeping L L^T + alpha * delta PSD.
double max_step(const MatrixXd& lower, const MatrixXd& delta) {
  const auto tri = lower.triangularView<Eigen::Lower>();
  const MatrixXd half = tri.solve(delta);
  const MatrixXd scaled = tri.solve(half.transpose());
  const double lmin = min_eigenvalue(symmetrized(scaled));
  return lmin < 0.0 ? -1.0 / lmin : kInf;
}

struct Direction {
  VectorXd dx;
  MatrixXd dX;
  MatrixXd dZ;
};

class InteriorPointSolver {
 public:
  InteriorPointSolver(const Pencil& pencil, const VectorXd& c, const SdpOptions& options)
      : pencil_(pencil), c_(c), options_(options), m_(pencil.m), n_(pencil.n) {
    a0_ = pencil.constant().matrix();
    coeffs_.reserve(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) coeffs_.push_back(pencil.coefficient(i).matrix());
  }

  SdpSolution run() {
    VectorXd x = VectorXd::Zero(n_);
    MatrixXd X = a0_;
    MatrixXd Z = initial_dual_scale() * MatrixXd::Identity(m_, m_);

    SdpSolution out;
    bool converged = false;
    int iter = 0;
    for (; iter < options_.max_iterations; ++iter) {
      const Metrics metrics = measure(x, X, Z);
      if (metrics.rel_gap <= options_.tolerance && metrics.dual_inf <= options_.tolerance) {
        converged = true;
        break;
      }
      if (x.norm() > options_.divergence_bound) {
        if (auto ray = unbounded_ray(x)) {
          out.status = SdpStatus::unbounded;
          out.ray = std::move(ray);
          finalize(out, x, Z);
          out.status = SdpStatus::unbounded;
          out.iterations = iter;
          return out;
        }
        break;
      }

      Eigen::LLT<MatrixXd> chol_z(Z);
      Eigen::LLT<MatrixXd> chol_x(X);
      if (chol_z.info() != Eigen::Success || chol_x.info() != Eigen::Success) break;
      const MatrixXd lz = chol_z.matrixL();
      const MatrixXd lx = chol_x.matrixL();

      // NT scaling point W = G G^T with G^{-1} Z G^{-T} = G^T X G = diag(d).
      Eigen::JacobiSVD<MatrixXd> svd(lz.transpose() * lx, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const VectorXd d = svd.singularValues();
      if (d.minCoeff() <= 0.0) break;
      const MatrixXd G = lz * svd.matrixU() * d.cwiseInverse().cwiseSqrt().asDiagonal();
      const MatrixXd G_inv = d.cwiseSqrt().asDiagonal() * svd.matrixU().transpose() *
                             lz.triangularView<Eigen::Lower>().solve(MatrixXd::Identity(m_, m_));
      const MatrixXd W = G * G.transpose();

      std::vector<MatrixXd> scaled(static_cast<std::size_t>(n_));
      MatrixXd schur(n_, n_);
      for (int j = 0; j < n_; ++j) scaled[j] = W * coeffs_[j] * W;
      for (int i = 0; i < n_; ++i) {
        for (int j = i; j < n_; ++j) {
          schur(i, j) = trace_inner(coeffs_[i], scaled[j]);
          schur(j, i) = schur(i, j);
        }
      }
      Eigen::LDLT<MatrixXd> schur_ldlt(schur);
      const bool schur_ok = schur_ldlt.info() == Eigen::Success && schur_ldlt.isPositive() &&
                            schur_ldlt.vectorD().minCoeff() > 1e-14 * std::max(1.0, schur.diagonal().maxCoeff());
      Eigen::CompleteOrthogonalDecomposition<MatrixXd> schur_cod;
      if (!schur_ok) schur_cod.compute(schur);

      const VectorXd dual_res = dual_residual(Z);
      auto solve_direction = [&](const MatrixXd& rhs) {
        MatrixXd H(m_, m_);
        for (int i = 0; i < m_; ++i) {
          for (int j = 0; j < m_; ++j) H(i, j) = 2.0 * rhs(i, j) / (d(i) + d(j));
        }
        const MatrixXd GHG = G * H * G.transpose();
        VectorXd rhs_vec(n_);
        for (int i = 0; i < n_; ++i) rhs_vec(i) = dual_res(i) + trace_inner(coeffs_[i], GHG);
        Direction dir;
        dir.dx = schur_ok ? VectorXd(schur_ldlt.solve(rhs_vec)) : VectorXd(schur_cod.solve(rhs_vec));
        dir.dX = apply_operator(dir.dx);
        dir.dZ = symmetrized(GHG - W * dir.dX * W);
        return dir;
      };

      const double mu = trace_inner(X, Z) / m_;
      const MatrixXd d_sq = d.array().square().matrix().asDiagonal();

      // Predictor.
      const Direction affine = solve_direction(-d_sq);
      const double ax_aff = std::min(1.0, max_step(lx, affine.dX));
      const double az_aff = std::min(1.0, max_step(lz, affine.dZ));
      const double mu_aff = trace_inner(X + ax_aff * affine.dX, Z + az_aff * affine.dZ) / m_;
      const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

      // Corrector with the second-order term in the scaled space.
      const MatrixXd dX_scaled = G.transpose() * affine.dX * G;
      const MatrixXd dZ_scaled = G_inv * affine.dZ * G_inv.transpose();
      const MatrixXd second_order = 0.5 * (dZ_scaled * dX_scaled + dX_scaled * dZ_scaled);
      const MatrixXd rhs = sigma * mu * MatrixXd::Identity(m_, m_) - d_sq - symmetrized(second_order);
      const Direction step = solve_direction(rhs);

      const double gamma = metrics.rel_gap < 1e-6 ? 0.99 : 0.95;
      const double alpha_x = std::min(1.0, gamma * max_step(lx, step.dX));
      const double alpha_z = std::min(1.0, gamma * max_step(lz, step.dZ));
      if (alpha_x < 1e-12 && alpha_z < 1e-12) break;

      x += alpha_x * step.dx;
      X = a0_ + apply_operator(x);
      Z = symmetrized(Z + alpha_z * step.dZ);
    }

    const auto acceptable = [&](const Metrics& mt) {
      return mt.rel_gap <= options_.accept_tolerance && mt.dual_inf <= options_.accept_tolerance;
    };
    const Metrics metrics = measure(x, X, Z);
    bool optimal = converged || acceptable(metrics);
    // A stalled run close to optimal can still be finished by the Newton polish.
    if (optimal || (metrics.rel_gap <= 1e-3 && metrics.dual_inf <= 1e-3)) {
      refine(x, Z);
      if (!optimal) {
        X = a0_ + apply_operator(x);
        optimal = acceptable(measure(x, X, Z));
      }
    }
    out.status = optimal ? SdpStatus::optimal : SdpStatus::numerical_failure;
    out.iterations = iter;
    finalize(out, x, Z);
    return out;
  }

 private:
  struct Metrics {
    double rel_gap;
    double dual_inf;
  };

  double initial_dual_scale() const {
    double scale = std::max(10.0, std::sqrt(static_cast<double>(m_)));
    for (int i = 0; i < n_; ++i) {
      scale = std::max(scale, m_ * (1.0 + std::abs(c_(i))) / (1.0 + coeffs_[i].norm()));
    }
    return scale;
  }

  MatrixXd apply_operator(const VectorXd& x) const {
    MatrixXd out = MatrixXd::Zero(m_, m_);
    for (int i = 0; i < n_; ++i) out += x(i) * coeffs_[i];
    return out;
  }

  VectorXd dual_residual(const MatrixXd& Z) const {
    VectorXd r(n_);
    for (int i = 0; i < n_; ++i) r(i) = trace_inner(coeffs_[i], Z) + c_(i);
    return r;
  }

  Metrics measure(const VectorXd& x, const MatrixXd& X, const MatrixXd& Z) const {
    const double pobj = c_.dot(x);
    const double dobj = trace_inner(a0_, Z);
    return {std::abs(trace_inner(X, Z)) / (1.0 + std::abs(pobj) + std::abs(dobj)),
            dual_residual(Z).norm() / (1.0 + c_.norm())};
  }

  // Stacked A^*(Z) + c and vec(X(x) Z).
  VectorXd kkt_residual(const VectorXd& x, const MatrixXd& Z) const {
    VectorXd f(n_ + m_ * m_);
    f.head(n_) = dual_residual(Z);
    const MatrixXd XZ = (a0_ + apply_operator(x)) * Z;
    f.tail(m_ * m_) = Eigen::Map<const VectorXd>(XZ.data(), m_ * m_);
    return f;
  }

  bool psd_within(const MatrixXd& M) const {
    const VectorXd ev = Eigen::SelfAdjointEigenSolver<MatrixXd>(M, Eigen::EigenvaluesOnly).eigenvalues();
    return ev.minCoeff() >= -1e-9 * std::max(1.0, ev.maxCoeff());
  }

  // Gauss-Newton on the KKT equations in (x, upper triangle of Z). Interior
  // iterates only drive Trace(XZ) down; XZ itself shrinks like its square root.
  void refine(VectorXd& x, MatrixXd& Z) const {
    const int tz = m_ * (m_ + 1) / 2;
    std::vector<std::pair<int, int>> basis;
    basis.reserve(static_cast<std::size_t>(tz));
    for (int k = 0; k < m_; ++k) {
      for (int l = k; l < m_; ++l) basis.emplace_back(k, l);
    }
    VectorXd f = kkt_residual(x, Z);
    for (int sweep = 0; sweep < 8 && f.norm() > 1e-15 * (1.0 + Z.norm()); ++sweep) {
      const MatrixXd X = a0_ + apply_operator(x);
      MatrixXd J = MatrixXd::Zero(n_ + m_ * m_, n_ + tz);
      for (int i = 0; i < n_; ++i) {
        const MatrixXd AZ = coeffs_[i] * Z;
        J.col(i).tail(m_ * m_) = Eigen::Map<const VectorXd>(AZ.data(), m_ * m_);
      }
      for (int b = 0; b < tz; ++b) {
        const auto [k, l] = basis[static_cast<std::size_t>(b)];
        MatrixXd E = MatrixXd::Zero(m_, m_);
        E(k, l) = 1.0;
        E(l, k) = 1.0;
        for (int i = 0; i < n_; ++i) J(i, n_ + b) = trace_inner(coeffs_[i], E);
        const MatrixXd XE = X * E;
        J.col(n_ + b).tail(m_ * m_) = Eigen::Map<const VectorXd>(XE.data(), m_ * m_);
      }
      const VectorXd delta = Eigen::CompleteOrthogonalDecomposition<MatrixXd>(J).solve(-f);
      VectorXd x_new = x + delta.head(n_);
      MatrixXd Z_new = Z;
      for (int b = 0; b < tz; ++b) {
        const auto [k, l] = basis[static_cast<std::size_t>(b)];
        Z_new(k, l) += delta(n_ + b);
        if (k != l) Z_new(l, k) += delta(n_ + b);
      }
      const VectorXd f_new = kkt_residual(x_new, Z_new);
      if (!(f_new.norm() < f.norm()) || !psd_within(a0_ + apply_operator(x_new)) || !psd_within(Z_new)) break;
      x = std::move(x_new);
      Z = std::move(Z_new);
      f = f_new;
    }
  }

  std::optional<VectorXd> unbounded_ray(const VectorXd& x) const {
    const VectorXd ray = x / x.norm();
    if (c_.dot(ray) <= 0.0) return std::nullopt;
    const MatrixXd direction = apply_operator(ray);
    const double scale = std::max(1.0, direction.norm());
    if (min_eigenvalue(direction) < -1e-6 * scale) return std::nullopt;
    return ray;
  }

  void finalize(SdpSolution& out, const VectorXd& x, const MatrixXd& Z) const {
    out.x = x;
    out.X = eval_pencil(pencil_, x);
    out.Z = SymMat(Z);
    out.value = c_.dot(x);
    out.residuals.primal = (out.X.matrix() - a0_ - apply_operator(x)).norm();
    out.residuals.dual = dual_residual(out.Z.matrix()).norm();
    out.residuals.complementarity = trace_inner(out.X.matrix(), out.Z.matrix());

    const SymEig eig_x = sym_eig(out.X);
    const SymEig eig_z = sym_eig(out.Z);
    out.spectrum_X = eig_x.values;
    out.spectrum_Z = eig_z.values;
    out.rank_X = rank_of(out.X, 0.0, options_.rank_tolerance);
    out.rank_Z = rank_of(out.Z, 0.0, options_.rank_tolerance);
    auto uncertain = [](const VectorXd& spectrum, int rank) {
      if (rank <= 0 || rank >= spectrum.size()) return false;
      const double below = std::max(spectrum(rank), 0.0);
      return below > 0.0 && spectrum(rank - 1) / below < 1e2;
    };
    out.rank_uncertain = uncertain(out.spectrum_X, out.rank_X) || uncertain(out.spectrum_Z, out.rank_Z);
  }

  const Pencil& pencil_;
  const VectorXd& c_;
  const SdpOptions& options_;
  int m_;
  int n_;
  MatrixXd a0_;
  std::vector<MatrixXd> coeffs_;
};

}  // namespace

SdpSolution solve_sdp(const Pencil& pencil, const VectorXd& c, const SdpOptions& options) {
  if (c.size() != pencil.n) {
    throw Error(ErrorCode::dimension_mismatch, "solve_sdp: objective has the wrong length");
  }
  if (pencil.m == 0 || min_eigenvalue(pencil.constant().matrix()) <= 0.0) {
    throw Error(ErrorCode::not_interior, "A_0 must be positive definite");
  }

  if (c.isZero(0.0)) {
    SdpSolution out;
    out.status = SdpStatus::optimal;
    out.x = VectorXd::Zero(pencil.n);
    out.X = pencil.constant();
    out.Z = SymMat(pencil.m);
    out.value = 0.0;
    out.spectrum_X = sym_eig(out.X).values;
    out.spectrum_Z = VectorXd::Zero(pencil.m);
    out.rank_X = rank_of(out.X, 0.0, options.rank_tolerance);
    out.rank_Z = 0;
    return out;
  }
  return InteriorPointSolver(pencil, c, options).run();
}

std::optional<double> support_value(const Pencil& pencil, const VectorXd& c, const SdpOptions& options) {
  const SdpSolution sol = solve_sdp(pencil, c, options);
  if (sol.status != SdpStatus::optimal) return std::nullopt;
  return sol.value;
}

Pencil recenter(const Pencil& pencil, const VectorXd& center) {
  std::vector<SymMat> mats = pencil.mats;
  mats.front() = eval_pencil(pencil, center);
  return Pencil(std::move(mats), pencil.projection);
}

std::optional<VectorXd> strictly_feasible_point(const Pencil& pencil, double box) {
  const int m = pencil.m;
  const int n = pencil.n;
  const MatrixXd& a0 = pencil.constant().matrix();
  const double lambda_min = min_eigenvalue(a0);
  const double scale = std::max(1.0, a0.norm());
  if (lambda_min > 1e-9 * scale) return VectorXd::Zero(n);

  // Variables (x, s) with t = s + shift; blocks: A_0 + A(x) - t I, 1 - t, box +- x_i.
  const double shift = lambda_min - 1.0;
  const int size = m + 1 + 2 * n;
  std::vector<MatrixXd> mats(static_cast<std::size_t>(n) + 2, MatrixXd::Zero(size, size));
  mats[0].topLeftCorner(m, m) = a0 - shift * MatrixXd::Identity(m, m);
  mats[0](m, m) = 1.0 - shift;
  for (int i = 0; i < n; ++i) {
    mats[i + 1].topLeftCorner(m, m) = pencil.coefficient(i).matrix();
    mats[0](m + 1 + 2 * i, m + 1 + 2 * i) = box;
    mats[0](m + 2 + 2 * i, m + 2 + 2 * i) = box;
    mats[i + 1](m + 1 + 2 * i, m + 1 + 2 * i) = -1.0;
    mats[i + 1](m + 2 + 2 * i, m + 2 + 2 * i) = 1.0;
  }
  mats[n + 1].topLeftCorner(m, m) = -MatrixXd::Identity(m, m);
  mats[n + 1](m, m) = -1.0;

  std::vector<SymMat> sym;
  sym.reserve(mats.size());
  for (const auto& a : mats) sym.emplace_back(a);
  const Pencil phase_one(std::move(sym));
  VectorXd objective = VectorXd::Zero(n + 1);
  objective(n) = 1.0;

  SdpOptions options;
  options.tolerance = 1e-9;
  const SdpSolution sol = solve_sdp(phase_one, objective, options);
  if (sol.status != SdpStatus::optimal) return std::nullopt;
  if (sol.value + shift <= 1e-7 * scale) return std::nullopt;

  VectorXd x = sol.x.head(n);
  if (min_eigenvalue(eval_pencil(pencil, x).matrix()) <= 0.0) return std::nullopt;
  return x;
}

}  // namespace psdrank
