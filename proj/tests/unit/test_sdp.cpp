#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "psdrank/bounds.hpp"
#include "psdrank/error.hpp"
#include "psdrank/experiments.hpp"
#include "psdrank/polar.hpp"
#include "psdrank/sdp.hpp"

using namespace psdrank;
using fixtures::diag;
using fixtures::vec;

namespace {

void expect_certificates(const Pencil& p, const Eigen::VectorXd& c, const SdpSolution& s) {
  ASSERT_EQ(s.status, SdpStatus::optimal);
  const double scale = 1.0 + std::abs(s.value);
  EXPECT_LE((s.X.matrix() - eval_pencil(p, s.x).matrix()).norm(), 1e-8 * scale);
  EXPECT_GE(sym_eig(s.X).values.minCoeff(), -1e-8 * scale);
  EXPECT_GE(sym_eig(s.Z).values.minCoeff(), -1e-8 * scale);
  EXPECT_LE((adjoint(p, s.Z) + c).norm(), 1e-7 * (1.0 + c.norm()));
  EXPECT_LE(std::abs(trace_inner(s.X.matrix(), s.Z.matrix())), 1e-7 * scale);
  // Strong duality: c^T x = Trace(A_0 Z).
  const double dual = trace_inner(p.constant().matrix(), s.Z.matrix());
  EXPECT_LE(std::abs(c.dot(s.x) - dual), 1e-6 * (1.0 + std::abs(c.dot(s.x))));
  EXPECT_LE((s.X.matrix() * s.Z.matrix()).norm(), 1e-6 * (1.0 + s.X.matrix().norm() * s.Z.matrix().norm()));
  EXPECT_NEAR(s.value, c.dot(s.x), 1e-9 * scale);
}

}  // namespace

TEST(SolveSdp, SegmentHandKkt) {
  const Pencil seg = fixtures::segment();
  const auto c = vec({1});
  const auto s = solve_sdp(seg, c);
  expect_certificates(seg, c, s);
  EXPECT_NEAR(s.value, 1.0, 1e-8);
  EXPECT_NEAR(s.x(0), 1.0, 1e-8);
  EXPECT_TRUE(s.X.matrix().isApprox(diag({2, 0}).matrix(), 1e-7));
  EXPECT_LE((s.Z.matrix() - diag({0, 1}).matrix()).norm(), 1e-7);
  EXPECT_EQ(s.rank_X, 1);
  EXPECT_EQ(s.rank_Z, 1);
}

TEST(SolveSdp, ZeroObjective) {
  const auto s = solve_sdp(fixtures::disk(), vec({0, 0}));
  ASSERT_EQ(s.status, SdpStatus::optimal);
  EXPECT_EQ(s.value, 0.0);
  EXPECT_TRUE(s.x.isZero());
}

TEST(SolveSdp, DiskSupportIsNorm) {
  const Pencil disk = fixtures::disk();
  for (const auto& c : {vec({3, 4}), vec({-1, 0.5}), vec({0, -2})}) {
    const auto s = solve_sdp(disk, c);
    expect_certificates(disk, c, s);
    EXPECT_NEAR(s.value, c.norm(), 1e-8);
    EXPECT_EQ(s.rank_X, 1);
  }
}

TEST(SolveSdp, PentagonSupport) {
  const Pencil p = pentagon_fixture();
  // Lifted objective pi^T c with pi = first two coordinates.
  const auto s = solve_sdp(p, vec({1, 0, 0, 0}));
  expect_certificates(p, vec({1, 0, 0, 0}), s);
  EXPECT_NEAR(s.value, 1.0, 1e-6);
  EXPECT_NEAR(*support_value(p, vec({0, 1, 0, 0})), std::sin(2 * std::numbers::pi / 5), 1e-6);
}

TEST(SolveSdp, RejectsNonInterior) {
  EXPECT_THROW(solve_sdp(Pencil({diag({1, 0}), diag({1, -1})}), vec({1})), Error);
  EXPECT_THROW(solve_sdp(Pencil({diag({1, -1}), diag({1, -1})}), vec({1})), Error);
  try {
    solve_sdp(Pencil({diag({1, 0}), diag({1, -1})}), vec({1}));
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_interior);
  }
}

TEST(SolveSdp, RejectsWrongObjectiveLength) { EXPECT_THROW(solve_sdp(fixtures::segment(), vec({1, 1})), Error); }

TEST(SolveSdp, UnboundedRay) {
  // S = [-1, inf): X = diag(1 + x, 1)
  const Pencil half({diag({1, 1}), diag({1, 0})});
  const auto s = solve_sdp(half, vec({1}));
  ASSERT_EQ(s.status, SdpStatus::unbounded);
  ASSERT_TRUE(s.ray.has_value());
  const auto& y = *s.ray;
  EXPECT_GT(y(0), 0.0);
  Eigen::MatrixXd ay = Eigen::MatrixXd::Zero(2, 2);
  for (int i = 0; i < half.n; ++i) ay += y(i) * half.coefficient(i).matrix();
  EXPECT_GE(sym_eig(SymMat(ay)).values.minCoeff(), -1e-9 * y.norm());
  // Opposite direction is bounded with value 1.
  const auto back = solve_sdp(half, vec({-1}));
  ASSERT_EQ(back.status, SdpStatus::optimal);
  EXPECT_NEAR(back.value, 1.0, 1e-8);
}

TEST(SolveSdp, RandomInstancesSatisfyCertificates) {
  int optimal = 0;
  for (std::uint64_t t = 0; t < 40; ++t) {
    const int m = 2 + static_cast<int>(t % 4);
    const int n = 1 + static_cast<int>(t % static_cast<std::uint64_t>(triangular(m)));
    const Pencil p = random_pencil(m, n, 1000 + t, true).pencil;
    std::mt19937_64 rng(t);
    std::normal_distribution<double> g;
    Eigen::VectorXd c(n);
    for (int i = 0; i < n; ++i) c(i) = g(rng);
    const auto s = solve_sdp(p, c);
    if (s.status == SdpStatus::unbounded) {
      ASSERT_TRUE(s.ray.has_value());
      EXPECT_GT(c.dot(*s.ray), 0.0);
      continue;
    }
    expect_certificates(p, c, s);
    ++optimal;
  }
  EXPECT_GT(optimal, 10);
}

TEST(SolveSdp, DeterministicBitForBit) {
  const Pencil p = random_pencil(4, 5, 99, true).pencil;
  const auto c = vec({0.3, -1.2, 0.5, 0.9, -0.1});
  const auto a = solve_sdp(p, c);
  const auto b = solve_sdp(p, c);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.Z.matrix(), b.Z.matrix());
}

TEST(FeasiblePoint, FindsAndRecenters) {
  // S = [2, 3]: diag(x - 2, 3 - x)
  const Pencil shifted({diag({-2, 3}), diag({1, -1})});
  const auto x0 = strictly_feasible_point(shifted);
  ASSERT_TRUE(x0.has_value());
  EXPECT_GT((*x0)(0), 2.0);
  EXPECT_LT((*x0)(0), 3.0);
  const Pencil centered = recenter(shifted, *x0);
  EXPECT_GT(sym_eig(centered.constant()).values.minCoeff(), 0.0);
  const auto s = solve_sdp(centered, vec({1}));
  ASSERT_EQ(s.status, SdpStatus::optimal);
  EXPECT_NEAR(s.x(0) + (*x0)(0), 3.0, 1e-7);
}

TEST(FeasiblePoint, DetectsEmpty) {
  // diag(x - 1, -x - 1) needs x >= 1 and x <= -1.
  EXPECT_FALSE(strictly_feasible_point(Pencil({diag({-1, -1}), diag({1, -1})})).has_value());
}
