#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "psdrank/bounds.hpp"
#include "psdrank/error.hpp"
#include "psdrank/experiments.hpp"
#include "psdrank/kkt.hpp"
#include "psdrank/polar.hpp"
#include "psdrank/sdp.hpp"

using namespace psdrank;
using fixtures::diag;
using fixtures::vec;

namespace {

int count_lines(const std::string& text) {
  std::istringstream in(text);
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  return lines;
}

Eigen::VectorXd gaussian(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXd c(n);
  for (int i = 0; i < n; ++i) c(i) = g(rng);
  return c;
}

}  // namespace

TEST(Kkt, CountsForSegment) {
  const auto sys = build_kkt(fixtures::segment(), vec({1}));
  EXPECT_EQ(sys.variables.size(), 7u);
  EXPECT_EQ(sys.equations.size(), 8u);
  EXPECT_EQ(sys.metadata.bezout_product, 16);
  EXPECT_FALSE(sys.metadata.symbolic_c);
  const auto symbolic = build_kkt(fixtures::segment(), std::nullopt);
  EXPECT_EQ(symbolic.variables.size(), 8u);
  EXPECT_EQ(symbolic.variables.back(), "c1");
}

TEST(Kkt, ClosedFormCountsAndBezout) {
  for (int m = 1; m <= 5; ++m) {
    for (long n : {1L, triangular(m)}) {
      const Pencil p = random_pencil(m, static_cast<int>(n), 17 * m + n, true).pencil;
      const auto sys = build_kkt(p, gaussian(static_cast<int>(n), 3));
      EXPECT_EQ(static_cast<long>(sys.variables.size()), n + 2 * triangular(m));
      EXPECT_EQ(static_cast<long>(sys.equations.size()), n + triangular(m) + m * m);
      EXPECT_EQ(sys.metadata.bezout_product, bezout_kkt_count(m));
      EXPECT_EQ(sys.metadata.bezout_product, bezout_product(sys.equations));
    }
  }
}

TEST(Kkt, HandTripleHasZeroResidual) {
  const auto sys = build_kkt(fixtures::segment(), vec({1}));
  const auto assignment = kkt_assignment(1, 2, vec({1}), diag({2, 0}), diag({0, 1}));
  const auto res = residual(sys, assignment);
  EXPECT_EQ(res.max_abs, 0.0);
  EXPECT_EQ(res.per_equation.size(), 8u);

  auto perturbed = assignment;
  perturbed["x1"] += 1e-3;
  EXPECT_GE(residual(sys, perturbed).max_abs, 1e-4);
}

TEST(Kkt, ResidualNeedsEveryVariable) {
  const auto sys = build_kkt(fixtures::segment(), vec({1}));
  auto assignment = kkt_assignment(1, 2, vec({1}), diag({2, 0}), diag({0, 1}));
  assignment.erase("Z_2_2");
  try {
    residual(sys, assignment);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::missing_variable);
  }
}

TEST(Kkt, EmptySystem) {
  const PolySystem empty;
  EXPECT_EQ(residual(empty, {}).max_abs, 0.0);
  EXPECT_EQ(export_system(empty, ExportFormat::plain_text), "vars:\n");
}

TEST(Kkt, Normalized) {
  const Pencil p = fixtures::disk();
  const auto sys = build_kkt_normalized(p);
  EXPECT_EQ(sys.variables.size(), 2u + 6u + 2u);
  EXPECT_EQ(sys.equations.size(), 2u + 3u + 4u + 1u);
  EXPECT_EQ(sys.metadata.variant, KktVariant::normalized);
  EXPECT_TRUE(sys.metadata.symbolic_c);
  EXPECT_EQ(sys.equations.back().total_degree(), 2);
}

TEST(Kkt, RankMinorCounts) {
  const auto two = build_kkt_rank(fixtures::disk(), 1);
  EXPECT_EQ(two.metadata.x_minor_count, 1);
  EXPECT_EQ(two.metadata.z_minor_count, 1);
  EXPECT_EQ(two.equations.size(), build_kkt_normalized(fixtures::disk()).equations.size() + 2);

  const Pencil p33 = random_pencil(3, 3, 5, true).pencil;
  const auto three = build_kkt_rank(p33, 1);
  EXPECT_EQ(three.metadata.x_minor_count, 9);
  EXPECT_EQ(three.metadata.z_minor_count, 1);
  const std::size_t base = build_kkt_normalized(p33).equations.size();
  for (std::size_t k = base; k < base + 9; ++k) EXPECT_EQ(three.equations[k].total_degree(), 2);
  EXPECT_EQ(three.equations.back().total_degree(), 3);
  EXPECT_EQ(three.metadata.rank, 1);
}

TEST(Kkt, RankOutsidePatakiRange) {
  try {
    build_kkt_rank(fixtures::disk(), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::pataki_violation);
  }
  const auto forced = build_kkt_rank(fixtures::disk(), 2, true);
  EXPECT_EQ(forced.metadata.x_minor_count, 0);
  EXPECT_EQ(forced.metadata.z_minor_count, 4);  // all 1x1 minors of a 2x2 Z
}

TEST(Kkt, PlainTextExport) {
  const auto sys = build_kkt(fixtures::segment(), vec({1}));
  const std::string text = export_system(sys, ExportFormat::plain_text);
  EXPECT_EQ(text.rfind("vars: x1 X_1_1 X_1_2 X_2_2 Z_1_1 Z_1_2 Z_2_2\n", 0), 0u);
  EXPECT_EQ(count_lines(text), 9);
  const auto back = parse_system(text, ExportFormat::plain_text);
  EXPECT_EQ(back.variables, sys.variables);
  EXPECT_EQ(back.equations, sys.equations);
  EXPECT_EQ(back.metadata.bezout_product, sys.metadata.bezout_product);
}

TEST(Kkt, ExportKeepsExactRationals) {
  const Pencil p({diag({0.1, 1}), diag({1.0 / 3.0, -2.5})});
  const auto sys = build_kkt(p, vec({0.2}));
  const auto back = parse_system(export_system(sys, ExportFormat::plain_text), ExportFormat::plain_text);
  EXPECT_EQ(back.equations, sys.equations);
  EXPECT_NE(export_system(sys, ExportFormat::plain_text).find("1/10"), std::string::npos);
}

TEST(Kkt, CommentLinesAreIgnored) {
  const auto sys = build_kkt(fixtures::segment(), vec({1}));
  const auto back = parse_system("# header\n" + export_system(sys, ExportFormat::plain_text), ExportFormat::plain_text);
  EXPECT_EQ(back.equations, sys.equations);
}

TEST(Kkt, JsonRoundTripOnPentagon) {
  const Pencil p = pentagon_fixture();
  for (const auto& sys : {build_kkt_normalized(p), build_kkt_rank(p, 2, true), build_kkt(p, vec({1, 0, 0, 0}))}) {
    EXPECT_EQ(parse_system(export_system(sys, ExportFormat::json), ExportFormat::json), sys);
  }
}

TEST(Kkt, ParseErrors) {
  EXPECT_THROW(parse_system("x1 = 0\n", ExportFormat::plain_text), Error);
  EXPECT_THROW(parse_system("vars: x1\nx1 + 1\n", ExportFormat::plain_text), Error);
  EXPECT_THROW(parse_system("vars: x1\ny + 1 = 0\n", ExportFormat::plain_text), Error);
  EXPECT_THROW(parse_system("{}", ExportFormat::json), Error);
}

TEST(Kkt, FormatAndVariantNames) {
  EXPECT_EQ(parse_export_format("json"), ExportFormat::json);
  EXPECT_EQ(parse_export_format("plain_text"), ExportFormat::plain_text);
  EXPECT_THROW(parse_export_format("xml"), Error);
  for (auto v : {KktVariant::plain, KktVariant::normalized, KktVariant::rank}) {
    EXPECT_EQ(parse_kkt_variant(to_string(v)), v);
  }
}

TEST(Kkt, LiftedSdpSolutionsSolveTheSystem) {
  int checked = 0;
  for (std::uint64_t t = 0; t < 30; ++t) {
    const int m = 2 + static_cast<int>(t % 3);
    const int n = 1 + static_cast<int>(t % 6) % static_cast<int>(triangular(m));
    const Pencil p = random_pencil(m, n, 500 + t, true).pencil;
    const Eigen::VectorXd c = gaussian(n, 900 + t);
    const auto s = solve_sdp(p, c);
    if (s.status != SdpStatus::optimal) continue;
    const double magnitude = 1.0 + s.X.matrix().cwiseAbs().maxCoeff() + s.Z.matrix().cwiseAbs().maxCoeff();
    EXPECT_LE(residual(build_kkt(p, c), kkt_assignment(n, m, s.x, s.X, s.Z)).max_abs, 1e-6 * magnitude);
    ++checked;
  }
  EXPECT_GT(checked, 10);
}

TEST(Kkt, RescalingToNormalizedSystem) {
  for (std::uint64_t t = 0; t < 10; ++t) {
    const Pencil p = random_pencil(3, 4, 70 + t, true).pencil;
    const Eigen::VectorXd c0 = gaussian(4, 80 + t);
    const auto s = solve_sdp(p, c0);
    if (s.status != SdpStatus::optimal || s.value <= 1e-6) continue;
    // (x, X, Z / v) solves KKT(c0 / v) together with c^T x = 1.
    const double v = c0.dot(s.x);
    const SymMat z_scaled(s.Z.matrix() / v);
    const double tol = 1e-6 * (1.0 + s.Z.matrix().norm() / v);
    EXPECT_LE(residual(build_kkt_normalized(p), kkt_assignment(4, 3, s.x, s.X, z_scaled, c0 / v)).max_abs, tol);
    // Multiplying back by c0^T x recovers a solution of KKT(c0).
    const SymMat z_back(v * z_scaled.matrix());
    EXPECT_LE(residual(build_kkt(p, c0), kkt_assignment(4, 3, s.x, s.X, z_back)).max_abs, 1e-6 * (1.0 + v));
  }
}

TEST(Kkt, PentagonCovertexLift) {
  const Pencil p = pentagon_fixture();
  const Eigen::VectorXd direction = vec({std::cos(0.3), std::sin(0.3), 0, 0});
  const auto s = solve_sdp(p, direction);
  ASSERT_EQ(s.status, SdpStatus::optimal);
  const double v = s.value;
  const auto lifted = kkt_assignment(4, 4, s.x, s.X, SymMat(s.Z.matrix() / v), direction / v);
  EXPECT_LE(residual(build_kkt_normalized(p), lifted).max_abs, 1e-6);
}
