#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "psdrank/linalg.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) { return std::string(PSDRANK_TEST_DATA_DIR) + "/" + name; }

inline psdrank::SymMat diag(std::initializer_list<double> d) { return psdrank::SymMat::diagonal(std::vector<double>(d)); }

// S = [-1, 1]
inline psdrank::Pencil segment() { return psdrank::Pencil({diag({1, 1}), diag({1, -1})}); }

// S = unit disk: [[1+x, y], [y, 1-x]]
inline psdrank::Pencil disk() {
  Eigen::MatrixXd b(2, 2);
  b << 0, 1, 1, 0;
  return psdrank::Pencil({diag({1, 1}), diag({1, -1}), psdrank::SymMat(b)});
}

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// Vertices (cos 2k pi/5, sin 2k pi/5).
inline Eigen::Vector2d pentagon_vertex(int k) {
  const double a = 2.0 * std::numbers::pi * k / 5.0;
  return {std::cos(a), std::sin(a)};
}

inline double pentagon_support(const Eigen::VectorXd& c) {
  double best = -1e300;
  for (int k = 0; k < 5; ++k) best = std::max(best, c.dot(pentagon_vertex(k)));
  return best;
}

}  // namespace fixtures
