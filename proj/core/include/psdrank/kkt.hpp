#pragma once

// KKT polynomial systems of the SDP max c^T x s.t. A_0 + A(x) PSD:
//
//   plain       X = A_0 + A(x),  A^*(Z) + c = 0,  XZ = 0
//   normalized  plain with symbolic c, plus c^T x = 1
//   rank        normalized plus every (r+1)-minor of X and (m-r+1)-minor of Z
//
// X and Z are parameterized by their upper triangles (t_m unknowns each);
// XZ = 0 is expanded to all m^2 entries.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "psdrank/combinatorics.hpp"
#include "psdrank/linalg.hpp"
#include "psdrank/polynomial.hpp"
#include "psdrank/sdp.hpp"

namespace psdrank {

enum class KktVariant { plain, normalized, rank };

std::string_view to_string(KktVariant variant);
KktVariant parse_kkt_variant(std::string_view text);

struct SystemMetadata {
  int n = 0;
  int m = 0;
  KktVariant variant = KktVariant::plain;
  bool symbolic_c = false;
  int rank = -1;  // only for the rank variant
  int x_minor_count = 0;
  int z_minor_count = 0;
  BigInt bezout_product = 1;

  friend bool operator==(const SystemMetadata&, const SystemMetadata&) = default;
};

struct PolySystem {
  std::vector<std::string> variables;
  std::vector<Polynomial> equations;
  SystemMetadata metadata;

  friend bool operator==(const PolySystem&, const PolySystem&) = default;
};

// Variable numbering: x_1..x_n, X upper triangle (row-major), Z upper triangle,
// then c_1..c_n when c is symbolic.
struct KktLayout {
  int n = 0;
  int m = 0;
  bool symbolic_c = false;

  int x(int i) const { return i; }
  int X(int i, int j) const;
  int Z(int i, int j) const;
  int c(int i) const;
  int variable_count() const;
  std::vector<std::string> names() const;
};

// Numeric c of length n, or nullopt for symbolic c.
PolySystem build_kkt(const Pencil& pencil, const std::optional<Eigen::VectorXd>& c);
PolySystem build_kkt_normalized(const Pencil& pencil);
// Throws Error(pataki_violation) for r outside the Pataki range unless allowed.
PolySystem build_kkt_rank(const Pencil& pencil, int r, bool allow_pataki_violation = false);

BigInt bezout_product(const std::vector<Polynomial>& equations);

struct ResidualReport {
  double max_abs = 0.0;
  std::vector<double> per_equation;
};

// Throws Error(missing_variable) if any variable of the system is unassigned.
ResidualReport residual(const PolySystem& system, const std::map<std::string, double>& assignment);

// Variable assignment for (x, X, Z) and, when given, c.
std::map<std::string, double> kkt_assignment(int n, int m, const Eigen::VectorXd& x, const SymMat& X,
                                             const SymMat& Z,
                                             const std::optional<Eigen::VectorXd>& c = std::nullopt);

enum class ExportFormat { plain_text, json };

ExportFormat parse_export_format(std::string_view text);

// plain_text: "vars: v1 v2 ..." followed by one "<poly> = 0" line per equation;
// lines starting with # are comments.
// json: variables, sparse monomial maps with rational coefficients, metadata.
std::string export_system(const PolySystem& system, ExportFormat format);

// Inverse of export_system. Plain text carries no metadata; it is filled with
// the Bezout product only.
PolySystem parse_system(std::string_view text, ExportFormat format);

}  // namespace psdrank
