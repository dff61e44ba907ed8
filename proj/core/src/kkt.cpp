#include "psdrank/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "psdrank/bounds.hpp"
#include "psdrank/error.hpp"

namespace psdrank {

using nlohmann::json;

std::string_view to_string(KktVariant variant) {
  switch (variant) {
    case KktVariant::plain: return "plain";
    case KktVariant::normalized: return "normalized";
    case KktVariant::rank: return "rank";
  }
  return "unknown";
}

KktVariant parse_kkt_variant(std::string_view text) {
  if (text == "plain") return KktVariant::plain;
  if (text == "normalized") return KktVariant::normalized;
  if (text == "rank") return KktVariant::rank;
  throw Error(ErrorCode::invalid_argument, "unknown KKT variant '" + std::string(text) + "'");
}

ExportFormat parse_export_format(std::string_view text) {
  if (text == "plain_text") return ExportFormat::plain_text;
  if (text == "json") return ExportFormat::json;
  throw Error(ErrorCode::invalid_argument, "unknown export format '" + std::string(text) + "'");
}

int KktLayout::X(int i, int j) const {
  if (i > j) std::swap(i, j);
  return n + i * m - i * (i - 1) / 2 + (j - i);
}

int KktLayout::Z(int i, int j) const { return X(i, j) + static_cast<int>(triangular(m)); }

int KktLayout::c(int i) const {
  if (!symbolic_c) throw Error(ErrorCode::invalid_argument, "layout has numeric c");
  return n + 2 * static_cast<int>(triangular(m)) + i;
}

int KktLayout::variable_count() const {
  return n + 2 * static_cast<int>(triangular(m)) + (symbolic_c ? n : 0);
}

std::vector<std::string> KktLayout::names() const {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(variable_count()));
  for (int i = 0; i < n; ++i) out.push_back("x" + std::to_string(i + 1));
  for (const char* prefix : {"X_", "Z_"}) {
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) out.push_back(prefix + std::to_string(i + 1) + "_" + std::to_string(j + 1));
    }
  }
  if (symbolic_c) {
    for (int i = 0; i < n; ++i) out.push_back("c" + std::to_string(i + 1));
  }
  return out;
}

BigInt bezout_product(const std::vector<Polynomial>& equations) {
  BigInt product = 1;
  for (const auto& eq : equations) product *= eq.total_degree();
  return product;
}

namespace {

using PolyMatrix = std::vector<std::vector<Polynomial>>;

Polynomial determinant(const PolyMatrix& a) {
  const std::size_t k = a.size();
  if (k == 0) return Polynomial::constant(1);
  if (k == 1) return a[0][0];
  Polynomial total;
  for (std::size_t col = 0; col < k; ++col) {
    if (a[0][col].is_zero()) continue;
    PolyMatrix sub(k - 1);
    for (std::size_t i = 1; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (j != col) sub[i - 1].push_back(a[i][j]);
      }
    }
    Polynomial term = a[0][col] * determinant(sub);
    if (col % 2 == 0) {
      total += term;
    } else {
      total -= term;
    }
  }
  return total;
}

std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> pick(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    out.push_back(pick);
    int i = k - 1;
    while (i >= 0 && pick[i] == n - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

// Appends every size x size minor of the symmetric matrix variable; returns the count.
int append_minors(std::vector<Polynomial>& equations, int m, int size, auto entry_index) {
  if (size < 1 || size > m) return 0;
  int count = 0;
  const auto subsets = combinations(m, size);
  for (const auto& rows : subsets) {
    for (const auto& cols : subsets) {
      PolyMatrix block(static_cast<std::size_t>(size));
      for (int s = 0; s < size; ++s) {
        for (int t = 0; t < size; ++t) block[s].push_back(Polynomial::variable(entry_index(rows[s], cols[t])));
      }
      equations.push_back(determinant(block));
      ++count;
    }
  }
  return count;
}

PolySystem build_core(const Pencil& pencil, const std::optional<Eigen::VectorXd>& c, KktVariant variant) {
  const int n = pencil.n;
  const int m = pencil.m;
  if (c && c->size() != n) {
    throw Error(ErrorCode::dimension_mismatch, "build_kkt: c has length " + std::to_string(c->size()) +
                                                   ", expected " + std::to_string(n));
  }
  const KktLayout layout{n, m, !c.has_value()};

  std::vector<std::vector<BigRational>> entries(pencil.mats.size());
  for (std::size_t k = 0; k < pencil.mats.size(); ++k) {
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) entries[k].push_back(rational_from_double(pencil.mats[k](i, j)));
    }
  }
  auto upper = [m](int i, int j) { return i * m - i * (i - 1) / 2 + (j - i); };

  PolySystem sys;
  sys.variables = layout.names();

  // X = A_0 + A(x)
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      Polynomial eq = Polynomial::variable(layout.X(i, j));
      eq.add_term({}, -entries[0][upper(i, j)]);
      for (int k = 0; k < n; ++k) eq.add_term({{layout.x(k), 1}}, -entries[k + 1][upper(i, j)]);
      sys.equations.push_back(std::move(eq));
    }
  }
  // A^*(Z) + c = 0, with Trace(A_k Z) = sum_i a_ii z_ii + 2 sum_{i<j} a_ij z_ij
  for (int k = 0; k < n; ++k) {
    Polynomial eq;
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) {
        const BigRational weight = (i == j) ? BigRational(1) : BigRational(2);
        eq.add_term({{layout.Z(i, j), 1}}, weight * entries[k + 1][upper(i, j)]);
      }
    }
    if (c) {
      eq.add_term({}, rational_from_double((*c)(k)));
    } else {
      eq.add_term({{layout.c(k), 1}}, 1);
    }
    sys.equations.push_back(std::move(eq));
  }
  // XZ = 0, all m^2 entries
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      Polynomial eq;
      for (int l = 0; l < m; ++l) {
        eq.add_term(monomial_product({{layout.X(i, l), 1}}, {{layout.Z(l, j), 1}}), 1);
      }
      sys.equations.push_back(std::move(eq));
    }
  }
  if (variant != KktVariant::plain) {
    Polynomial eq = Polynomial::constant(-1);
    for (int k = 0; k < n; ++k) {
      eq.add_term(monomial_product({{layout.x(k), 1}}, {{layout.c(k), 1}}), 1);
    }
    sys.equations.push_back(std::move(eq));
  }

  sys.metadata.n = n;
  sys.metadata.m = m;
  sys.metadata.variant = variant;
  sys.metadata.symbolic_c = layout.symbolic_c;
  return sys;
}

}  // namespace

PolySystem build_kkt(const Pencil& pencil, const std::optional<Eigen::VectorXd>& c) {
  PolySystem sys = build_core(pencil, c, KktVariant::plain);
  sys.metadata.bezout_product = bezout_product(sys.equations);
  return sys;
}

PolySystem build_kkt_normalized(const Pencil& pencil) {
  PolySystem sys = build_core(pencil, std::nullopt, KktVariant::normalized);
  sys.metadata.bezout_product = bezout_product(sys.equations);
  return sys;
}

PolySystem build_kkt_rank(const Pencil& pencil, int r, bool allow_pataki_violation) {
  const int m = pencil.m;
  if (r < 0 || r > m) throw Error(ErrorCode::invalid_argument, "rank must lie in [0, m]");
  if (!satisfies_pataki(m, pencil.n, r) && !allow_pataki_violation) {
    throw Error(ErrorCode::pataki_violation,
                "r = " + std::to_string(r) + " is outside the Pataki range for m = " + std::to_string(m) +
                    ", n = " + std::to_string(pencil.n));
  }
  PolySystem sys = build_core(pencil, std::nullopt, KktVariant::rank);
  const KktLayout layout{pencil.n, m, true};
  sys.metadata.rank = r;
  sys.metadata.x_minor_count =
      append_minors(sys.equations, m, r + 1, [&](int i, int j) { return layout.X(i, j); });
  sys.metadata.z_minor_count =
      append_minors(sys.equations, m, m - r + 1, [&](int i, int j) { return layout.Z(i, j); });
  sys.metadata.bezout_product = bezout_product(sys.equations);
  return sys;
}

ResidualReport residual(const PolySystem& system, const std::map<std::string, double>& assignment) {
  std::vector<double> values(system.variables.size());
  for (std::size_t i = 0; i < system.variables.size(); ++i) {
    const auto it = assignment.find(system.variables[i]);
    if (it == assignment.end()) throw Error(ErrorCode::missing_variable, system.variables[i]);
    values[i] = it->second;
  }
  ResidualReport report;
  report.per_equation.reserve(system.equations.size());
  for (const auto& eq : system.equations) {
    const double v = eq.evaluate(values);
    report.per_equation.push_back(v);
    report.max_abs = std::max(report.max_abs, std::abs(v));
  }
  return report;
}

std::map<std::string, double> kkt_assignment(int n, int m, const Eigen::VectorXd& x, const SymMat& X,
                                             const SymMat& Z, const std::optional<Eigen::VectorXd>& c) {
  if (x.size() != n || X.size() != m || Z.size() != m || (c && c->size() != n)) {
    throw Error(ErrorCode::dimension_mismatch, "kkt_assignment: inconsistent shapes");
  }
  std::map<std::string, double> out;
  for (int i = 0; i < n; ++i) out["x" + std::to_string(i + 1)] = x(i);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      const std::string suffix = std::to_string(i + 1) + "_" + std::to_string(j + 1);
      out["X_" + suffix] = X(i, j);
      out["Z_" + suffix] = Z(i, j);
    }
  }
  if (c) {
    for (int i = 0; i < n; ++i) out["c" + std::to_string(i + 1)] = (*c)(i);
  }
  return out;
}

namespace {

std::string format_polynomial(const Polynomial& poly, const std::vector<std::string>& names) {
  if (poly.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [mono, coeff] : poly.terms()) {
    const bool negative = coeff < 0;
    const BigRational magnitude = negative ? BigRational(-coeff) : coeff;
    if (first) {
      if (negative) out << "-";
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;
    bool need_star = false;
    if (mono.empty() || magnitude != 1) {
      out << rational_to_string(magnitude);
      need_star = true;
    }
    for (const auto& [index, exponent] : mono) {
      if (need_star) out << "*";
      out << names.at(static_cast<std::size_t>(index));
      if (exponent != 1) out << "^" << exponent;
      need_star = true;
    }
  }
  return out.str();
}

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

Polynomial parse_polynomial(const std::string& text, const std::unordered_map<std::string, int>& index_of) {
  Polynomial poly;
  std::size_t pos = 0;
  const std::string s = trim(text);
  if (s == "0") return poly;
  while (pos < s.size()) {
    bool negative = false;
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '+' || s[pos] == '-')) {
      if (s[pos] == '-') negative = !negative;
      ++pos;
    }
    std::size_t end = pos;
    while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
    const std::string term = trim(std::string_view(s).substr(pos, end - pos));
    if (term.empty()) throw Error(ErrorCode::parse_error, "empty term in '" + s + "'");
    pos = end;

    BigRational coeff = 1;
    Monomial mono;
    std::stringstream factors(term);
    std::string factor;
    while (std::getline(factors, factor, '*')) {
      factor = trim(factor);
      if (factor.empty()) throw Error(ErrorCode::parse_error, "empty factor in '" + term + "'");
      if (std::isdigit(static_cast<unsigned char>(factor[0]))) {
        coeff *= parse_rational(factor);
        continue;
      }
      int exponent = 1;
      std::string name = factor;
      if (const auto caret = factor.find('^'); caret != std::string::npos) {
        name = factor.substr(0, caret);
        exponent = std::stoi(factor.substr(caret + 1));
      }
      const auto it = index_of.find(name);
      if (it == index_of.end()) throw Error(ErrorCode::parse_error, "unknown variable '" + name + "'");
      mono = monomial_product(mono, {{it->second, exponent}});
    }
    poly.add_term(mono, negative ? BigRational(-coeff) : coeff);
  }
  return poly;
}

json metadata_to_json(const SystemMetadata& meta) {
  return json{{"n", meta.n},
              {"m", meta.m},
              {"variant", std::string(to_string(meta.variant))},
              {"symbolic_c", meta.symbolic_c},
              {"rank", meta.rank},
              {"x_minor_count", meta.x_minor_count},
              {"z_minor_count", meta.z_minor_count},
              {"bezout_product", meta.bezout_product.str()}};
}

SystemMetadata metadata_from_json(const json& j) {
  SystemMetadata meta;
  meta.n = j.at("n").get<int>();
  meta.m = j.at("m").get<int>();
  meta.variant = parse_kkt_variant(j.at("variant").get<std::string>());
  meta.symbolic_c = j.at("symbolic_c").get<bool>();
  meta.rank = j.at("rank").get<int>();
  meta.x_minor_count = j.at("x_minor_count").get<int>();
  meta.z_minor_count = j.at("z_minor_count").get<int>();
  meta.bezout_product = BigInt(j.at("bezout_product").get<std::string>());
  return meta;
}

}  // namespace

std::string export_system(const PolySystem& system, ExportFormat format) {
  if (format == ExportFormat::plain_text) {
    std::ostringstream out;
    out << "vars:";
    for (const auto& v : system.variables) out << " " << v;
    out << "\n";
    for (const auto& eq : system.equations) out << format_polynomial(eq, system.variables) << " = 0\n";
    return out.str();
  }
  json equations = json::array();
  for (const auto& eq : system.equations) {
    json terms = json::array();
    for (const auto& [mono, coeff] : eq.terms()) {
      json powers = json::array();
      for (const auto& [index, exponent] : mono) powers.push_back({index, exponent});
      terms.push_back({{"coefficient", rational_to_string(coeff)}, {"monomial", std::move(powers)}});
    }
    equations.push_back(std::move(terms));
  }
  const json doc{{"variables", system.variables},
                 {"equations", std::move(equations)},
                 {"metadata", metadata_to_json(system.metadata)}};
  return doc.dump(2) + "\n";
}

PolySystem parse_system(std::string_view text, ExportFormat format) {
  PolySystem sys;
  if (format == ExportFormat::plain_text) {
    std::istringstream in{std::string(text)};
    std::string line;
    // '#' lines are comments (run manifests)
    auto next_line = [&] {
      while (std::getline(in, line)) {
        if (line.rfind('#', 0) != 0) return true;
      }
      return false;
    };
    if (!next_line() || line.rfind("vars:", 0) != 0) {
      throw Error(ErrorCode::parse_error, "plain_text system must start with 'vars:'");
    }
    std::istringstream header(line.substr(5));
    std::unordered_map<std::string, int> index_of;
    for (std::string name; header >> name;) {
      index_of.emplace(name, static_cast<int>(sys.variables.size()));
      sys.variables.push_back(name);
    }
    while (next_line()) {
      if (trim(line).empty()) continue;
      const auto eq_pos = line.rfind('=');
      if (eq_pos == std::string::npos || trim(std::string_view(line).substr(eq_pos + 1)) != "0") {
        throw Error(ErrorCode::parse_error, "equation lines must end in '= 0': " + line);
      }
      sys.equations.push_back(parse_polynomial(line.substr(0, eq_pos), index_of));
    }
    sys.metadata.bezout_product = bezout_product(sys.equations);
    return sys;
  }

  try {
    const json doc = json::parse(text);
    sys.variables = doc.at("variables").get<std::vector<std::string>>();
    for (const auto& terms : doc.at("equations")) {
      Polynomial eq;
      for (const auto& term : terms) {
        Monomial mono;
        for (const auto& power : term.at("monomial")) {
          const int index = power.at(0).get<int>();
          if (index < 0 || index >= static_cast<int>(sys.variables.size())) {
            throw Error(ErrorCode::parse_error, "variable index out of range");
          }
          mono = monomial_product(mono, {{index, power.at(1).get<int>()}});
        }
        eq.add_term(mono, parse_rational(term.at("coefficient").get<std::string>()));
      }
      sys.equations.push_back(std::move(eq));
    }
    sys.metadata = metadata_from_json(doc.at("metadata"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("system JSON: ") + e.what());
  }
  return sys;
}

}  // namespace psdrank
