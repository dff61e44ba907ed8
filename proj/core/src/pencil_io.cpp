#include "psdrank/pencil_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "psdrank/error.hpp"

namespace psdrank {

using nlohmann::json;

namespace {

constexpr double kSymmetryTolerance = 1e-12;

Eigen::MatrixXd read_square(const json& flat, int m, std::size_t index) {
  if (!flat.is_array() || flat.size() != static_cast<std::size_t>(m) * m) {
    throw Error(ErrorCode::parse_error, "mats[" + std::to_string(index) + "] must hold m*m numbers");
  }
  Eigen::MatrixXd a(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) a(i, j) = flat.at(static_cast<std::size_t>(i) * m + j).get<double>();
  }
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double scale = std::max(1.0, std::max(std::abs(a(i, j)), std::abs(a(j, i))));
      if (std::abs(a(i, j) - a(j, i)) > kSymmetryTolerance * scale) {
        throw Error(ErrorCode::parse_error, "mats[" + std::to_string(index) + "] is not symmetric at (" +
                                                std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  return a;
}

}  // namespace

Pencil parse_pencil_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("pencil JSON: ") + e.what());
  }
  try {
    const int m = doc.at("m").get<int>();
    const int n = doc.at("n").get<int>();
    const json& mats = doc.at("mats");
    if (m < 1 || n < 0) throw Error(ErrorCode::parse_error, "pencil needs m >= 1 and n >= 0");
    if (!mats.is_array() || mats.size() != static_cast<std::size_t>(n) + 1) {
      throw Error(ErrorCode::parse_error, "mats must contain n+1 matrices");
    }
    std::vector<SymMat> matrices;
    for (std::size_t k = 0; k < mats.size(); ++k) matrices.emplace_back(read_square(mats[k], m, k));

    std::optional<Eigen::MatrixXd> projection;
    if (doc.contains("projection") && !doc["projection"].is_null()) {
      const json& rows = doc["projection"];
      if (!rows.is_array() || rows.empty()) throw Error(ErrorCode::parse_error, "projection must be a non-empty array");
      Eigen::MatrixXd p(static_cast<Eigen::Index>(rows.size()), n);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].is_array() || rows[i].size() != static_cast<std::size_t>(n)) {
          throw Error(ErrorCode::parse_error, "projection rows must have n entries");
        }
        for (int j = 0; j < n; ++j) p(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)].get<double>();
      }
      projection = std::move(p);
    }
    return Pencil(std::move(matrices), std::move(projection));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("pencil JSON: ") + e.what());
  }
}

std::string pencil_to_json(const Pencil& pencil) {
  json doc;
  doc["m"] = pencil.m;
  doc["n"] = pencil.n;
  json mats = json::array();
  for (const auto& a : pencil.mats) {
    json flat = json::array();
    for (int i = 0; i < pencil.m; ++i) {
      for (int j = 0; j < pencil.m; ++j) flat.push_back(a(i, j));
    }
    mats.push_back(std::move(flat));
  }
  doc["mats"] = std::move(mats);
  if (pencil.projection) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < pencil.projection->rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < pencil.projection->cols(); ++j) row.push_back((*pencil.projection)(i, j));
      rows.push_back(std::move(row));
    }
    doc["projection"] = std::move(rows);
  }
  return doc.dump(2);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::io_error, "write failed for " + path.string());
}

Pencil load_pencil(const std::filesystem::path& path) { return parse_pencil_json(read_text_file(path)); }

void save_pencil(const Pencil& pencil, const std::filesystem::path& path) {
  write_text_file(path, pencil_to_json(pencil));
}

}  // namespace psdrank
