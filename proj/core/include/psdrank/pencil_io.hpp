#pragma once

// Pencil JSON format:
//   { "m": int, "n": int, "mats": [[m*m row-major floats] x (n+1)],
//     "projection": optional [[n floats] x k] }
// Symmetry is validated to 1e-12 on load and then enforced exactly.

#include <filesystem>
#include <string>
#include <string_view>

#include "psdrank/linalg.hpp"

namespace psdrank {

Pencil parse_pencil_json(std::string_view text);
std::string pencil_to_json(const Pencil& pencil);

Pencil load_pencil(const std::filesystem::path& path);
void save_pencil(const Pencil& pencil, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace psdrank
