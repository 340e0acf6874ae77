#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>

#include "pinv/matrix.hpp"

namespace pinv {

/// A parsed matrix of either scalar field.
///
/// Text format: a header line "m n real" or "m n complex", followed by m
/// lines of n whitespace-separated entries. Real entries are decimal
/// literals; complex entries are written "(re,im)" with no interior spaces.
/// Written at 17 significant digits, a matrix re-parses bit-exactly.
using AnyMatrix = std::variant<Matrix<double>, Matrix<Complex>>;

AnyMatrix parse_matrix(std::string_view text);

void write_matrix(std::ostream& os, const Matrix<double>& m, int digits = 17);
void write_matrix(std::ostream& os, const Matrix<Complex>& m, int digits = 17);
void write_matrix(std::ostream& os, const AnyMatrix& m, int digits = 17);

std::string format_matrix(const AnyMatrix& m, int digits = 17);

AnyMatrix load_matrix(const std::filesystem::path& path);
void save_matrix(const std::filesystem::path& path, const AnyMatrix& m, int digits = 17);

}  // namespace pinv
