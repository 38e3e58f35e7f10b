#pragma once

#include <filesystem>
#include <string>

#include "als/linalg.hpp"

namespace als::io {

// Fixture text format: first line "m p", then m lines of p space-separated
// decimal floats. A vector is a single-column matrix.
DenseMatrix read_matrix(const std::filesystem::path& path);
Vector read_vector(const std::filesystem::path& path);

void write_matrix(const std::filesystem::path& path, const DenseMatrix& A);
void write_vector(const std::filesystem::path& path, const Vector& v);

/// Doubles rendered with 17 significant digits (round-trip exact).
std::string format_double(double x);

/// Writes to a sibling temp file, then renames onto path.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace als::io
