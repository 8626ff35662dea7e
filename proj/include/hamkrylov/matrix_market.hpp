#pragma once

#include <filesystem>
#include <iosfwd>

#include "hamkrylov/dense.hpp"
#include "hamkrylov/sparse.hpp"

namespace hamkrylov::mm {

enum class Symmetry { General, Symmetric };

/// Reads "%%MatrixMarket matrix coordinate real general|symmetric" (1-based).
/// Symmetric files store the lower triangle; the mirror entries are restored.
SparseMatrix read_coordinate(std::istream& in);
SparseMatrix read_coordinate(const std::filesystem::path& path);

/// Symmetric output keeps only entries with row >= col; the caller is
/// responsible for the matrix actually being symmetric.
void write_coordinate(std::ostream& out, const SparseMatrix& a, Symmetry symmetry = Symmetry::General);
void write_coordinate(const std::filesystem::path& path, const SparseMatrix& a,
                      Symmetry symmetry = Symmetry::General);

/// "%%MatrixMarket matrix array real general", column-major.
DenseMatrix read_array(std::istream& in);
DenseMatrix read_array(const std::filesystem::path& path);
void write_array(std::ostream& out, const DenseMatrix& a);
void write_array(const std::filesystem::path& path, const DenseMatrix& a);

} // namespace hamkrylov::mm
