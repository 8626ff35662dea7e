#include "hamkrylov/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hamkrylov/error.hpp"
#include "hamkrylov/format.hpp"

namespace hamkrylov::mm {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

struct Header {
    std::string format;
    std::string field;
    std::string symmetry;
};

Header read_header(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument("MatrixMarket: empty input");
    std::istringstream ss(line);
    std::string banner, object;
    Header h;
    ss >> banner >> object >> h.format >> h.field >> h.symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix") {
        throw InvalidArgument("MatrixMarket: missing '%%MatrixMarket matrix' banner");
    }
    h.format = lower(h.format);
    h.field = lower(h.field);
    h.symmetry = lower(h.symmetry);
    if (h.field != "real" && h.field != "double" && h.field != "integer") {
        throw InvalidArgument("MatrixMarket: unsupported field '" + h.field + "'");
    }
    if (h.symmetry != "general" && h.symmetry != "symmetric") {
        throw InvalidArgument("MatrixMarket: unsupported symmetry '" + h.symmetry + "'");
    }
    return h;
}

// next line that is neither blank nor a comment
bool next_data_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        const auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '%') continue;
        return true;
    }
    return false;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("MatrixMarket: cannot open " + path.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("MatrixMarket: cannot write " + path.string());
    return out;
}

} // namespace

SparseMatrix read_coordinate(std::istream& in) {
    const Header h = read_header(in);
    if (h.format != "coordinate") throw InvalidArgument("MatrixMarket: expected coordinate format");
    std::string line;
    if (!next_data_line(in, line)) throw InvalidArgument("MatrixMarket: missing size line");
    std::size_t rows = 0, cols = 0, entries = 0;
    {
        std::istringstream ss(line);
        if (!(ss >> rows >> cols >> entries)) throw InvalidArgument("MatrixMarket: malformed size line");
    }
    const bool symmetric = h.symmetry == "symmetric";
    if (symmetric && rows != cols) throw InvalidArgument("MatrixMarket: symmetric matrix must be square");
    std::vector<Triplet> triplets;
    triplets.reserve(symmetric ? 2 * entries : entries);
    for (std::size_t k = 0; k < entries; ++k) {
        if (!next_data_line(in, line)) throw InvalidArgument("MatrixMarket: fewer entries than declared");
        std::istringstream ss(line);
        std::size_t i = 0, j = 0;
        double v = 0.0;
        if (!(ss >> i >> j >> v)) throw InvalidArgument("MatrixMarket: malformed entry line");
        if (i < 1 || j < 1 || i > rows || j > cols) throw InvalidArgument("MatrixMarket: index out of range");
        triplets.push_back({i - 1, j - 1, v});
        if (symmetric && i != j) triplets.push_back({j - 1, i - 1, v});
    }
    return SparseMatrix::from_triplets(rows, cols, std::move(triplets));
}

SparseMatrix read_coordinate(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_coordinate(in);
}

void write_coordinate(std::ostream& out, const SparseMatrix& a, Symmetry symmetry) {
    const bool sym = symmetry == Symmetry::Symmetric;
    if (sym && a.rows() != a.cols()) throw DimensionError("MatrixMarket: symmetric output needs a square matrix");
    const auto offsets = a.row_offsets();
    const auto cidx = a.col_indices();
    const auto vals = a.values();
    std::size_t count = 0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k)
            if (!sym || cidx[k] <= i) ++count;
    out << "%%MatrixMarket matrix coordinate real " << (sym ? "symmetric" : "general") << "\n";
    out << a.rows() << " " << a.cols() << " " << count << "\n";
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
            if (sym && cidx[k] > i) continue;
            out << (i + 1) << " " << (cidx[k] + 1) << " " << format_double(vals[k]) << "\n";
        }
    }
}

void write_coordinate(const std::filesystem::path& path, const SparseMatrix& a, Symmetry symmetry) {
    auto out = open_out(path);
    write_coordinate(out, a, symmetry);
}

DenseMatrix read_array(std::istream& in) {
    const Header h = read_header(in);
    if (h.format != "array") throw InvalidArgument("MatrixMarket: expected array format");
    if (h.symmetry != "general") throw InvalidArgument("MatrixMarket: only general arrays are supported");
    std::string line;
    if (!next_data_line(in, line)) throw InvalidArgument("MatrixMarket: missing size line");
    std::size_t rows = 0, cols = 0;
    {
        std::istringstream ss(line);
        if (!(ss >> rows >> cols)) throw InvalidArgument("MatrixMarket: malformed size line");
    }
    DenseMatrix a(rows, cols);
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < rows; ++i) {
            if (!next_data_line(in, line)) throw InvalidArgument("MatrixMarket: fewer entries than declared");
            std::istringstream ss(line);
            if (!(ss >> a(i, j))) throw InvalidArgument("MatrixMarket: malformed array entry");
        }
    }
    return a;
}

DenseMatrix read_array(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_array(in);
}

void write_array(std::ostream& out, const DenseMatrix& a) {
    out << "%%MatrixMarket matrix array real general\n";
    out << a.rows() << " " << a.cols() << "\n";
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) out << format_double(a(i, j)) << "\n";
}

void write_array(const std::filesystem::path& path, const DenseMatrix& a) {
    auto out = open_out(path);
    write_array(out, a);
}

} // namespace hamkrylov::mm
