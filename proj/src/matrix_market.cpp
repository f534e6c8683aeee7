#include "traceinv/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace traceinv {

namespace {

[[noreturn]] void fail(const std::string& name, const std::string& what) {
    throw std::runtime_error("matrix market: " + name + ": " + what);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

SparseMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("matrix market: cannot open file: " + path);
    }
    return read_matrix_market(in, path);
}

SparseMatrix read_matrix_market(std::istream& in, const std::string& name) {
    std::string line;
    if (!std::getline(in, line)) {
        fail(name, "empty file");
    }
    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket") {
        fail(name, "missing %%MatrixMarket banner");
    }
    if (lower(object) != "matrix" || lower(format) != "coordinate") {
        fail(name, "only coordinate-format matrices are supported");
    }
    field = lower(field);
    if (field != "real" && field != "integer") {
        fail(name, "unsupported field '" + field + "' (real required)");
    }
    symmetry = lower(symmetry);
    bool symmetric = symmetry == "symmetric";
    if (!symmetric && symmetry != "general") {
        fail(name, "unsupported symmetry '" + symmetry + "'");
    }

    // skip comments and blank lines
    do {
        if (!std::getline(in, line)) {
            fail(name, "missing size line");
        }
    } while (line.empty() || line[0] == '%');

    long rows = 0, cols = 0, count = 0;
    {
        std::istringstream sizes(line);
        if (!(sizes >> rows >> cols >> count) || rows <= 0 || cols <= 0 || count < 0) {
            fail(name, "malformed size line '" + line + "'");
        }
    }
    if (rows != cols) {
        fail(name, "matrix is not square");
    }

    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(symmetric ? 2 * count : count));
    for (long k = 0; k < count; ++k) {
        long i = 0, j = 0;
        double v = 0.0;
        if (!(in >> i >> j >> v)) {
            fail(name, "truncated or malformed entry " + std::to_string(k + 1));
        }
        if (i < 1 || i > rows || j < 1 || j > cols) {
            fail(name, "entry " + std::to_string(k + 1) + " index out of range (1-based)");
        }
        entries.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1), v});
        if (symmetric && i != j) {
            entries.push_back({static_cast<int>(j - 1), static_cast<int>(i - 1), v});
        }
    }
    return SparseMatrix::from_triplets(static_cast<int>(rows), std::move(entries));
}

void write_matrix_market(const SparseMatrix& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("matrix market: cannot open file for writing: " + path);
    }
    write_matrix_market(a, out);
}

void write_matrix_market(const SparseMatrix& a, std::ostream& out) {
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << a.n << ' ' << a.n << ' ' << a.nnz() << '\n';
    char buf[64];
    for (int i = 0; i < a.n; ++i) {
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i + 1, a.col_idx[k] + 1,
                          a.values[k]);
            out << buf;
        }
    }
}

}  // namespace traceinv
