#include "pspec/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pspec {

namespace {

[[noreturn]] void fail(const std::string& path, long line, const std::string& msg) {
    std::ostringstream os;
    os << path << ":" << line << ": " << msg;
    throw InputError(os.str());
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    return s;
}

struct Header {
    bool coordinate = false;
    enum class Field { real, integer, cplx } field = Field::real;
    enum class Symmetry { general, symmetric, hermitian } symmetry = Symmetry::general;
};

}  // namespace

Matrix MarketMatrix::to_dense() const {
    if (!coordinate) return dense;
    Matrix M = Matrix::Zero(rows, cols);
    for (const Triplet& t : entries) M(t.row(), t.col()) += t.value();
    return M;
}

SparseMatrix MarketMatrix::to_sparse() const {
    SparseMatrix S(rows, cols);
    if (coordinate) {
        S.setFromTriplets(entries.begin(), entries.end());
        S.prune(Complex(0, 0));
    } else {
        S = dense.sparseView();
    }
    return S;
}

MarketMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open matrix file: " + path);

    long lineno = 0;
    std::string line;
    if (!std::getline(in, line)) fail(path, 1, "empty file");
    ++lineno;

    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket") fail(path, lineno, "missing %%MatrixMarket banner");
    if (lower(object) != "matrix") fail(path, lineno, "unsupported object '" + object + "'");

    Header h;
    const std::string fmt = lower(format);
    if (fmt == "coordinate") h.coordinate = true;
    else if (fmt == "array") h.coordinate = false;
    else fail(path, lineno, "unsupported format '" + format + "'");

    const std::string fld = lower(field);
    if (fld == "real") h.field = Header::Field::real;
    else if (fld == "integer") h.field = Header::Field::integer;
    else if (fld == "complex") h.field = Header::Field::cplx;
    else if (fld == "pattern") fail(path, lineno, "pattern matrices carry no values and are rejected");
    else fail(path, lineno, "unsupported field '" + field + "'");

    const std::string sym = lower(symmetry);
    if (sym == "general") h.symmetry = Header::Symmetry::general;
    else if (sym == "symmetric") h.symmetry = Header::Symmetry::symmetric;
    else if (sym == "hermitian") h.symmetry = Header::Symmetry::hermitian;
    else fail(path, lineno, "unsupported symmetry '" + symmetry + "'");

    auto next_data_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            size_t i = 0;
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            if (i == line.size() || line[i] == '%') continue;
            return true;
        }
        return false;
    };

    if (!next_data_line()) fail(path, lineno, "missing size line");
    std::istringstream szs(line);
    long rows = 0, cols = 0, nnz = 0;
    if (h.coordinate) {
        if (!(szs >> rows >> cols >> nnz)) fail(path, lineno, "malformed coordinate size line");
    } else {
        if (!(szs >> rows >> cols)) fail(path, lineno, "malformed array size line");
    }
    if (rows <= 0 || cols <= 0) fail(path, lineno, "dimensions must be positive");
    if (h.symmetry != Header::Symmetry::general && rows != cols)
        fail(path, lineno, "symmetric storage requires a square matrix");

    MarketMatrix out;
    out.rows = rows;
    out.cols = cols;
    out.coordinate = h.coordinate;

    auto parse_value = [&](std::istringstream& s) -> Complex {
        double re = 0, im = 0;
        if (h.field == Header::Field::cplx) {
            if (!(s >> re >> im)) fail(path, lineno, "expected two numeric values");
        } else {
            if (!(s >> re)) fail(path, lineno, "expected a numeric value");
        }
        return {re, im};
    };

    if (h.coordinate) {
        out.entries.reserve(size_t(nnz) * (h.symmetry == Header::Symmetry::general ? 1 : 2));
        for (long e = 0; e < nnz; ++e) {
            if (!next_data_line()) fail(path, lineno, "unexpected end of file in entry list");
            std::istringstream es(line);
            long i = 0, j = 0;
            if (!(es >> i >> j)) fail(path, lineno, "malformed coordinate entry");
            if (i < 1 || i > rows || j < 1 || j > cols)
                fail(path, lineno, "coordinate indices out of range");
            const Complex v = parse_value(es);
            out.entries.emplace_back(i - 1, j - 1, v);
            if (h.symmetry != Header::Symmetry::general && i != j) {
                const Complex mirror =
                    h.symmetry == Header::Symmetry::hermitian ? std::conj(v) : v;
                out.entries.emplace_back(j - 1, i - 1, mirror);
            }
        }
    } else {
        out.dense = Matrix::Zero(rows, cols);
        if (h.symmetry == Header::Symmetry::general) {
            for (long j = 0; j < cols; ++j) {
                for (long i = 0; i < rows; ++i) {
                    if (!next_data_line()) fail(path, lineno, "unexpected end of file in array data");
                    std::istringstream es(line);
                    out.dense(i, j) = parse_value(es);
                }
            }
        } else {
            // Lower triangle stored column-wise, diagonal first.
            for (long j = 0; j < cols; ++j) {
                for (long i = j; i < rows; ++i) {
                    if (!next_data_line()) fail(path, lineno, "unexpected end of file in array data");
                    std::istringstream es(line);
                    const Complex v = parse_value(es);
                    out.dense(i, j) = v;
                    if (i != j)
                        out.dense(j, i) =
                            h.symmetry == Header::Symmetry::hermitian ? std::conj(v) : v;
                }
            }
        }
    }
    return out;
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_matrix_market(const std::string& path, const Matrix& M) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write matrix file: " + path);
    out << "%%MatrixMarket matrix array complex general\n";
    out << M.rows() << " " << M.cols() << "\n";
    for (Index j = 0; j < M.cols(); ++j)
        for (Index i = 0; i < M.rows(); ++i)
            out << fmt17(M(i, j).real()) << " " << fmt17(M(i, j).imag()) << "\n";
}

void write_matrix_market(const std::string& path, const SparseMatrix& M) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write matrix file: " + path);
    out << "%%MatrixMarket matrix coordinate complex general\n";
    out << M.rows() << " " << M.cols() << " " << M.nonZeros() << "\n";
    for (int k = 0; k < M.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(M, k); it; ++it) {
            out << (it.row() + 1) << " " << (it.col() + 1) << " "
                << fmt17(it.value().real()) << " " << fmt17(it.value().imag()) << "\n";
        }
    }
}

}  // namespace pspec
