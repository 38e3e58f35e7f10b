#include "als/io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace als::io {

namespace {

std::size_t parse_count(std::istringstream& ss, std::size_t line, const char* what) {
    long long v = -1;
    if (!(ss >> v) || v < 1) {
        throw ParseError(std::string("expected positive integer ") + what, line);
    }
    return static_cast<std::size_t>(v);
}

}  // namespace

DenseMatrix read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'", 0);
    std::string header;
    if (!std::getline(in, header)) throw ParseError("empty file", 1);
    std::istringstream hs(header);
    const std::size_t m = parse_count(hs, 1, "m");
    const std::size_t p = parse_count(hs, 1, "p");
    std::string trailing;
    if (hs >> trailing) throw ParseError("trailing tokens after header", 1);

    DenseMatrix A(m, p);
    std::string line;
    for (std::size_t i = 0; i < m; ++i) {
        if (!std::getline(in, line)) throw ParseError("unexpected end of file", i + 2);
        std::istringstream ls(line);
        for (std::size_t j = 0; j < p; ++j) {
            double v;
            if (!(ls >> v)) throw ParseError("bad number in column " + std::to_string(j + 1),
                                             i + 2);
            if (!std::isfinite(v)) throw ParseError("non-finite entry", i + 2);
            A(i, j) = v;
        }
        if (ls >> line) throw ParseError("trailing tokens", i + 2);
    }
    return A;
}

Vector read_vector(const std::filesystem::path& path) {
    DenseMatrix A = read_matrix(path);
    if (A.cols() != 1) throw ParseError("expected a single-column vector file", 1);
    return A.data();
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_matrix(const std::filesystem::path& path, const DenseMatrix& A) {
    std::string out = std::to_string(A.rows()) + " " + std::to_string(A.cols()) + "\n";
    for (std::size_t i = 0; i < A.rows(); ++i) {
        for (std::size_t j = 0; j < A.cols(); ++j) {
            if (j) out += ' ';
            out += format_double(A(i, j));
        }
        out += '\n';
    }
    write_file_atomic(path, out);
}

void write_vector(const std::filesystem::path& path, const Vector& v) {
    DenseMatrix A(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) A(i, 0) = v[i];
    write_matrix(path, A);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
        out << contents;
        if (!out.flush()) throw Error("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace als::io
