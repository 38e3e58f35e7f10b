#include "als/linalg.hpp"

#include <cmath>
#include <string>

namespace als {

namespace {

void require_finite(std::span<const double> v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw DimensionError(std::string(what) + " contains a non-finite entry");
        }
    }
}

// Cholesky of a symmetric positive-definite matrix, in place on the lower
// triangle. Returns false when a pivot falls below rel_tol times the largest
// pivot seen (rank deficiency at working precision).
bool cholesky_lower(DenseMatrix& G, double rel_tol = 1e-12) {
    const std::size_t n = G.rows();
    double max_pivot = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double d = G(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= G(j, k) * G(j, k);
        if (d > max_pivot) max_pivot = d;
        if (!(d > 0.0) || d < rel_tol * max_pivot) return false;
        const double l = std::sqrt(d);
        G(j, j) = l;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = G(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= G(i, k) * G(j, k);
            G(i, j) = s / l;
        }
    }
    return true;
}

void cholesky_solve_in_place(const DenseMatrix& L, Vector& b) {
    const std::size_t n = L.rows();
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= L(i, k) * b[k];
        b[i] = s / L(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= L(k, ii) * b[k];
        b[ii] = s / L(ii, ii);
    }
}

DenseMatrix normal_matrix(const DenseMatrix& H) {
    const std::size_t m = H.rows(), p = H.cols();
    DenseMatrix G(p, p);
    for (std::size_t i = 0; i < m; ++i) {
        auto h = H.row(i);
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = a; b < p; ++b) G(a, b) += h[a] * h[b];
    }
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < a; ++b) G(a, b) = G(b, a);
    return G;
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

Vector DenseMatrix::row_vector(std::size_t i) const {
    auto r = row(i);
    return Vector(r.begin(), r.end());
}

ProblemInstance::ProblemInstance(DenseMatrix H_in, Vector y_in,
                                 std::optional<Vector> x_true_in,
                                 std::optional<Vector> noise_in)
    : H(std::move(H_in)), y(std::move(y_in)),
      x_true(std::move(x_true_in)), noise(std::move(noise_in)) {
    if (H.rows() == 0 || H.cols() == 0) throw DimensionError("H must be nonempty");
    if (H.rows() < H.cols())
        throw DimensionError("H must have at least as many rows as columns");
    if (y.size() != H.rows()) throw DimensionError("y length must match rows of H");
    require_finite(H.data(), "H");
    require_finite(y, "y");
    if (x_true && x_true->size() != H.cols())
        throw DimensionError("x_true length must match cols of H");
    if (noise && noise->size() != H.rows())
        throw DimensionError("noise length must match rows of H");
    if (x_true) require_finite(*x_true, "x_true");
    if (noise) require_finite(*noise, "noise");
    if (x_true && noise) {
        Vector hx = mat_vec(H, *x_true);
        double scale = 0.0;
        for (double v : y) scale = std::max(scale, std::abs(v));
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (std::abs(hx[i] + (*noise)[i] - y[i]) > 1e-9 * (1.0 + scale))
                throw DimensionError("y does not equal H x_true + noise");
        }
    }
}

double dot(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw DimensionError("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

double two_norm(std::span<const double> v) {
    return std::sqrt(dot(v, v));
}

Vector mat_vec(const DenseMatrix& A, std::span<const double> v) {
    if (A.cols() != v.size()) throw DimensionError("mat_vec: dimension mismatch");
    Vector out(A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i) out[i] = dot(A.row(i), v);
    return out;
}

DenseMatrix transpose(const DenseMatrix& A) {
    DenseMatrix T(A.cols(), A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) T(j, i) = A(i, j);
    return T;
}

DenseMatrix mat_mul(const DenseMatrix& A, const DenseMatrix& B) {
    if (A.cols() != B.rows()) throw DimensionError("mat_mul: dimension mismatch");
    DenseMatrix C(A.rows(), B.cols());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t k = 0; k < A.cols(); ++k) {
            const double a = A(i, k);
            for (std::size_t j = 0; j < B.cols(); ++j) C(i, j) += a * B(k, j);
        }
    return C;
}

double largest_singular_value(const DenseMatrix& A, double tol, int max_iter) {
    if (A.rows() == 0 || A.cols() == 0)
        throw DimensionError("largest_singular_value: empty matrix");
    if (!(tol > 0.0)) throw ConfigError("largest_singular_value: tol must be positive");
    const std::size_t p = A.cols();
    Vector v(p, 1.0 / std::sqrt(static_cast<double>(p)));
    double prev = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Vector u = mat_vec(A, v);
        const double s = two_norm(u);  // = sqrt(v^T A^T A v) for unit v
        if (s == 0.0) return 0.0;
        // w = A^T u
        Vector w(p, 0.0);
        for (std::size_t i = 0; i < A.rows(); ++i) {
            auto r = A.row(i);
            for (std::size_t j = 0; j < p; ++j) w[j] += r[j] * u[i];
        }
        const double wn = two_norm(w);
        if (wn == 0.0) return 0.0;
        for (std::size_t j = 0; j < p; ++j) v[j] = w[j] / wn;
        if (std::abs(s - prev) <= tol * std::max(std::abs(s), 1e-300)) return s;
        prev = s;
    }
    throw ConvergenceError("largest_singular_value: power iteration did not converge",
                           prev);
}

bool has_full_column_rank(const DenseMatrix& H) {
    DenseMatrix G = normal_matrix(H);
    return cholesky_lower(G);
}

Vector batch_ls_solve(const ProblemInstance& problem) {
    const DenseMatrix& H = problem.H;
    const std::size_t m = H.rows(), p = H.cols();
    DenseMatrix G = normal_matrix(H);
    Vector b(p, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        auto h = H.row(i);
        for (std::size_t j = 0; j < p; ++j) b[j] += h[j] * problem.y[i];
    }
    if (!cholesky_lower(G))
        throw RankError("batch_ls_solve: H is rank deficient at working precision");
    cholesky_solve_in_place(G, b);
    return b;
}

double residual_cost(const ProblemInstance& problem, std::span<const double> x_hat) {
    if (x_hat.size() != problem.p())
        throw DimensionError("residual_cost: estimate length must match cols of H");
    double cost = 0.0;
    for (std::size_t i = 0; i < problem.m(); ++i) {
        const double r = problem.y[i] - dot(problem.H.row(i), x_hat);
        cost += r * r;
    }
    return cost;
}

}  // namespace als
