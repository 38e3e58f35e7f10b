#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "als/errors.hpp"

namespace als {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    Vector row_vector(std::size_t i) const;

    const std::vector<double>& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// One least-squares instance y = H x + n. x_true and noise are optional;
/// when both are present the construction re-verifies y = H x_true + noise.
struct ProblemInstance {
    DenseMatrix H;
    Vector y;
    std::optional<Vector> x_true;
    std::optional<Vector> noise;

    ProblemInstance(DenseMatrix H_in, Vector y_in,
                    std::optional<Vector> x_true_in = std::nullopt,
                    std::optional<Vector> noise_in = std::nullopt);

    std::size_t m() const { return H.rows(); }
    std::size_t p() const { return H.cols(); }
};

// Accumulation in all of these is fixed left-to-right so repeated runs are
// bit-identical.
double dot(std::span<const double> u, std::span<const double> v);
double two_norm(std::span<const double> v);
Vector mat_vec(const DenseMatrix& A, std::span<const double> v);

DenseMatrix transpose(const DenseMatrix& A);
DenseMatrix mat_mul(const DenseMatrix& A, const DenseMatrix& B);

/// Largest singular value via power iteration on A^T A, started from the
/// normalized all-ones vector. Throws ConvergenceError after max_iter.
double largest_singular_value(const DenseMatrix& A, double tol = 1e-10,
                              int max_iter = 10000);

/// Batch LS through the normal equations with a Cholesky factorization.
/// A pivot below 1e-12 times the largest pivot raises RankError.
Vector batch_ls_solve(const ProblemInstance& problem);

/// J(x_hat) = (y - H x_hat)^T (y - H x_hat).
double residual_cost(const ProblemInstance& problem, std::span<const double> x_hat);

/// True when the Cholesky factorization of H^T H succeeds under the rank
/// tolerance, i.e. H has full column rank at working precision.
bool has_full_column_rank(const DenseMatrix& H);

}  // namespace als
