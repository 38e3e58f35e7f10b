#include <doctest.h>

#include <cmath>

#include "als/experiments.hpp"
#include "als/linalg.hpp"
#include "oracles.hpp"

using namespace als;

namespace {

DenseMatrix random_matrix(std::size_t m, std::size_t p, Rng& rng, double lo = -1.0,
                          double hi = 1.0) {
    DenseMatrix A(m, p);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < p; ++j) A(i, j) = lo + (hi - lo) * rng.uniform();
    return A;
}

Vector random_vector(std::size_t n, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Vector v(n);
    for (auto& x : v) x = lo + (hi - lo) * rng.uniform();
    return v;
}

}  // namespace

TEST_CASE("mat_vec basics") {
    CHECK(mat_vec(DenseMatrix::identity(3), Vector{1, 2, 3}) == Vector{1, 2, 3});

    DenseMatrix A(2, 2);
    A(0, 0) = 1; A(0, 1) = 2; A(1, 0) = 3; A(1, 1) = 4;
    CHECK(mat_vec(A, Vector{1, 1}) == Vector{3, 7});

    CHECK(mat_vec(DenseMatrix(2, 2), Vector{5, 5}) == Vector{0, 0});

    CHECK_THROWS_AS(mat_vec(A, Vector{1, 2, 3}), DimensionError);
}

TEST_CASE("dot and two_norm basics") {
    CHECK(dot(Vector{1, 0}, Vector{0, 1}) == 0.0);
    CHECK(dot(Vector{3, 4}, Vector{3, 4}) == 25.0);
    CHECK(dot(Vector{-7.25}, Vector{1}) == -7.25);
    CHECK_THROWS_AS(dot(Vector{1}, Vector{1, 2}), DimensionError);

    CHECK(two_norm(Vector{0, 0, 0}) == 0.0);
    CHECK(two_norm(Vector{3, 4}) == 5.0);
    CHECK(two_norm(Vector{-2.5}) == 2.5);
}

TEST_CASE("Cauchy-Schwarz holds on random pairs") {
    Rng rng(11);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 10);
        Vector u = random_vector(n, rng), v = random_vector(n, rng);
        CHECK(std::abs(dot(u, v)) <= two_norm(u) * two_norm(v) * (1.0 + 1e-12));
    }
}

TEST_CASE("largest_singular_value simple cases") {
    CHECK(largest_singular_value(DenseMatrix::identity(3)) == doctest::Approx(1.0));

    DenseMatrix D(3, 3);
    D(0, 0) = 5; D(1, 1) = 2; D(2, 2) = 1;
    CHECK(largest_singular_value(D) == doctest::Approx(5.0));

    CHECK(largest_singular_value(DenseMatrix(4, 2)) == 0.0);
}

TEST_CASE("largest_singular_value matches Jacobi oracle") {
    Rng rng(17);
    for (int t = 0; t < 30; ++t) {
        DenseMatrix A = random_matrix(6, 3, rng);
        const double got = largest_singular_value(A, 1e-12, 20000);
        const double want = oracle::largest_singular_value(A);
        CHECK(got == doctest::Approx(want).epsilon(1e-8));
        // row norms never exceed the spectral norm
        for (std::size_t i = 0; i < A.rows(); ++i)
            CHECK(got * got >= dot(A.row(i), A.row(i)) * (1.0 - 1e-12));
    }
}

TEST_CASE("batch LS on identity and scalar-mean instances") {
    {
        DenseMatrix H = DenseMatrix::identity(4);
        Vector y{0.5, -2, 3, 7};
        ProblemInstance prob(H, y);
        Vector x = batch_ls_solve(prob);
        for (std::size_t i = 0; i < 4; ++i) CHECK(x[i] == doctest::Approx(y[i]));
    }
    {
        DenseMatrix H(2, 1);
        H(0, 0) = 1; H(1, 0) = 1;
        ProblemInstance prob(H, Vector{1, 3});
        Vector x = batch_ls_solve(prob);
        CHECK(x[0] == doctest::Approx(2.0));
    }
}

TEST_CASE("batch LS orthogonality and optimality") {
    Rng rng(23);
    for (int t = 0; t < 10; ++t) {
        DenseMatrix H = random_matrix(10, 3, rng);
        Vector y = random_vector(10, rng);
        ProblemInstance prob(H, y);
        Vector x = batch_ls_solve(prob);

        // normal-equation residual H^T (y - H x) ~ 0
        Vector r = mat_vec(H, x);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = y[i] - r[i];
        Vector hty = mat_vec(transpose(H), y);
        Vector htr = mat_vec(transpose(H), r);
        CHECK(two_norm(htr) <= 1e-9 * (1.0 + two_norm(hty)));

        // J(x_LS) <= J(x_LS + delta) for 100 sampled perturbations
        const double best = residual_cost(prob, x);
        for (int s = 0; s < 100; ++s) {
            Vector z = x;
            for (auto& v : z) v += 0.5 * (rng.uniform() - 0.5);
            CHECK(best <= residual_cost(prob, z) + 1e-12);
        }
    }
}

TEST_CASE("batch LS rejects rank-deficient H") {
    DenseMatrix H(3, 2);
    // second column is twice the first
    for (std::size_t i = 0; i < 3; ++i) {
        H(i, 0) = static_cast<double>(i + 1);
        H(i, 1) = 2.0 * static_cast<double>(i + 1);
    }
    ProblemInstance prob(H, Vector{1, 2, 3});
    CHECK_THROWS_AS(batch_ls_solve(prob), RankError);
    CHECK_FALSE(has_full_column_rank(H));
}

TEST_CASE("residual_cost") {
    DenseMatrix H = DenseMatrix::identity(2);
    ProblemInstance prob(H, Vector{1, 1});
    CHECK(residual_cost(prob, Vector{1, 1}) == 0.0);
    CHECK(residual_cost(prob, Vector{0, 0}) == 2.0);
    CHECK_THROWS_AS(residual_cost(prob, Vector{1}), DimensionError);
}

TEST_CASE("ProblemInstance validation") {
    DenseMatrix H = DenseMatrix::identity(2);
    CHECK_THROWS_AS(ProblemInstance(H, Vector{1}), DimensionError);
    CHECK_THROWS_AS(ProblemInstance(H, Vector{1, std::nan("")}), DimensionError);
    // y must equal H x_true + noise when both are given
    CHECK_THROWS_AS(ProblemInstance(H, Vector{1, 1}, Vector{1, 1}, Vector{5, 0}),
                    DimensionError);
    CHECK_NOTHROW(ProblemInstance(H, Vector{1.5, 1}, Vector{1, 1}, Vector{0.5, 0}));
}
