#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "als/linalg.hpp"

namespace als {

enum class Method { ALS, ILS, SLS, BATCH };

std::string method_name(Method m);
std::optional<Method> method_from_name(const std::string& name);

struct SolverConfig {
    double mu = 0.0;                   // step size (ALS/ILS)
    std::uint64_t iterations = 0;      // 0 = auto (see default_als_iterations)
    std::uint64_t average_window = 0;  // ALS averaging window; 0 = m
    bool record_trace = false;
    std::uint64_t trace_stride = 1;
    bool record_estimates = false;     // keep full iterate snapshots in the trace
};

struct TracePoint {
    std::uint64_t k = 0;
    double error_norm = 0.0;   // ||x_hat - x_true||_2, NaN when x_true unknown
    double residual = 0.0;     // J(x_hat)
    std::uint64_t multiplications = 0;  // cumulative at this iteration
    Vector estimate;           // only when record_estimates
};

struct SolverRun {
    Method method = Method::ALS;
    Vector estimate;
    std::uint64_t multiplications = 0;
    std::uint64_t iterations = 0;
    double mu = 0.0;
    std::uint64_t average_window = 0;  // ALS only
    std::vector<TracePoint> trace;
};

/// Final state of the sequential (recursive) LS pass.
struct SlsState {
    Vector estimate;
    Vector gain;
    DenseMatrix inverse_information;
};

/// Maps iteration counter k >= 1 to a row index in {1..m}: ((k-1) mod m) + 1.
inline std::uint64_t cyclic_index(std::uint64_t k, std::uint64_t m) {
    return (k - 1) % m + 1;
}

/// One row-action step: x + 2 mu h (y_i - h^T x). Costs 2p+1 multiplications
/// with 2 mu precomputed.
Vector als_step(const Vector& x_prev, std::span<const double> h_row, double y_i,
                double mu);

/// Exclusive upper step-size bound for ALS: 1 / (2 max_i ||h_i||^2).
double max_step_size_als(const DenseMatrix& H);

/// Exclusive upper step-size bound for ILS: 1 / (2 s1(H)^2).
double max_step_size_ils(const DenseMatrix& H);

/// Cyclic row-action solver with final-window averaging.
SolverRun als_solve(const ProblemInstance& problem, const SolverConfig& config);

/// Full-gradient steepest descent, recomputing the partial-gradient sum each
/// iteration (2pm+p multiplications per iteration).
SolverRun ils_solve(const ProblemInstance& problem, const SolverConfig& config);

/// Recursive LS over the m rows, gain K = P h / (1 + h^T P h), rank-one P
/// update, P re-symmetrized each step. Multiplications are instrumented.
SolverRun sls_solve(const ProblemInstance& problem, double initial_scale = 1e9,
                    SlsState* final_state = nullptr,
                    bool record_trace = false);

/// Closed-form multiplication counts: ALS = (2p+1)N + p, ILS = (2pm+p)N.
/// SLS and BATCH have no closed form (instrumented only) -> nullopt.
std::optional<std::uint64_t> multiplication_count(Method method, std::uint64_t m,
                                                  std::uint64_t p, std::uint64_t N);

/// Default ALS iteration count: the smallest multiple of m with
/// ||M||_2^(N/m) <= 1e-8, capped at 5000 m; 200 m when ||M||_2 >= 1 - 1e-12.
std::uint64_t default_als_iterations(const DenseMatrix& H, double mu);

/// CSV with columns k, error_norm, residual_cost, cumulative_multiplications
/// (plus is_final_average for ALS runs, flagging the averaged estimate row).
std::string trace_to_csv(const SolverRun& run, const ProblemInstance& problem);

}  // namespace als
