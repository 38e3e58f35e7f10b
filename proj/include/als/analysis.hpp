#pragma once

#include <vector>

#include "als/linalg.hpp"
#include "als/solvers.hpp"

namespace als {

/// Per-row iteration matrices, the one-cycle product and its stability.
struct CycleAnalysis {
    std::vector<DenseMatrix> per_row_matrices;  // M_i = I - 2 mu h_i h_i^T
    DenseMatrix cycle;                          // M = M_m ... M_1
    double spectral_norm = 0.0;                 // ||M||_2
    bool stable = false;                        // ||M||_2 < 1
};

/// Split of the iteration error into the decaying initial-condition part and
/// the noise-driven part; e_total = e_init + e_noise by construction.
struct ErrorDecomposition {
    std::uint64_t k = 0;
    Vector e_total;
    Vector e_init;
    Vector e_noise;
};

/// I - 2 mu h h^T.
DenseMatrix row_iteration_matrix(std::span<const double> h_row, double mu);

/// Builds all M_i and their product in the order M_m M_{m-1} ... M_1.
CycleAnalysis cycle_matrix(const DenseMatrix& H, double mu);

/// Propagates e_init(k) = M e_init(k-1) and e_noise(k) = M e_noise(k-1)
/// + 2 mu h n alongside an actual solver run and checks the sum against the
/// solver trace to 1e-10 (infinity norm). Requires x_true and noise.
std::vector<ErrorDecomposition> replay_error_recursion(const ProblemInstance& problem,
                                                       const SolverConfig& config);

/// Smallest cycle-aligned 0-based index k_p such that the error norms over
/// cycle c and cycle c+1 agree to rel_tol in relative max-norm. Returns
/// trace.size() when no such cycle exists. Trace must hold >= 3m entries.
std::size_t detect_periodic_onset(const std::vector<double>& error_norm_trace,
                                  std::size_t m, double rel_tol = 1e-3);

/// Mean of (x_hat - x_true) over the window.
Vector averaged_error(const std::vector<Vector>& trace_window, const Vector& x_true);

/// CSV row per the report schema: m,p,mu,spectral_norm,stable.
std::string cycle_analysis_csv_row(const CycleAnalysis& analysis, std::size_t m,
                                   std::size_t p, double mu);

}  // namespace als
