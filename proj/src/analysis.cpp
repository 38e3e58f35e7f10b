#include "als/analysis.hpp"

#include <cmath>

#include "als/io.hpp"

namespace als {

DenseMatrix row_iteration_matrix(std::span<const double> h_row, double mu) {
    if (!(mu > 0.0)) throw ConfigError("row_iteration_matrix: mu must be positive");
    const std::size_t p = h_row.size();
    DenseMatrix M = DenseMatrix::identity(p);
    const double two_mu = 2.0 * mu;
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) M(a, b) -= two_mu * h_row[a] * h_row[b];
    return M;
}

CycleAnalysis cycle_matrix(const DenseMatrix& H, double mu) {
    if (!(mu > 0.0)) throw ConfigError("cycle_matrix: mu must be positive");
    const std::size_t m = H.rows(), p = H.cols();
    CycleAnalysis out;
    out.per_row_matrices.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
        out.per_row_matrices.push_back(row_iteration_matrix(H.row(i), mu));
    // product order M_m M_{m-1} ... M_1
    DenseMatrix M = out.per_row_matrices[0];
    for (std::size_t i = 1; i < m; ++i) M = mat_mul(out.per_row_matrices[i], M);
    out.cycle = std::move(M);
    out.spectral_norm = largest_singular_value(out.cycle);
    out.stable = out.spectral_norm < 1.0;
    return out;
}

std::vector<ErrorDecomposition> replay_error_recursion(const ProblemInstance& problem,
                                                       const SolverConfig& config) {
    if (!problem.x_true || !problem.noise)
        throw ConfigError("replay_error_recursion requires x_true and noise");
    SolverConfig cfg = config;
    cfg.record_trace = true;
    cfg.record_estimates = true;
    cfg.trace_stride = 1;
    const SolverRun run = als_solve(problem, cfg);

    const std::size_t m = problem.m(), p = problem.p();
    const Vector& x_true = *problem.x_true;
    const Vector& noise = *problem.noise;
    const double two_mu = 2.0 * cfg.mu;

    Vector e_init(p);
    for (std::size_t j = 0; j < p; ++j) e_init[j] = -x_true[j];
    Vector e_noise(p, 0.0);

    std::vector<ErrorDecomposition> out;
    out.reserve(run.trace.size());
    for (const TracePoint& pt : run.trace) {
        const std::uint64_t i = cyclic_index(pt.k, m);
        auto h = problem.H.row(i - 1);
        // M e = e - 2 mu h (h^T e), applied vector-only
        const double si = two_mu * dot(h, e_init);
        for (std::size_t j = 0; j < p; ++j) e_init[j] -= h[j] * si;
        const double sn = two_mu * dot(h, e_noise);
        for (std::size_t j = 0; j < p; ++j) e_noise[j] -= h[j] * sn;
        const double dn = two_mu * noise[i - 1];
        for (std::size_t j = 0; j < p; ++j) e_noise[j] += h[j] * dn;

        ErrorDecomposition dec;
        dec.k = pt.k;
        dec.e_init = e_init;
        dec.e_noise = e_noise;
        dec.e_total.resize(p);
        for (std::size_t j = 0; j < p; ++j) {
            dec.e_total[j] = pt.estimate[j] - x_true[j];
            if (std::abs(e_init[j] + e_noise[j] - dec.e_total[j]) > 1e-10)
                throw RecursionMismatchError(
                    "decomposition disagrees with solver trace at iteration " +
                    std::to_string(pt.k));
        }
        out.push_back(std::move(dec));
    }
    return out;
}

std::size_t detect_periodic_onset(const std::vector<double>& error_norm_trace,
                                  std::size_t m, double rel_tol) {
    if (m < 1) throw ConfigError("detect_periodic_onset: m must be positive");
    const std::size_t n = error_norm_trace.size();
    if (n < 3 * m) throw TraceError("detect_periodic_onset: trace shorter than 3m");
    const std::size_t cycles = n / m;
    for (std::size_t c = 0; c + 1 < cycles; ++c) {
        double diff = 0.0, scale = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double a = error_norm_trace[c * m + j];
            const double b = error_norm_trace[(c + 1) * m + j];
            diff = std::max(diff, std::abs(a - b));
            scale = std::max({scale, std::abs(a), std::abs(b)});
        }
        if (diff <= rel_tol * std::max(scale, 1e-300)) return c * m;
    }
    return n;
}

Vector averaged_error(const std::vector<Vector>& trace_window, const Vector& x_true) {
    if (trace_window.empty()) throw DimensionError("averaged_error: empty window");
    const std::size_t p = x_true.size();
    Vector sum(p, 0.0);
    for (const Vector& x : trace_window) {
        if (x.size() != p) throw DimensionError("averaged_error: dimension mismatch");
        for (std::size_t j = 0; j < p; ++j) sum[j] += x[j] - x_true[j];
    }
    const double inv = 1.0 / static_cast<double>(trace_window.size());
    for (std::size_t j = 0; j < p; ++j) sum[j] *= inv;
    return sum;
}

std::string cycle_analysis_csv_row(const CycleAnalysis& analysis, std::size_t m,
                                   std::size_t p, double mu) {
    return std::to_string(m) + "," + std::to_string(p) + "," + io::format_double(mu) +
           "," + io::format_double(analysis.spectral_norm) + "," +
           (analysis.stable ? "1" : "0");
}

}  // namespace als
