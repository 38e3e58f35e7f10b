#include "als/solvers.hpp"

#include <cmath>
#include <limits>

#include "als/analysis.hpp"
#include "als/io.hpp"

namespace als {

namespace {

bool all_finite(const Vector& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

double error_norm_or_nan(const ProblemInstance& problem, const Vector& x) {
    if (!problem.x_true) return std::numeric_limits<double>::quiet_NaN();
    Vector e(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) e[j] = x[j] - (*problem.x_true)[j];
    return two_norm(e);
}

void record_point(std::vector<TracePoint>& trace, const ProblemInstance& problem,
                  const Vector& x, std::uint64_t k, std::uint64_t mults,
                  bool keep_estimate) {
    TracePoint pt;
    pt.k = k;
    pt.error_norm = error_norm_or_nan(problem, x);
    pt.residual = residual_cost(problem, x);
    pt.multiplications = mults;
    if (keep_estimate) pt.estimate = x;
    trace.push_back(std::move(pt));
}

void validate_mu(double mu) {
    if (!(mu > 0.0)) throw ConfigError("step size mu must be positive");
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::ALS: return "als";
        case Method::ILS: return "ils";
        case Method::SLS: return "sls";
        case Method::BATCH: return "batch";
    }
    return "unknown";
}

std::optional<Method> method_from_name(const std::string& name) {
    if (name == "als") return Method::ALS;
    if (name == "ils") return Method::ILS;
    if (name == "sls") return Method::SLS;
    if (name == "batch") return Method::BATCH;
    return std::nullopt;
}

Vector als_step(const Vector& x_prev, std::span<const double> h_row, double y_i,
                double mu) {
    if (x_prev.size() != h_row.size())
        throw DimensionError("als_step: dimension mismatch");
    const double two_mu = 2.0 * mu;
    const double r = y_i - dot(h_row, x_prev);
    const double s = two_mu * r;
    Vector x = x_prev;
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += h_row[j] * s;
    return x;
}

double max_step_size_als(const DenseMatrix& H) {
    if (H.rows() == 0 || H.cols() == 0)
        throw DimensionError("max_step_size_als: empty matrix");
    double max_sq = 0.0;
    for (std::size_t i = 0; i < H.rows(); ++i) {
        const double sq = dot(H.row(i), H.row(i));
        if (sq == 0.0)
            throw DegenerateRowError("row " + std::to_string(i + 1) + " of H is zero");
        if (sq > max_sq) max_sq = sq;
    }
    return 1.0 / (2.0 * max_sq);
}

double max_step_size_ils(const DenseMatrix& H) {
    const double s1 = largest_singular_value(H);
    if (s1 == 0.0) throw DegenerateRowError("H is the zero matrix");
    return 1.0 / (2.0 * s1 * s1);
}

std::uint64_t default_als_iterations(const DenseMatrix& H, double mu) {
    const std::uint64_t m = H.rows();
    const double norm = cycle_matrix(H, mu).spectral_norm;
    if (norm >= 1.0 - 1e-12) return 200 * m;
    std::uint64_t cycles = 1;
    if (norm > 0.0)
        cycles = static_cast<std::uint64_t>(std::ceil(std::log(1e-8) / std::log(norm)));
    // one guard cycle so the averaging window starts after the decay target
    cycles += 1;
    if (cycles < 2) cycles = 2;
    if (cycles > 5000) cycles = 5000;
    return cycles * m;
}

SolverRun als_solve(const ProblemInstance& problem, const SolverConfig& config) {
    validate_mu(config.mu);
    const std::size_t m = problem.m(), p = problem.p();
    const std::uint64_t N =
        config.iterations ? config.iterations : default_als_iterations(problem.H, config.mu);
    const std::uint64_t window = config.average_window ? config.average_window : m;
    if (window < 1 || N < window)
        throw ConfigError("ALS requires iterations >= average_window >= 1");
    const std::uint64_t stride = config.trace_stride ? config.trace_stride : 1;

    const double two_mu = 2.0 * config.mu;  // precomputed once, not counted
    Vector x(p, 0.0);
    Vector sum(p, 0.0);
    std::uint64_t mults = 0;

    SolverRun run;
    run.method = Method::ALS;
    run.mu = config.mu;
    run.iterations = N;
    run.average_window = window;

    for (std::uint64_t k = 1; k <= N; ++k) {
        const std::uint64_t i = cyclic_index(k, m);
        auto h = problem.H.row(i - 1);
        double acc = 0.0;
        for (std::size_t j = 0; j < p; ++j) acc += h[j] * x[j];
        mults += p;
        const double s = two_mu * (problem.y[i - 1] - acc);
        mults += 1;
        for (std::size_t j = 0; j < p; ++j) x[j] += h[j] * s;
        mults += p;
        if (!std::isfinite(s) || !all_finite(x)) throw DivergenceError(k);
        if (k > N - window)
            for (std::size_t j = 0; j < p; ++j) sum[j] += x[j];
        if (config.record_trace && (k % stride == 0 || k == N))
            record_point(run.trace, problem, x, k, mults, config.record_estimates);
    }

    const double inv = 1.0 / static_cast<double>(window);
    run.estimate.resize(p);
    for (std::size_t j = 0; j < p; ++j) run.estimate[j] = sum[j] * inv;
    mults += p;
    run.multiplications = mults;
    return run;
}

SolverRun ils_solve(const ProblemInstance& problem, const SolverConfig& config) {
    validate_mu(config.mu);
    const std::size_t m = problem.m(), p = problem.p();
    std::uint64_t N = config.iterations;
    if (N == 0) {
        // auto: same number of data passes as the ALS default policy
        N = default_als_iterations(problem.H, max_step_size_als(problem.H) / 2.05) / m;
        if (N == 0) N = 1;
    }
    const std::uint64_t stride = config.trace_stride ? config.trace_stride : 1;

    const double two_mu = 2.0 * config.mu;
    Vector x(p, 0.0);
    Vector g(p);
    std::uint64_t mults = 0;

    SolverRun run;
    run.method = Method::ILS;
    run.mu = config.mu;
    run.iterations = N;

    for (std::uint64_t k = 1; k <= N; ++k) {
        std::fill(g.begin(), g.end(), 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            auto h = problem.H.row(i);
            double acc = 0.0;
            for (std::size_t j = 0; j < p; ++j) acc += h[j] * x[j];
            const double r = problem.y[i] - acc;
            for (std::size_t j = 0; j < p; ++j) g[j] += h[j] * r;
        }
        mults += 2 * p * m;
        for (std::size_t j = 0; j < p; ++j) x[j] += two_mu * g[j];
        mults += p;
        if (!all_finite(x)) throw DivergenceError(k);
        if (config.record_trace && (k % stride == 0 || k == N))
            record_point(run.trace, problem, x, k, mults, config.record_estimates);
    }

    run.estimate = x;
    run.multiplications = mults;
    return run;
}

SolverRun sls_solve(const ProblemInstance& problem, double initial_scale,
                    SlsState* final_state, bool record_trace) {
    if (!(initial_scale > 0.0)) throw ConfigError("initial_scale must be positive");
    const std::size_t m = problem.m(), p = problem.p();
    DenseMatrix P(p, p);
    for (std::size_t j = 0; j < p; ++j) P(j, j) = initial_scale;
    Vector x(p, 0.0);
    Vector K(p, 0.0);
    Vector Ph(p);
    std::uint64_t mults = 0;

    SolverRun run;
    run.method = Method::SLS;
    run.iterations = m;

    for (std::size_t k = 0; k < m; ++k) {
        auto h = problem.H.row(k);
        for (std::size_t a = 0; a < p; ++a) {
            double acc = 0.0;
            for (std::size_t b = 0; b < p; ++b) acc += P(a, b) * h[b];
            Ph[a] = acc;
        }
        mults += p * p;
        double hPh = 0.0;
        for (std::size_t a = 0; a < p; ++a) hPh += h[a] * Ph[a];
        mults += p;
        const double inv_denom = 1.0 / (1.0 + hPh);
        for (std::size_t a = 0; a < p; ++a) K[a] = Ph[a] * inv_denom;
        mults += p;
        double pred = 0.0;
        for (std::size_t a = 0; a < p; ++a) pred += h[a] * x[a];
        mults += p;
        const double r = problem.y[k] - pred;
        for (std::size_t a = 0; a < p; ++a) x[a] += K[a] * r;
        mults += p;
        // P <- P - K (P h)^T, then re-symmetrize
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = 0; b < p; ++b) P(a, b) -= K[a] * Ph[b];
        mults += p * p;
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = a + 1; b < p; ++b) {
                const double s = 0.5 * (P(a, b) + P(b, a));
                P(a, b) = s;
                P(b, a) = s;
            }
        mults += (p * p - p) / 2;
        if (record_trace)
            record_point(run.trace, problem, x, k + 1, mults, false);
    }

    run.estimate = x;
    run.multiplications = mults;
    if (final_state) *final_state = SlsState{x, K, P};
    return run;
}

std::optional<std::uint64_t> multiplication_count(Method method, std::uint64_t m,
                                                  std::uint64_t p, std::uint64_t N) {
    switch (method) {
        case Method::ALS: return (2 * p + 1) * N + p;
        case Method::ILS: return (2 * p * m + p) * N;
        default: return std::nullopt;
    }
}

std::string trace_to_csv(const SolverRun& run, const ProblemInstance& problem) {
    std::string out = "k,error_norm,residual_cost,cumulative_multiplications,is_final_average\n";
    for (const TracePoint& pt : run.trace) {
        out += std::to_string(pt.k) + "," + io::format_double(pt.error_norm) + "," +
               io::format_double(pt.residual) + "," + std::to_string(pt.multiplications) +
               ",0\n";
    }
    if (run.method == Method::ALS) {
        double err = std::numeric_limits<double>::quiet_NaN();
        if (problem.x_true) {
            Vector e(run.estimate.size());
            for (std::size_t j = 0; j < e.size(); ++j)
                e[j] = run.estimate[j] - (*problem.x_true)[j];
            err = two_norm(e);
        }
        out += std::to_string(run.iterations) + "," + io::format_double(err) + "," +
               io::format_double(residual_cost(problem, run.estimate)) + "," +
               std::to_string(run.multiplications) + ",1\n";
    }
    return out;
}

}  // namespace als
