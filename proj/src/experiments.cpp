#include "als/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "als/io.hpp"

namespace als {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Vector gaussian_vector(Rng& rng, std::size_t n, double sigma) {
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = sigma * rng.gaussian();
    return v;
}

Vector uniform_vector(Rng& rng, std::size_t n) {
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = rng.uniform();
    return v;
}

Vector assemble_y(const DenseMatrix& H, const Vector& x, const Vector& n) {
    Vector y = mat_vec(H, x);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += n[i];
    return y;
}

}  // namespace

double Rng::uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0,1], keeps log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

Rng Rng::substream(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x51ed2701ULL)));
}

RandomSweepSpec RandomSweepSpec::desk_scale() {
    RandomSweepSpec spec;
    spec.dims = {{100, 1}, {100, 10}};
    spec.matrices_per_sigma = 10;
    spec.vectors_per_matrix = 10;
    return spec;
}

RandomSweepSpec RandomSweepSpec::full_scale() {
    RandomSweepSpec spec;
    spec.dims = {{100, 1},  {100, 2},  {100, 3},  {100, 5},  {100, 10},
                 {1000, 1}, {1000, 2}, {1000, 3}, {1000, 5}, {1000, 10}};
    spec.matrices_per_sigma = 100;
    spec.vectors_per_matrix = 100;
    return spec;
}

ProblemInstance gen_sine_problem(const SineScenarioSpec& spec) {
    if (spec.m < spec.p || spec.p < 1) throw ConfigError("sine scenario requires m >= p >= 1");
    if (!(spec.sample_interval > 0.0)) throw ConfigError("sample interval must be positive");
    Rng rng(spec.seed);

    std::vector<double> freqs = spec.frequencies;
    const bool freqs_given = !freqs.empty();
    if (freqs_given && freqs.size() != spec.p)
        throw ConfigError("need exactly p frequencies");
    const double nyquist = 1.0 / (2.0 * spec.sample_interval);
    const double min_sep =
        1.0 / (4.0 * static_cast<double>(spec.m) * spec.sample_interval);
    if (!freqs_given) {
        // rejection sampling until all pairs are separated by min_sep
        for (int attempt = 0; attempt < 1000; ++attempt) {
            freqs.clear();
            for (std::size_t k = 0; k < spec.p; ++k)
                freqs.push_back(rng.uniform() * nyquist);
            std::vector<double> sorted = freqs;
            std::sort(sorted.begin(), sorted.end());
            bool ok = sorted.front() > min_sep;
            for (std::size_t k = 0; ok && k + 1 < sorted.size(); ++k)
                ok = sorted[k + 1] - sorted[k] >= min_sep;
            if (ok) break;
            freqs.clear();
        }
        if (freqs.empty())
            throw GenerationError("could not draw separated frequencies");
    }

    DenseMatrix H(spec.m, spec.p);
    for (std::size_t n = 1; n <= spec.m; ++n)
        for (std::size_t k = 0; k < spec.p; ++k)
            H(n - 1, k) = std::cos(2.0 * std::numbers::pi * static_cast<double>(n) *
                                   spec.sample_interval * freqs[k]);
    if (!has_full_column_rank(H))
        throw GenerationError("sine scenario produced a rank-deficient H "
                              "(duplicate or degenerate frequencies)");

    Vector x = spec.x_true ? *spec.x_true : uniform_vector(rng, spec.p);
    if (x.size() != spec.p) throw DimensionError("x_true length must equal p");
    Vector n = spec.sigma > 0.0 ? gaussian_vector(rng, spec.m, spec.sigma)
                                : Vector(spec.m, 0.0);
    Vector y = assemble_y(H, x, n);
    return ProblemInstance(std::move(H), std::move(y), std::move(x), std::move(n));
}

ProblemInstance gen_random_problem(std::size_t m, std::size_t p, double sigma, Rng& rng) {
    if (m < p || p < 1) throw ConfigError("gen_random_problem requires m >= p >= 1");
    DenseMatrix H;
    bool ok = false;
    for (int attempt = 0; attempt < 20 && !ok; ++attempt) {
        H = DenseMatrix(m, p);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < p; ++j) H(i, j) = rng.uniform();
        ok = has_full_column_rank(H);
    }
    if (!ok) throw GenerationError("random matrix stayed rank deficient after retries");
    Vector x = uniform_vector(rng, p);
    Vector n = sigma > 0.0 ? gaussian_vector(rng, m, sigma) : Vector(m, 0.0);
    Vector y = assemble_y(H, x, n);
    return ProblemInstance(std::move(H), std::move(y), std::move(x), std::move(n));
}

SweepReport run_degradation_sweep(const RandomSweepSpec& spec, const AlsPolicy& policy) {
    SweepReport report;
    std::uint64_t trial = 0;
    for (auto [m, p] : spec.dims) {
        double r_max = 0.0;
        for (double sigma : spec.sigmas) {
            double sum_als = 0.0, sum_ls = 0.0;
            std::uint64_t count = 0;
            for (std::size_t mi = 0; mi < spec.matrices_per_sigma; ++mi) {
                Rng rng = Rng::substream(spec.seed, trial++);
                // Vectors share H: draw H once, then fresh (x, n) per vector.
                DenseMatrix H;
                {
                    ProblemInstance probe = gen_random_problem(m, p, sigma, rng);
                    H = probe.H;
                }
                const double mu =
                    policy.mu > 0.0 ? policy.mu : max_step_size_als(H) / policy.mu_divisor;
                SolverConfig cfg;
                cfg.mu = mu;
                cfg.iterations =
                    policy.iterations ? policy.iterations : default_als_iterations(H, mu);
                for (std::size_t vi = 0; vi < spec.vectors_per_matrix; ++vi) {
                    Vector x = Vector(p);
                    for (auto& v : x) v = rng.uniform();
                    Vector n = sigma > 0.0 ? gaussian_vector(rng, m, sigma)
                                           : Vector(m, 0.0);
                    ProblemInstance problem(H, assemble_y(H, x, n), x, n);
                    Vector ls = batch_ls_solve(problem);
                    try {
                        SolverRun run = als_solve(problem, cfg);
                        Vector e_als(p), e_ls(p);
                        for (std::size_t j = 0; j < p; ++j) {
                            e_als[j] = run.estimate[j] - x[j];
                            e_ls[j] = ls[j] - x[j];
                        }
                        sum_als += two_norm(e_als);
                        sum_ls += two_norm(e_ls);
                        ++count;
                    } catch (const DivergenceError&) {
                        ++report.divergences;
                    }
                }
            }
            SweepRow row;
            row.m = m;
            row.p = p;
            row.sigma = sigma;
            row.mean_err_als = count ? sum_als / static_cast<double>(count) : 0.0;
            row.mean_err_ls = count ? sum_ls / static_cast<double>(count) : 0.0;
            row.ratio = row.mean_err_ls > 0.0 ? row.mean_err_als / row.mean_err_ls : 1.0;
            r_max = std::max(r_max, row.ratio - 1.0);
            report.rows.push_back(row);
        }
        report.summary.push_back({m, p, r_max});
    }
    return report;
}

std::map<Method, SolverRun> run_trace_experiment(
    const ProblemInstance& problem, const std::set<Method>& methods,
    const std::map<Method, SolverConfig>& configs, double sls_initial_scale) {
    std::map<Method, SolverRun> out;
    for (Method method : methods) {
        SolverConfig cfg;
        if (auto it = configs.find(method); it != configs.end()) cfg = it->second;
        cfg.record_trace = true;
        switch (method) {
            case Method::ALS:
                out.emplace(method, als_solve(problem, cfg));
                break;
            case Method::ILS:
                if (!(cfg.mu > 0.0)) cfg.mu = max_step_size_ils(problem.H) / 2.05;
                out.emplace(method, ils_solve(problem, cfg));
                break;
            case Method::SLS:
                out.emplace(method, sls_solve(problem, sls_initial_scale, nullptr, true));
                break;
            case Method::BATCH: {
                SolverRun run;
                run.method = Method::BATCH;
                run.estimate = batch_ls_solve(problem);
                run.iterations = 1;
                out.emplace(method, std::move(run));
                break;
            }
        }
    }
    return out;
}

std::string SweepReport::detail_csv() const {
    std::string out = "dim_m,dim_p,sigma,mean_err_als,mean_err_ls,ratio\n";
    for (const SweepRow& r : rows)
        out += std::to_string(r.m) + "," + std::to_string(r.p) + "," +
               io::format_double(r.sigma) + "," + io::format_double(r.mean_err_als) +
               "," + io::format_double(r.mean_err_ls) + "," +
               io::format_double(r.ratio) + "\n";
    return out;
}

std::string SweepReport::summary_csv() const {
    std::string out = "dim_m,dim_p,r_max\n";
    for (const SweepSummaryRow& r : summary)
        out += std::to_string(r.m) + "," + std::to_string(r.p) + "," +
               io::format_double(r.r_max) + "\n";
    return out;
}

}  // namespace als
