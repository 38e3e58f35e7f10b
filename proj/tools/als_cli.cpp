#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "als/analysis.hpp"
#include "als/experiments.hpp"
#include "als/io.hpp"
#include "als/solvers.hpp"

namespace fs = std::filesystem;
using namespace als;

namespace {

// Exit codes: 0 ok, 2 parse, 3 dimension, 4 rank, 5 divergence,
// 6 divergences recorded during a sweep.
constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitDimension = 3;
constexpr int kExitRank = 4;
constexpr int kExitDivergence = 5;
constexpr int kExitSweepWarning = 6;

struct CommonOpts {
    std::string out_dir = ".";
    std::uint64_t seed = 2;  // matches the default sinusoid scenario
};

fs::path ensure_out_dir(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

void write_metadata(const fs::path& path, const std::vector<std::pair<std::string, std::string>>& kv) {
    std::string out;
    for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    io::write_file_atomic(path, out);
}

double resolve_mu(const std::string& mu_arg, Method method, const DenseMatrix& H) {
    if (mu_arg == "auto") {
        const double bound =
            method == Method::ILS ? max_step_size_ils(H) : max_step_size_als(H);
        return bound / 2.05;
    }
    const double mu = std::stod(mu_arg);
    if (!(mu > 0.0)) throw ConfigError("mu must be positive");
    return mu;
}

int cmd_solve(const std::string& matrix_path, const std::string& rhs_path,
              const std::string& method_name_arg, const std::string& mu_arg,
              std::uint64_t iterations, double initial_scale, const CommonOpts& common) {
    const auto method = method_from_name(method_name_arg);
    if (!method) throw ConfigError("unknown method '" + method_name_arg + "'");
    DenseMatrix H = io::read_matrix(matrix_path);
    Vector y = io::read_vector(rhs_path);
    ProblemInstance problem(std::move(H), std::move(y));

    const auto t0 = std::chrono::steady_clock::now();
    SolverRun run;
    double mu = 0.0;
    switch (*method) {
        case Method::BATCH:
            run.method = Method::BATCH;
            run.estimate = batch_ls_solve(problem);
            break;
        case Method::ALS: {
            SolverConfig cfg;
            cfg.mu = mu = resolve_mu(mu_arg, Method::ALS, problem.H);
            cfg.iterations = iterations;
            run = als_solve(problem, cfg);
            break;
        }
        case Method::ILS: {
            SolverConfig cfg;
            cfg.mu = mu = resolve_mu(mu_arg, Method::ILS, problem.H);
            cfg.iterations = iterations;
            run = ils_solve(problem, cfg);
            break;
        }
        case Method::SLS:
            run = sls_solve(problem, initial_scale);
            break;
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const fs::path out = ensure_out_dir(common.out_dir);
    io::write_vector(out / "estimate.txt", run.estimate);
    write_metadata(out / "metadata.txt",
                   {{"command", "solve"},
                    {"method", method_name(*method)},
                    {"m", std::to_string(problem.m())},
                    {"p", std::to_string(problem.p())},
                    {"mu", io::format_double(mu)},
                    {"iterations", std::to_string(run.iterations)},
                    {"multiplications", std::to_string(run.multiplications)},
                    {"wall_time_s", io::format_double(wall)}});
    std::cout << "estimate written to " << (out / "estimate.txt").string() << "\n";
    return kExitOk;
}

int cmd_analyze(const std::string& matrix_path, double mu, const CommonOpts& common) {
    if (!(mu > 0.0)) throw ConfigError("mu must be positive");
    DenseMatrix H = io::read_matrix(matrix_path);
    const double bound_als = max_step_size_als(H);
    const double bound_ils = max_step_size_ils(H);
    CycleAnalysis analysis = cycle_matrix(H, mu);

    std::cout << "m=" << H.rows() << "\n"
              << "p=" << H.cols() << "\n"
              << "max_step_size_als=" << io::format_double(bound_als) << "\n"
              << "max_step_size_ils=" << io::format_double(bound_ils) << "\n"
              << "mu=" << io::format_double(mu) << "\n"
              << "cycle_norm=" << io::format_double(analysis.spectral_norm) << "\n"
              << "stable=" << (analysis.stable ? "1" : "0") << "\n";

    const fs::path out = ensure_out_dir(common.out_dir);
    io::write_file_atomic(out / "analysis.csv",
                          "m,p,mu,spectral_norm,stable\n" +
                              cycle_analysis_csv_row(analysis, H.rows(), H.cols(), mu) +
                              "\n");
    return kExitOk;
}

int cmd_trace(const std::string& matrix_path, const std::string& rhs_path,
              const std::vector<std::string>& method_names, std::size_t m, std::size_t p,
              double sigma, bool noise_free, const std::string& mu_arg,
              std::uint64_t iterations, std::uint64_t stride, const CommonOpts& common) {
    std::optional<ProblemInstance> problem;
    if (!matrix_path.empty()) {
        DenseMatrix H = io::read_matrix(matrix_path);
        Vector y = io::read_vector(rhs_path);
        problem.emplace(std::move(H), std::move(y));
    } else {
        SineScenarioSpec spec;
        spec.m = m;
        spec.p = p;
        spec.sigma = noise_free ? 0.0 : sigma;
        spec.seed = common.seed;
        problem.emplace(gen_sine_problem(spec));
    }

    std::set<Method> methods;
    std::map<Method, SolverConfig> configs;
    for (const std::string& name : method_names) {
        const auto method = method_from_name(name);
        if (!method || *method == Method::BATCH)
            throw ConfigError("trace methods must be among als, ils, sls");
        methods.insert(*method);
        SolverConfig cfg;
        cfg.trace_stride = stride;
        cfg.iterations = iterations;
        if (*method != Method::SLS) cfg.mu = resolve_mu(mu_arg, *method, problem->H);
        configs[*method] = cfg;
    }

    const auto runs = run_trace_experiment(*problem, methods, configs);
    const fs::path out = ensure_out_dir(common.out_dir);
    std::vector<std::pair<std::string, std::string>> meta{{"command", "trace"},
                                                          {"seed", std::to_string(common.seed)}};
    for (const auto& [method, run] : runs) {
        const std::string name = method_name(method);
        io::write_file_atomic(out / (name + "_trace.csv"), trace_to_csv(run, *problem));
        meta.emplace_back(name + "_mu", io::format_double(run.mu));
        meta.emplace_back(name + "_iterations", std::to_string(run.iterations));
        meta.emplace_back(name + "_multiplications", std::to_string(run.multiplications));
    }
    write_metadata(out / "metadata.txt", meta);
    std::cout << "traces written to " << out.string() << "\n";
    return kExitOk;
}

int cmd_sweep(bool full_scale, const std::vector<std::string>& dims,
              std::size_t matrices, std::size_t vectors, const CommonOpts& common) {
    RandomSweepSpec spec =
        full_scale ? RandomSweepSpec::full_scale() : RandomSweepSpec::desk_scale();
    spec.seed = common.seed;
    if (matrices) spec.matrices_per_sigma = matrices;
    if (vectors) spec.vectors_per_matrix = vectors;
    if (!dims.empty()) {
        spec.dims.clear();
        for (const std::string& d : dims) {
            const auto x = d.find('x');
            if (x == std::string::npos) throw ConfigError("dims must look like 100x3");
            spec.dims.emplace_back(std::stoul(d.substr(0, x)), std::stoul(d.substr(x + 1)));
        }
    }

    const SweepReport report = run_degradation_sweep(spec);
    const fs::path out = ensure_out_dir(common.out_dir);
    io::write_file_atomic(out / "sweep_detail.csv", report.detail_csv());
    io::write_file_atomic(out / "sweep_summary.csv", report.summary_csv());
    write_metadata(out / "metadata.txt",
                   {{"command", "sweep"},
                    {"seed", std::to_string(common.seed)},
                    {"matrices_per_sigma", std::to_string(spec.matrices_per_sigma)},
                    {"vectors_per_matrix", std::to_string(spec.vectors_per_matrix)},
                    {"divergences", std::to_string(report.divergences)}});
    std::cout << "sweep written to " << out.string() << "\n";
    if (report.divergences > 0) {
        std::cerr << "warning: " << report.divergences << " trials diverged\n";
        return kExitSweepWarning;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Approximate least squares toolkit: solve, analyze, trace, sweep"};
    app.require_subcommand(1);
    app.fallthrough(true);
    app.set_config("--config", "", "INI-style manifest; flags override file values");

    CommonOpts common;
    app.add_option("--out", common.out_dir, "Output directory")->capture_default_str();
    app.add_option("--seed", common.seed, "RNG seed")->capture_default_str();

    // solve
    std::string matrix_path, rhs_path, method = "batch", mu_arg = "auto";
    std::uint64_t iterations = 0, stride = 1;
    double initial_scale = 1e9;
    auto* solve = app.add_subcommand("solve", "Estimate x from matrix and rhs files");
    solve->add_option("--matrix", matrix_path, "Observation matrix file")->required();
    solve->add_option("--rhs", rhs_path, "Measurement vector file")->required();
    solve->add_option("--method", method, "batch | als | ils | sls")->capture_default_str();
    solve->add_option("--mu", mu_arg, "Step size or 'auto' (bound / 2.05)")
        ->capture_default_str();
    solve->add_option("--iterations", iterations, "Iteration count, 0 = auto");
    solve->add_option("--initial-scale", initial_scale, "SLS prior scale")
        ->capture_default_str();

    // analyze
    std::string an_matrix;
    double an_mu = 0.0;
    auto* analyze = app.add_subcommand("analyze", "Cycle-matrix stability report");
    analyze->add_option("--matrix", an_matrix, "Observation matrix file")->required();
    analyze->add_option("--mu", an_mu, "Step size to analyze")->required();

    // trace
    std::string tr_matrix, tr_rhs, tr_mu = "auto";
    std::vector<std::string> tr_methods{"als", "ils", "sls"};
    std::size_t tr_m = 100, tr_p = 8;
    double tr_sigma = 1e-2;
    bool noise_free = false;
    std::uint64_t tr_iterations = 0, tr_stride = 1;
    auto* trace = app.add_subcommand("trace", "Per-iteration error traces (default: sinusoid scenario)");
    trace->add_option("--matrix", tr_matrix, "Fixture matrix (else sinusoid scenario)");
    trace->add_option("--rhs", tr_rhs, "Fixture rhs vector");
    trace->add_option("--methods", tr_methods, "Subset of als,ils,sls")->delimiter(',');
    trace->add_option("--m", tr_m, "Scenario rows")->capture_default_str();
    trace->add_option("--p", tr_p, "Scenario amplitudes")->capture_default_str();
    trace->add_option("--sigma", tr_sigma, "Noise standard deviation")->capture_default_str();
    trace->add_flag("--noise-free", noise_free, "Force sigma = 0");
    trace->add_option("--mu", tr_mu, "Step size or 'auto'")->capture_default_str();
    trace->add_option("--iterations", tr_iterations, "Iteration count, 0 = auto");
    trace->add_option("--stride", tr_stride, "Trace stride")->capture_default_str();

    // sweep
    bool full_scale = false, desk_scale = false;
    std::vector<std::string> sw_dims;
    std::size_t sw_matrices = 0, sw_vectors = 0;
    auto* sweep = app.add_subcommand("sweep", "Random-matrix degradation sweep");
    sweep->add_flag("--full-scale", full_scale, "Paper-scale trial counts and dimensions");
    sweep->add_flag("--desk-scale", desk_scale, "Reduced trial counts (default)");
    sweep->add_option("--dims", sw_dims, "Dimension list, e.g. 100x1,100x10")->delimiter(',');
    sweep->add_option("--matrices", sw_matrices, "Matrices per sigma (0 = spec default)");
    sweep->add_option("--vectors", sw_vectors, "Vectors per matrix (0 = spec default)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed())
            return cmd_solve(matrix_path, rhs_path, method, mu_arg, iterations,
                             initial_scale, common);
        if (analyze->parsed()) return cmd_analyze(an_matrix, an_mu, common);
        if (trace->parsed())
            return cmd_trace(tr_matrix, tr_rhs, tr_methods, tr_m, tr_p, tr_sigma,
                             noise_free, tr_mu, tr_iterations, tr_stride, common);
        if (sweep->parsed())
            return cmd_sweep(full_scale, sw_dims, sw_matrices, sw_vectors, common);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ConfigError& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitParse;
    } catch (const DimensionError& e) {
        std::cerr << "dimension error: " << e.what() << "\n";
        return kExitDimension;
    } catch (const RankError& e) {
        std::cerr << "rank error: " << e.what() << "\n";
        return kExitRank;
    } catch (const DegenerateRowError& e) {
        std::cerr << "degenerate row: " << e.what() << "\n";
        return kExitDimension;
    } catch (const DivergenceError& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
    return kExitOk;
}
