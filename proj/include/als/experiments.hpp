#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "als/linalg.hpp"
#include "als/solvers.hpp"

namespace als {

/// Seeded generator with a fully specified mapping from engine words to
/// samples, so the same seed reproduces the same streams everywhere:
/// uniform() is (mt19937_64() >> 11) * 2^-53 in [0,1); gaussian() is the
/// Box-Muller transform z = sqrt(-2 ln u1) cos(2 pi u2) with u1 = 1 -
/// uniform(), pairs consumed in order and the sine partner cached.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform();
    double gaussian();

    /// Deterministic child stream for trial `index` (splitmix64 mix), so
    /// trial results do not depend on evaluation order.
    static Rng substream(std::uint64_t seed, std::uint64_t index);

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

struct SineScenarioSpec {
    std::size_t m = 100;
    std::size_t p = 8;
    double sample_interval = 1.0;      // T_s
    std::vector<double> frequencies;   // empty = draw from seed
    double sigma = 1e-2;
    std::uint64_t seed = 2;
    std::optional<Vector> x_true;      // default: uniform[0,1] entries
};

struct RandomSweepSpec {
    std::vector<std::pair<std::size_t, std::size_t>> dims;  // (m, p)
    std::vector<double> sigmas = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0};
    std::size_t matrices_per_sigma = 10;
    std::size_t vectors_per_matrix = 10;
    std::uint64_t seed = 1;

    static RandomSweepSpec desk_scale();
    static RandomSweepSpec full_scale();  // Table-1 dimensions, 100 x 100 trials
};

struct AlsPolicy {
    double mu = 0.0;               // 0 = bound / mu_divisor
    double mu_divisor = 2.05;
    std::uint64_t iterations = 0;  // 0 = auto (||M||-based default)
};

struct SweepRow {
    std::size_t m = 0, p = 0;
    double sigma = 0.0;
    double mean_err_als = 0.0;
    double mean_err_ls = 0.0;
    double ratio = 0.0;  // mean_err_als / mean_err_ls
};

struct SweepSummaryRow {
    std::size_t m = 0, p = 0;
    double r_max = 0.0;  // max over sigma of (ratio - 1)
};

struct SweepReport {
    std::vector<SweepRow> rows;
    std::vector<SweepSummaryRow> summary;
    std::uint64_t divergences = 0;

    std::string detail_csv() const;
    std::string summary_csv() const;
};

/// Amplitude-of-sinusoids scenario: H(n,k) = cos(2 pi n T_s f_k) for row
/// n = 1..m, Gaussian noise, y = H x_true + n.
ProblemInstance gen_sine_problem(const SineScenarioSpec& spec);

/// Uniform[0,1] H and x_true, Gaussian(0, sigma^2) noise; H regenerated on
/// rank deficiency (bounded retries).
ProblemInstance gen_random_problem(std::size_t m, std::size_t p, double sigma, Rng& rng);

SweepReport run_degradation_sweep(const RandomSweepSpec& spec,
                                  const AlsPolicy& policy = {});

/// Runs each requested solver with trace recording against one instance.
std::map<Method, SolverRun> run_trace_experiment(
    const ProblemInstance& problem, const std::set<Method>& methods,
    const std::map<Method, SolverConfig>& configs, double sls_initial_scale = 1e9);

}  // namespace als
