#include <doctest.h>

#include <cmath>

#include "als/experiments.hpp"

using namespace als;

TEST_CASE("identical seeds reproduce identical instances") {
    SineScenarioSpec spec;
    spec.m = 40;
    spec.p = 4;
    spec.seed = 7;
    ProblemInstance a = gen_sine_problem(spec);
    ProblemInstance b = gen_sine_problem(spec);
    CHECK(a.H.data() == b.H.data());
    CHECK(a.y == b.y);
    CHECK(*a.x_true == *b.x_true);

    Rng r1(99), r2(99);
    ProblemInstance c = gen_random_problem(15, 3, 1e-2, r1);
    ProblemInstance d = gen_random_problem(15, 3, 1e-2, r2);
    CHECK(c.H.data() == d.H.data());
    CHECK(c.y == d.y);
}

TEST_CASE("sine scenario assembles y = H x + n exactly") {
    SineScenarioSpec spec;
    spec.m = 30;
    spec.p = 3;
    spec.sigma = 0.0;
    spec.seed = 3;
    ProblemInstance prob = gen_sine_problem(spec);
    Vector hx = mat_vec(prob.H, *prob.x_true);
    for (std::size_t i = 0; i < hx.size(); ++i) CHECK(prob.y[i] == hx[i]);
}

TEST_CASE("noise-free harmonic frequencies are recovered by batch LS") {
    SineScenarioSpec spec;
    spec.m = 64;
    spec.p = 4;
    spec.sigma = 0.0;
    spec.seed = 11;
    const double f0 = 1.0 / static_cast<double>(spec.m);
    spec.frequencies = {f0, 2 * f0, 3 * f0, 4 * f0};
    ProblemInstance prob = gen_sine_problem(spec);
    Vector x = batch_ls_solve(prob);
    for (std::size_t j = 0; j < 4; ++j)
        CHECK(x[j] == doctest::Approx((*prob.x_true)[j]).epsilon(1e-8));
}

TEST_CASE("default sine scenario matches the standard setting") {
    SineScenarioSpec spec;
    ProblemInstance prob = gen_sine_problem(spec);
    CHECK(prob.m() == 100);
    CHECK(prob.p() == 8);
    CHECK(has_full_column_rank(prob.H));
    // entries are cosines
    for (std::size_t i = 0; i < prob.m(); ++i)
        for (std::size_t j = 0; j < prob.p(); ++j)
            CHECK(std::abs(prob.H(i, j)) <= 1.0);
}

TEST_CASE("explicit duplicate frequencies are rejected") {
    SineScenarioSpec spec;
    spec.m = 20;
    spec.p = 2;
    spec.frequencies = {0.1, 0.1};
    CHECK_THROWS_AS(gen_sine_problem(spec), GenerationError);
}

TEST_CASE("p = 1 random instance matches the scalar projection formula") {
    Rng rng(17);
    ProblemInstance prob = gen_random_problem(100, 1, 1e-2, rng);
    Vector x = batch_ls_solve(prob);
    Vector h(prob.m());
    for (std::size_t i = 0; i < prob.m(); ++i) h[i] = prob.H(i, 0);
    CHECK(x[0] == doctest::Approx(dot(h, prob.y) / dot(h, h)).epsilon(1e-12));
}

TEST_CASE("LS error shrinks with the noise level at matched seeds") {
    auto mean_ls_error = [](double sigma) {
        double sum = 0.0;
        for (std::uint64_t t = 0; t < 10; ++t) {
            Rng rng = Rng::substream(5, t);
            ProblemInstance prob = gen_random_problem(40, 3, sigma, rng);
            Vector x = batch_ls_solve(prob);
            Vector e(3);
            for (std::size_t j = 0; j < 3; ++j) e[j] = x[j] - (*prob.x_true)[j];
            sum += two_norm(e);
        }
        return sum / 10.0;
    };
    const double lo = mean_ls_error(1e-5);
    const double hi = mean_ls_error(1.0);
    CHECK(lo < hi);
    CHECK(lo < 1e-3 * hi);
}

TEST_CASE("small degradation sweep is deterministic and divergence free") {
    RandomSweepSpec spec;
    spec.dims = {{20, 2}};
    spec.sigmas = {1e-3, 1e-1};
    spec.matrices_per_sigma = 3;
    spec.vectors_per_matrix = 3;
    spec.seed = 2;
    SweepReport a = run_degradation_sweep(spec);
    SweepReport b = run_degradation_sweep(spec);
    CHECK(a.divergences == 0);
    CHECK(a.detail_csv() == b.detail_csv());
    CHECK(a.summary_csv() == b.summary_csv());
    REQUIRE(a.summary.size() == 1);
    CHECK(a.summary[0].r_max >= 0.0);
    REQUIRE(a.rows.size() == 2);
    for (const SweepRow& row : a.rows) {
        CHECK(row.mean_err_ls > 0.0);
        CHECK(row.ratio > 0.0);
    }
}

TEST_CASE("trace experiment emits the expected runs") {
    SineScenarioSpec spec;
    spec.m = 30;
    spec.p = 3;
    spec.seed = 4;
    ProblemInstance prob = gen_sine_problem(spec);

    SolverConfig als_cfg;
    als_cfg.mu = max_step_size_als(prob.H) / 2.05;
    als_cfg.iterations = 20 * 30;
    SolverConfig ils_cfg;
    ils_cfg.mu = max_step_size_ils(prob.H) / 2.05;
    ils_cfg.iterations = 50;

    auto runs = run_trace_experiment(prob, {Method::ALS, Method::ILS, Method::SLS},
                                     {{Method::ALS, als_cfg}, {Method::ILS, ils_cfg}});
    REQUIRE(runs.count(Method::ALS) == 1);
    REQUIRE(runs.count(Method::ILS) == 1);
    REQUIRE(runs.count(Method::SLS) == 1);

    // SLS: exactly m points, endpoint near the batch solution
    const SolverRun& sls = runs.at(Method::SLS);
    CHECK(sls.trace.size() == 30);
    Vector ls = batch_ls_solve(prob);
    Vector e(3);
    for (std::size_t j = 0; j < 3; ++j) e[j] = sls.estimate[j] - ls[j];
    CHECK(two_norm(e) <= 1e-5 * (1.0 + two_norm(ls)));

    // traces strictly increasing in k
    for (const auto& [method, run] : runs)
        for (std::size_t i = 1; i < run.trace.size(); ++i)
            CHECK(run.trace[i].k > run.trace[i - 1].k);

    // noise-free traces decay at cycle-aligned samples
    spec.sigma = 0.0;
    ProblemInstance clean = gen_sine_problem(spec);
    SolverConfig cfg;
    cfg.mu = max_step_size_als(clean.H) / 2.05;
    cfg.iterations = 10 * 30;
    cfg.record_trace = true;
    SolverRun run = als_solve(clean, cfg);
    for (std::size_t c = 2 * 30; c <= run.trace.size(); c += 30)
        CHECK(run.trace[c - 1].error_norm <= run.trace[c - 31].error_norm * (1.0 + 1e-12));
}
