#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "als/analysis.hpp"
#include "als/experiments.hpp"
#include "als/linalg.hpp"
#include "als/solvers.hpp"

namespace py = pybind11;
using namespace als;

namespace {

DenseMatrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows[0].empty())
        throw DimensionError("matrix needs at least one row and column");
    DenseMatrix A(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size())
            throw DimensionError("ragged rows");
        for (std::size_t j = 0; j < rows[i].size(); ++j) A(i, j) = rows[i][j];
    }
    return A;
}

std::vector<std::vector<double>> matrix_to_rows(const DenseMatrix& A) {
    std::vector<std::vector<double>> rows(A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i) rows[i] = A.row_vector(i);
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Approximate least squares solvers and convergence analysis";

    py::register_exception<Error>(m, "AlsError");

    py::class_<DenseMatrix>(m, "DenseMatrix")
        .def(py::init(&matrix_from_rows), py::arg("rows"))
        .def_property_readonly("rows", &DenseMatrix::rows)
        .def_property_readonly("cols", &DenseMatrix::cols)
        .def("to_list", &matrix_to_rows)
        .def("__getitem__",
             [](const DenseMatrix& A, std::pair<std::size_t, std::size_t> ij) {
                 if (ij.first >= A.rows() || ij.second >= A.cols())
                     throw py::index_error();
                 return A(ij.first, ij.second);
             });

    py::class_<ProblemInstance>(m, "ProblemInstance")
        .def(py::init<DenseMatrix, Vector, std::optional<Vector>, std::optional<Vector>>(),
             py::arg("H"), py::arg("y"), py::arg("x_true") = std::nullopt,
             py::arg("noise") = std::nullopt)
        .def_readonly("H", &ProblemInstance::H)
        .def_readonly("y", &ProblemInstance::y)
        .def_readonly("x_true", &ProblemInstance::x_true)
        .def_readonly("noise", &ProblemInstance::noise)
        .def_property_readonly("m", &ProblemInstance::m)
        .def_property_readonly("p", &ProblemInstance::p);

    py::enum_<Method>(m, "Method")
        .value("ALS", Method::ALS)
        .value("ILS", Method::ILS)
        .value("SLS", Method::SLS)
        .value("BATCH", Method::BATCH);

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("mu", &SolverConfig::mu)
        .def_readwrite("iterations", &SolverConfig::iterations)
        .def_readwrite("average_window", &SolverConfig::average_window)
        .def_readwrite("record_trace", &SolverConfig::record_trace)
        .def_readwrite("trace_stride", &SolverConfig::trace_stride)
        .def_readwrite("record_estimates", &SolverConfig::record_estimates);

    py::class_<TracePoint>(m, "TracePoint")
        .def_readonly("k", &TracePoint::k)
        .def_readonly("error_norm", &TracePoint::error_norm)
        .def_readonly("residual", &TracePoint::residual)
        .def_readonly("multiplications", &TracePoint::multiplications)
        .def_readonly("estimate", &TracePoint::estimate);

    py::class_<SolverRun>(m, "SolverRun")
        .def_readonly("method", &SolverRun::method)
        .def_readonly("estimate", &SolverRun::estimate)
        .def_readonly("multiplications", &SolverRun::multiplications)
        .def_readonly("iterations", &SolverRun::iterations)
        .def_readonly("mu", &SolverRun::mu)
        .def_readonly("average_window", &SolverRun::average_window)
        .def_readonly("trace", &SolverRun::trace);

    py::class_<CycleAnalysis>(m, "CycleAnalysis")
        .def_readonly("spectral_norm", &CycleAnalysis::spectral_norm)
        .def_readonly("stable", &CycleAnalysis::stable)
        .def_property_readonly("cycle",
                               [](const CycleAnalysis& a) { return matrix_to_rows(a.cycle); });

    m.def("dot", [](const Vector& u, const Vector& v) { return dot(u, v); });
    m.def("two_norm", [](const Vector& v) { return two_norm(v); });
    m.def("mat_vec", [](const DenseMatrix& A, const Vector& v) { return mat_vec(A, v); });
    m.def("largest_singular_value", &largest_singular_value, py::arg("A"),
          py::arg("tol") = 1e-10, py::arg("max_iter") = 10000);
    m.def("batch_ls_solve", &batch_ls_solve);
    m.def("residual_cost",
          [](const ProblemInstance& prob, const Vector& x) { return residual_cost(prob, x); });

    m.def("cyclic_index", &cyclic_index);
    m.def("als_solve", &als_solve);
    m.def("ils_solve", &ils_solve);
    m.def("sls_solve",
          [](const ProblemInstance& prob, double initial_scale) {
              return sls_solve(prob, initial_scale);
          },
          py::arg("problem"), py::arg("initial_scale") = 1e9);
    m.def("max_step_size_als", &max_step_size_als);
    m.def("max_step_size_ils", &max_step_size_ils);
    m.def("multiplication_count", &multiplication_count);
    m.def("default_als_iterations", &default_als_iterations);

    m.def("cycle_matrix", &cycle_matrix);
    m.def("detect_periodic_onset", &detect_periodic_onset, py::arg("error_norm_trace"),
          py::arg("m"), py::arg("rel_tol") = 1e-3);

    py::class_<SineScenarioSpec>(m, "SineScenarioSpec")
        .def(py::init<>())
        .def_readwrite("m", &SineScenarioSpec::m)
        .def_readwrite("p", &SineScenarioSpec::p)
        .def_readwrite("sample_interval", &SineScenarioSpec::sample_interval)
        .def_readwrite("frequencies", &SineScenarioSpec::frequencies)
        .def_readwrite("sigma", &SineScenarioSpec::sigma)
        .def_readwrite("seed", &SineScenarioSpec::seed)
        .def_readwrite("x_true", &SineScenarioSpec::x_true);

    m.def("gen_sine_problem", &gen_sine_problem);
    m.def("gen_random_problem",
          [](std::size_t m, std::size_t p, double sigma, std::uint64_t seed) {
              Rng rng(seed);
              return gen_random_problem(m, p, sigma, rng);
          },
          py::arg("m"), py::arg("p"), py::arg("sigma"), py::arg("seed"));
}
