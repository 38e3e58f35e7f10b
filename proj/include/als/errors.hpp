#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace als {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input file could not be parsed (bad header, bad number, short file).
struct ParseError : Error {
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line(line) {}
    std::size_t line;
};

struct DimensionError : Error {
    using Error::Error;
};

// Normal-equation factorization found a pivot below the rank tolerance.
struct RankError : Error {
    using Error::Error;
};

// An iterate left the finite range; carries the offending iteration.
struct DivergenceError : Error {
    DivergenceError(std::uint64_t iteration)
        : Error("solver diverged at iteration " + std::to_string(iteration)),
          iteration(iteration) {}
    std::uint64_t iteration;
};

// A row of H has zero norm, so the ALS step-size bound is undefined.
struct DegenerateRowError : Error {
    using Error::Error;
};

// Power iteration did not reach the requested tolerance.
struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, double last_estimate)
        : Error(what), last_estimate(last_estimate) {}
    double last_estimate;
};

struct ConfigError : Error {
    using Error::Error;
};

// Random instance generation exhausted its retry budget.
struct GenerationError : Error {
    using Error::Error;
};

// Error-recursion replay disagreed with the solver trace (implementation bug).
struct RecursionMismatchError : Error {
    using Error::Error;
};

struct TraceError : Error {
    using Error::Error;
};

}  // namespace als
