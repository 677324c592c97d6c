#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "clt/error.hpp"

namespace clt {

constexpr double kLpInf = std::numeric_limits<double>::infinity();

enum class Relation : std::uint8_t { Le, Ge, Eq };

struct LpVariable {
    std::string name;
    double lower = 0.0;
    double upper = kLpInf;
};

struct LpTerm {
    std::uint32_t var = 0;
    double coef = 0.0;
};

struct LpConstraint {
    std::vector<LpTerm> terms;
    Relation relation = Relation::Le;
    double rhs = 0.0;
    std::string name;
};

enum class LpSense : std::uint8_t { Minimize, Maximize };

/// Dense/sparse LP: bounded variables, arbitrary-relation rows, optional
/// linear objective (empty objective means pure feasibility).
struct LpProblem {
    std::vector<LpVariable> variables;
    std::vector<LpConstraint> constraints;
    std::vector<LpTerm> objective;
    LpSense sense = LpSense::Minimize;

    std::uint32_t add_variable(std::string name, double lower, double upper) {
        variables.push_back({std::move(name), lower, upper});
        return static_cast<std::uint32_t>(variables.size() - 1);
    }
    void add_constraint(std::vector<LpTerm> terms, Relation rel, double rhs,
                        std::string name = {}) {
        constraints.push_back({std::move(terms), rel, rhs, std::move(name)});
    }
    void check_well_formed() const;
};

enum class LpStatus : std::uint8_t { Feasible, Infeasible, IterationLimit, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::IterationLimit;
    std::vector<double> values;
    double objective = 0.0;
    std::uint64_t iterations = 0;
    std::vector<std::uint32_t> infeasible_rows; // phase-1 certificate

    // Filled by snapping: values rounded to the grid and re-verified with
    // exact integer arithmetic. `snapped` is false when no grid point passing
    // exact verification was found (the unsnapped solution is kept).
    bool snapped = false;
    std::vector<std::int64_t> snapped_units;
};

struct LpSolverConfig {
    std::uint64_t max_iterations = 200000;
    double tolerance = 1e-9;     // feasibility/reduced-cost tolerance
    double pivot_tolerance = 1e-9;
    /// Grid for snapping (0 disables). Exact verification requires all
    /// constraint data to be integral in grid units.
    double snap_grid = 0.0;
    std::uint32_t max_repair_passes = 32;
};

/// Deterministic bounded-variable revised simplex (two-phase; Dantzig pricing
/// with lowest-index ties, falling back to Bland's rule on degenerate
/// stalls). Identical problems and configs yield identical solutions.
LpSolution solve(const LpProblem& problem, const LpSolverConfig& config = {});

/// Exact check of every constraint and bound at integer grid assignment
/// `units` (units = value / grid). Requires integral data; returns indices of
/// violated rows (bounds reported as row index >= constraints.size()).
std::vector<std::uint32_t> exact_violations(const LpProblem& problem,
                                            const std::vector<std::int64_t>& units,
                                            double grid);

} // namespace clt
