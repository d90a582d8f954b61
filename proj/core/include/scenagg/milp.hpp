#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "scenagg/error.hpp"

namespace scenagg {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { le, eq, ge };

struct MilpVariable {
    std::string name;
    double lower = 0.0;
    double upper = kInf;
    double objective = 0.0;
    bool is_binary = false;
};

struct MilpRow {
    std::string name;
    RowSense sense = RowSense::le;
    double rhs = 0.0;
    std::vector<std::pair<int, double>> coeffs;  // (column, value), column-sorted
};

/// Sparse minimization MILP: rows with sense/rhs, bounded variables,
/// binary marks. Names are unique; binaries are bounded to {0, 1}.
class MilpInstance {
public:
    int add_variable(const std::string& name, double lower, double upper, double objective,
                     bool is_binary = false);
    int add_row(const std::string& name, RowSense sense, double rhs,
                std::vector<std::pair<int, double>> coeffs);

    int num_variables() const { return static_cast<int>(variables_.size()); }
    int num_rows() const { return static_cast<int>(rows_.size()); }
    const MilpVariable& variable(int j) const { return variables_[j]; }
    MilpVariable& variable(int j) { return variables_[j]; }
    const MilpRow& row(int i) const { return rows_[i]; }
    const std::vector<MilpVariable>& variables() const { return variables_; }
    const std::vector<MilpRow>& rows() const { return rows_; }

    double objective_offset() const { return objective_offset_; }
    void set_objective_offset(double v) { objective_offset_ = v; }

    std::vector<int> binary_columns() const;

    /// Structural checks: unique names, finite {0,1} bounds on binaries,
    /// finite coefficients, in-range column indices.
    void validate() const;

private:
    std::vector<MilpVariable> variables_;
    std::vector<MilpRow> rows_;
    double objective_offset_ = 0.0;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

/// Simplex basis snapshot usable as a warm start: the basic column per row
/// plus which nonbasic columns rest at their upper bound. Column space is
/// structural columns followed by one slack per row.
struct Basis {
    std::vector<int> basic;               // size m
    std::vector<std::uint8_t> at_upper;   // size n + m

    bool empty() const { return basic.empty(); }
};

struct LpOptions {
    double feas_tol = 1e-9;
    double opt_tol = 1e-9;
    std::int64_t max_iterations = -1;  // < 0: 200 * (m + n) + 10000
    std::optional<Basis> warm_start;
};

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    double objective = 0.0;
    std::vector<double> x;              // structural primal values
    std::vector<double> duals;          // one per row
    std::vector<double> reduced_costs;  // structural columns
    std::int64_t iterations = 0;
    Basis basis;
};

/// Bounded-variable revised simplex (phase 1 + phase 2) with sparse LU
/// basis factorization, product-form updates, Devex pricing and a Bland
/// fallback on stalling. Integrality is ignored.
LpResult solve_lp(const MilpInstance& m, const LpOptions& opts = {});

struct BnbTrajectoryPoint {
    double seconds = 0.0;
    std::int64_t nodes = 0;
    double best_bound = 0.0;
    double incumbent = 0.0;
    double gap = 0.0;
};

struct BnbLogRow {
    std::int64_t node = 0;
    double best_bound = 0.0;
    double incumbent = 0.0;
    double gap = 0.0;
    double seconds = 0.0;
};

struct BnbOptions {
    double rel_gap = 0.001;
    std::int64_t node_limit = -1;   // < 0: unlimited
    double time_limit = -1.0;       // seconds; < 0: unlimited
    bool rounding_heuristic = true;
    LpOptions lp;
    std::function<void(const BnbLogRow&)> log;
};

enum class BnbStatus { optimal, infeasible, unbounded, node_limit, time_limit };

struct BnbResult {
    BnbStatus status = BnbStatus::infeasible;
    double objective = 0.0;            // incumbent objective (offset included)
    std::vector<double> incumbent;     // structural values
    double best_bound = 0.0;
    double achieved_gap = 0.0;
    std::int64_t nodes_explored = 0;
    std::vector<BnbTrajectoryPoint> trajectory;
};

/// Best-bound branch and bound over the binary variables: branches on the
/// most fractional binary (ties to the lowest index), warm-starts child
/// LPs from the parent basis, and stops when the relative gap reaches
/// opts.rel_gap.
BnbResult branch_and_bound(const MilpInstance& m, const BnbOptions& opts = {});

/// MPS export: ROWS/COLUMNS/RHS/BOUNDS sections with INTORG/INTEND
/// markers, 8-character names (long names truncated with a uniquifying
/// suffix), full-precision numerics. Returns the original-to-MPS name
/// mapping for columns and rows.
struct MpsNameMap {
    std::vector<std::pair<std::string, std::string>> rows;
    std::vector<std::pair<std::string, std::string>> columns;
};

MpsNameMap write_mps(const MilpInstance& m, const std::string& path);

/// Parses an MPS file written by write_mps (free-format fields, fixed-style
/// layout); the round trip reproduces coefficients exactly.
MilpInstance read_mps(const std::string& path);

}  // namespace scenagg
