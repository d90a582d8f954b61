#include "scenagg/milp.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace scenagg {

int MilpInstance::add_variable(const std::string& name, double lower, double upper,
                               double objective, bool is_binary) {
    if (lower > upper) fail("InfeasibleBounds", "variable '" + name + "' has lower > upper");
    MilpVariable v;
    v.name = name;
    v.lower = lower;
    v.upper = upper;
    v.objective = objective;
    v.is_binary = is_binary;
    if (is_binary) {
        v.lower = std::max(0.0, lower);
        v.upper = std::min(1.0, upper);
    }
    variables_.push_back(std::move(v));
    return static_cast<int>(variables_.size()) - 1;
}

int MilpInstance::add_row(const std::string& name, RowSense sense, double rhs,
                          std::vector<std::pair<int, double>> coeffs) {
    std::sort(coeffs.begin(), coeffs.end());
    MilpRow r;
    r.name = name;
    r.sense = sense;
    r.rhs = rhs;
    r.coeffs = std::move(coeffs);
    rows_.push_back(std::move(r));
    return static_cast<int>(rows_.size()) - 1;
}

std::vector<int> MilpInstance::binary_columns() const {
    std::vector<int> out;
    for (int j = 0; j < num_variables(); ++j)
        if (variables_[j].is_binary) out.push_back(j);
    return out;
}

void MilpInstance::validate() const {
    std::unordered_set<std::string> names;
    for (const MilpVariable& v : variables_) {
        if (!names.insert(v.name).second)
            fail("SchemaError", "duplicate variable name '" + v.name + "'");
        if (!std::isfinite(v.objective))
            fail("NonFiniteValue", "objective coefficient of '" + v.name + "' is not finite");
        if (std::isnan(v.lower) || std::isnan(v.upper))
            fail("NonFiniteValue", "bounds of '" + v.name + "' are NaN");
        if (v.is_binary && !(v.lower >= 0.0 && v.upper <= 1.0 && std::isfinite(v.lower) &&
                             std::isfinite(v.upper)))
            fail("InfeasibleBounds", "binary '" + v.name + "' must have bounds within {0,1}");
    }
    names.clear();
    for (const MilpRow& r : rows_) {
        if (!names.insert(r.name).second)
            fail("SchemaError", "duplicate row name '" + r.name + "'");
        if (!std::isfinite(r.rhs)) fail("NonFiniteValue", "rhs of '" + r.name + "' is not finite");
        for (const auto& [col, val] : r.coeffs) {
            if (col < 0 || col >= num_variables())
                fail("SchemaError", "row '" + r.name + "' references an unknown column");
            if (!std::isfinite(val))
                fail("NonFiniteValue", "coefficient in '" + r.name + "' is not finite");
        }
    }
    if (!std::isfinite(objective_offset_)) fail("NonFiniteValue", "objective offset is not finite");
}

}  // namespace scenagg
