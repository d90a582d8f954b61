#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "scenagg/milp.hpp"

namespace scenagg {

namespace {

// MPS names are limited to 8 characters; longer names are truncated and
// uniquified with a numeric suffix.
class NameShortener {
public:
    std::string shorten(const std::string& name) {
        if (name.size() <= 8 && used_.insert(name).second) return name;
        const std::string stem = name.substr(0, 4);
        for (;;) {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "%s%04d", stem.c_str(), counter_++);
            std::string candidate(buf);
            if (used_.insert(candidate).second) return candidate;
        }
    }

private:
    std::set<std::string> used_;
    int counter_ = 0;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void field(std::ostream& out, const std::string& s, int width) {
    out << s;
    for (int i = static_cast<int>(s.size()); i < width; ++i) out << ' ';
}

}  // namespace

MpsNameMap write_mps(const MilpInstance& m, const std::string& path) {
    m.validate();
    std::ofstream out(path);
    if (!out) fail("IoFailure", "cannot open '" + path + "' for writing");

    NameShortener names;
    MpsNameMap map;
    std::vector<std::string> row_name(m.num_rows());
    std::vector<std::string> col_name(m.num_variables());
    const std::string obj_name = names.shorten("COST");
    for (int i = 0; i < m.num_rows(); ++i) {
        row_name[i] = names.shorten(m.row(i).name);
        if (row_name[i] != m.row(i).name) map.rows.emplace_back(m.row(i).name, row_name[i]);
    }
    for (int j = 0; j < m.num_variables(); ++j) {
        col_name[j] = names.shorten(m.variable(j).name);
        if (col_name[j] != m.variable(j).name)
            map.columns.emplace_back(m.variable(j).name, col_name[j]);
    }

    out << "NAME          SCENAGG\n";
    out << "ROWS\n";
    out << " N  " << obj_name << "\n";
    for (int i = 0; i < m.num_rows(); ++i) {
        const char sense = m.row(i).sense == RowSense::le   ? 'L'
                           : m.row(i).sense == RowSense::ge ? 'G'
                                                            : 'E';
        out << " " << sense << "  " << row_name[i] << "\n";
    }

    // Column-major coefficient lists.
    std::vector<std::vector<std::pair<int, double>>> by_col(m.num_variables());
    for (int i = 0; i < m.num_rows(); ++i)
        for (const auto& [col, val] : m.row(i).coeffs)
            if (val != 0.0) by_col[col].emplace_back(i, val);

    out << "COLUMNS\n";
    bool in_int = false;
    int marker = 0;
    for (int j = 0; j < m.num_variables(); ++j) {
        const bool want_int = m.variable(j).is_binary;
        if (want_int != in_int) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "    MARKER%02d  'MARKER'                 '%s'\n",
                          marker++, want_int ? "INTORG" : "INTEND");
            out << buf;
            in_int = want_int;
        }
        auto entry = [&](const std::string& row, double v) {
            out << "    ";
            field(out, col_name[j], 10);
            field(out, row, 10);
            out << num(v) << "\n";
        };
        if (m.variable(j).objective != 0.0) entry(obj_name, m.variable(j).objective);
        for (const auto& [row, val] : by_col[j]) entry(row_name[row], val);
        if (m.variable(j).objective == 0.0 && by_col[j].empty())
            entry(obj_name, 0.0);  // keep empty columns declared
    }
    if (in_int) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "    MARKER%02d  'MARKER'                 'INTEND'\n",
                      marker++);
        out << buf;
    }

    out << "RHS\n";
    for (int i = 0; i < m.num_rows(); ++i) {
        if (m.row(i).rhs == 0.0) continue;
        out << "    ";
        field(out, "RHS", 10);
        field(out, row_name[i], 10);
        out << num(m.row(i).rhs) << "\n";
    }
    if (m.objective_offset() != 0.0) {
        out << "    ";
        field(out, "RHS", 10);
        field(out, obj_name, 10);
        out << num(-m.objective_offset()) << "\n";
    }

    out << "BOUNDS\n";
    for (int j = 0; j < m.num_variables(); ++j) {
        const MilpVariable& v = m.variable(j);
        auto bound = [&](const char* tag, double value, bool with_value) {
            out << " " << tag << " ";
            field(out, "BND", 10);
            field(out, col_name[j], 10);
            if (with_value) out << num(value);
            out << "\n";
        };
        if (v.lower == v.upper) {
            bound("FX", v.lower, true);
            continue;
        }
        if (std::isfinite(v.lower)) {
            if (v.lower != 0.0 || v.is_binary) bound("LO", v.lower, true);
        } else {
            bound("MI", 0.0, false);
        }
        if (std::isfinite(v.upper)) bound("UP", v.upper, true);
    }
    out << "ENDATA\n";
    if (!out) fail("IoFailure", "write to '" + path + "' failed");
    return map;
}

MilpInstance read_mps(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("IoFailure", "cannot open '" + path + "'");

    MilpInstance m;
    enum class Section { none, rows, columns, rhs, bounds, done };
    Section section = Section::none;

    std::string obj_name;
    std::unordered_map<std::string, int> row_of;
    std::unordered_map<std::string, int> col_of;
    std::vector<RowSense> senses;
    std::vector<std::string> row_names;
    std::vector<double> rhs_values;
    std::vector<std::vector<std::pair<int, double>>> row_coeffs;
    struct ColInfo {
        std::string name;
        double obj = 0.0;
        double lower = 0.0;
        double upper = kInf;
        bool binary = false;
        bool lower_set = false;
    };
    std::vector<ColInfo> cols;
    double objective_offset = 0.0;
    bool in_int = false;

    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '*') continue;
        std::istringstream ss(line);
        if (!std::isspace(static_cast<unsigned char>(line[0]))) {
            std::string head;
            ss >> head;
            if (head == "NAME") section = Section::none;
            else if (head == "ROWS") section = Section::rows;
            else if (head == "COLUMNS") section = Section::columns;
            else if (head == "RHS") section = Section::rhs;
            else if (head == "RANGES") fail("SchemaError", "RANGES section is not supported");
            else if (head == "BOUNDS") section = Section::bounds;
            else if (head == "ENDATA") section = Section::done;
            else fail("SchemaError", "unknown MPS section '" + head + "'");
            continue;
        }
        switch (section) {
            case Section::rows: {
                std::string sense, name;
                ss >> sense >> name;
                if (sense == "N") {
                    obj_name = name;
                } else {
                    RowSense s = sense == "L"   ? RowSense::le
                                 : sense == "G" ? RowSense::ge
                                                : RowSense::eq;
                    row_of[name] = static_cast<int>(senses.size());
                    senses.push_back(s);
                    row_names.push_back(name);
                    rhs_values.push_back(0.0);
                    row_coeffs.emplace_back();
                }
                break;
            }
            case Section::columns: {
                std::string col, f2, f3;
                ss >> col >> f2;
                if (f2 == "'MARKER'") {
                    ss >> f3;
                    in_int = f3 == "'INTORG'";
                    break;
                }
                auto it = col_of.find(col);
                int idx;
                if (it == col_of.end()) {
                    idx = static_cast<int>(cols.size());
                    col_of[col] = idx;
                    cols.push_back(ColInfo{col});
                    cols.back().binary = in_int;
                } else {
                    idx = it->second;
                }
                // Pairs of (row, value) fields, up to two per line.
                std::string row = f2;
                for (;;) {
                    std::string value;
                    if (!(ss >> value)) break;
                    const double v = std::stod(value);
                    if (row == obj_name) {
                        cols[idx].obj = v;
                    } else {
                        auto rit = row_of.find(row);
                        if (rit == row_of.end())
                            fail("SchemaError", "COLUMNS references unknown row '" + row + "'");
                        row_coeffs[rit->second].emplace_back(idx, v);
                    }
                    if (!(ss >> row)) break;
                }
                break;
            }
            case Section::rhs: {
                std::string set, row, value;
                ss >> set >> row;
                for (;;) {
                    if (!(ss >> value)) break;
                    const double v = std::stod(value);
                    if (row == obj_name) {
                        objective_offset = -v;
                    } else {
                        auto rit = row_of.find(row);
                        if (rit == row_of.end())
                            fail("SchemaError", "RHS references unknown row '" + row + "'");
                        rhs_values[rit->second] = v;
                    }
                    if (!(ss >> row)) break;
                }
                break;
            }
            case Section::bounds: {
                std::string tag, set, col;
                ss >> tag >> set >> col;
                auto cit = col_of.find(col);
                if (cit == col_of.end())
                    fail("SchemaError", "BOUNDS references unknown column '" + col + "'");
                ColInfo& ci = cols[cit->second];
                double v = 0.0;
                if (tag == "UP" || tag == "LO" || tag == "FX" || tag == "BV") {
                    std::string value;
                    if (ss >> value) v = std::stod(value);
                }
                if (tag == "UP") ci.upper = v;
                else if (tag == "LO") { ci.lower = v; ci.lower_set = true; }
                else if (tag == "FX") { ci.lower = ci.upper = v; ci.lower_set = true; }
                else if (tag == "MI") { ci.lower = -kInf; ci.lower_set = true; }
                else if (tag == "PL") ci.upper = kInf;
                else if (tag == "FR") { ci.lower = -kInf; ci.upper = kInf; ci.lower_set = true; }
                else if (tag == "BV") { ci.binary = true; ci.lower = 0.0; ci.upper = 1.0; }
                else fail("SchemaError", "unknown bound tag '" + tag + "'");
                break;
            }
            case Section::none:
            case Section::done: break;
        }
    }
    if (section != Section::done) fail("SchemaError", "missing ENDATA");

    for (const ColInfo& c : cols) m.add_variable(c.name, c.lower, c.upper, c.obj, c.binary);
    for (std::size_t i = 0; i < senses.size(); ++i)
        m.add_row(row_names[i], senses[i], rhs_values[i], row_coeffs[i]);
    m.set_objective_offset(objective_offset);
    m.validate();
    return m;
}

}  // namespace scenagg
