#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "scenagg/milp.hpp"

namespace scenagg {

namespace {

constexpr double kPivTol = 1e-8;    // smallest acceptable ratio-test pivot
constexpr double kDropTol = 1e-12;  // eta sparsification threshold
constexpr int kRefactorEvery = 240; // pivot cap between refactorizations
constexpr int kStallLimit = 600;    // degenerate iterations before Bland

// Product-form eta: B' = B * (I + (w - e_r) e_r^T).
struct Eta {
    int row = 0;
    double pivot = 1.0;
    std::vector<std::pair<int, double>> others;  // (position, w_i), i != row
};

enum class VStat : std::uint8_t { basic, at_lower, at_upper, free_nb };

class Simplex {
public:
    Simplex(const MilpInstance& inst, const LpOptions& opts) : opts_(opts) {
        n_ = inst.num_variables();
        m_ = inst.num_rows();
        ncols_ = n_ + m_;

        lower_.resize(ncols_);
        upper_.resize(ncols_);
        cost_.assign(ncols_, 0.0);
        for (int j = 0; j < n_; ++j) {
            lower_[j] = inst.variable(j).lower;
            upper_[j] = inst.variable(j).upper;
            cost_[j] = inst.variable(j).objective;
        }
        rhs_.resize(m_);
        for (int i = 0; i < m_; ++i) {
            const MilpRow& r = inst.row(i);
            rhs_[i] = r.rhs;
            switch (r.sense) {  // row a.x + s = rhs with the slack bounded by sense
                case RowSense::le: lower_[n_ + i] = 0.0; upper_[n_ + i] = kInf; break;
                case RowSense::ge: lower_[n_ + i] = -kInf; upper_[n_ + i] = 0.0; break;
                case RowSense::eq: lower_[n_ + i] = 0.0; upper_[n_ + i] = 0.0; break;
            }
        }

        // CSC storage of the structural columns.
        col_ptr_.assign(n_ + 1, 0);
        for (int i = 0; i < m_; ++i)
            for (const auto& [col, val] : inst.row(i).coeffs)
                if (val != 0.0) ++col_ptr_[col + 1];
        for (int j = 0; j < n_; ++j) col_ptr_[j + 1] += col_ptr_[j];
        col_row_.resize(col_ptr_[n_]);
        col_val_.resize(col_ptr_[n_]);
        std::vector<int> fill(n_, 0);
        for (int i = 0; i < m_; ++i)
            for (const auto& [col, val] : inst.row(i).coeffs) {
                if (val == 0.0) continue;
                const int at = col_ptr_[col] + fill[col]++;
                col_row_[at] = i;
                col_val_[at] = val;
            }

        objective_offset_ = inst.objective_offset();
    }

    LpResult run() {
        init_state();
        LpResult out;
        const std::int64_t max_iter =
            opts_.max_iterations >= 0 ? opts_.max_iterations
                                      : 200LL * (m_ + n_) + 10000;

        bool phase1 = max_scaled_infeasibility() > feas_threshold();
        std::int64_t iter = 0;
        int stall = 0;
        int restarts = 0;
        bool bland = false;
        double last_merit = merit(phase1);

        while (true) {
            if (iter >= max_iter) {
                out.status = LpStatus::iteration_limit;
                finalize(out, iter);
                return out;
            }

            if (phase1 && max_scaled_infeasibility() <= feas_threshold()) {
                phase1 = false;
                bland = false;
                stall = 0;
                last_merit = merit(false);
            }

            tic();
            compute_duals(phase1);
            toc(stats_.duals);
            tic();
            const int q = price(phase1, bland);
            toc(stats_.price);
            if (q < 0) {
                if (phase1) {
                    out.status = LpStatus::infeasible;
                    finalize(out, iter);
                    return out;
                }
                // Candidate optimum: refresh the factorization and confirm
                // feasibility did not drift.
                refactorize();
                if (max_scaled_infeasibility() > feas_threshold() && restarts < 3) {
                    ++restarts;
                    phase1 = true;
                    stall = 0;
                    bland = false;
                    last_merit = merit(true);
                    continue;
                }
                out.status = LpStatus::optimal;
                finalize(out, iter);
                return out;
            }

            const int dir = entering_direction(q, phase1);
            tic();
            Eigen::VectorXd w = ftran(column_dense(q));
            toc(stats_.ftran);

            // Ratio test: find the first blocking basic (Harris two-pass).
            tic();
            const auto [t, leave_row, leave_to_upper] = ratio_test(q, dir, w, phase1);
            toc(stats_.ratio);
            if (leave_row == -2) {  // no block at all
                if (phase1) {
                    fail("NumericalBreakdown", "phase-1 direction is unblocked");
                }
                out.status = LpStatus::unbounded;
                finalize(out, iter);
                return out;
            }

            tic();
            apply_step(q, dir, t, leave_row, leave_to_upper, w);
            toc(stats_.apply);
            ++iter;

            tic();
            const double now_merit = merit(phase1);
            if (now_merit < last_merit - 1e-12 * (1.0 + std::abs(last_merit))) {
                stall = 0;
                bland = false;
                last_merit = now_merit;
            } else if (++stall > kStallLimit) {
                bland = true;  // anti-cycling fallback
            }
            toc(stats_.merit);

            if (static_cast<int>(etas_.size()) >= kRefactorEvery) refactorize();
        }
    }

private:
    const LpOptions& opts_;
    int n_ = 0, m_ = 0, ncols_ = 0;
    std::vector<double> lower_, upper_, cost_, rhs_;
    std::vector<int> col_ptr_, col_row_;
    std::vector<double> col_val_;
    double objective_offset_ = 0.0;

    std::vector<VStat> stat_;
    std::vector<double> x_;
    std::vector<int> basic_;   // row position -> column
    std::vector<int> row_of_;  // column -> row position, -1 when nonbasic

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
    std::vector<Eta> etas_;
    std::size_t eta_nnz_total_ = 0;
    // optional wall-time accounting, enabled by SCENAGG_LP_STATS
    struct Stats {
        double duals = 0, price = 0, ftran = 0, ratio = 0, apply = 0, merit = 0, factor = 0;
        long factors = 0;
        bool enabled = std::getenv("SCENAGG_LP_STATS") != nullptr;
    } stats_;
    std::chrono::steady_clock::time_point mark_;
    void tic() { if (stats_.enabled) mark_ = std::chrono::steady_clock::now(); }
    void toc(double& slot) {
        if (stats_.enabled)
            slot += std::chrono::duration<double>(std::chrono::steady_clock::now() - mark_).count();
    }
    Eigen::VectorXd duals_;
    std::vector<double> dj_;

    double feas_threshold() const { return std::max(opts_.feas_tol * 10.0, 1e-8); }

    template <typename F>
    void for_column(int j, F&& f) const {
        if (j < n_) {
            for (int k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) f(col_row_[k], col_val_[k]);
        } else {
            f(j - n_, 1.0);
        }
    }

    Eigen::VectorXd column_dense(int j) const {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(m_);
        for_column(j, [&](int i, double a) { v[i] += a; });
        return v;
    }

    void init_state() {
        stat_.assign(ncols_, VStat::at_lower);
        x_.assign(ncols_, 0.0);
        for (int j = 0; j < ncols_; ++j) {
            if (std::isfinite(lower_[j])) {
                stat_[j] = VStat::at_lower;
                x_[j] = lower_[j];
            } else if (std::isfinite(upper_[j])) {
                stat_[j] = VStat::at_upper;
                x_[j] = upper_[j];
            } else {
                stat_[j] = VStat::free_nb;
                x_[j] = 0.0;
            }
        }
        basic_.resize(m_);
        row_of_.assign(ncols_, -1);

        bool warm_ok = false;
        if (opts_.warm_start && static_cast<int>(opts_.warm_start->basic.size()) == m_ &&
            static_cast<int>(opts_.warm_start->at_upper.size()) == ncols_) {
            warm_ok = try_warm_start(*opts_.warm_start);
        }
        if (!warm_ok) {
            for (int i = 0; i < m_; ++i) {
                basic_[i] = n_ + i;
                row_of_[n_ + i] = i;
                stat_[n_ + i] = VStat::basic;
            }
            refactorize();
        }
        recompute_basics();
    }

    bool try_warm_start(const Basis& b) {
        std::vector<bool> used(ncols_, false);
        for (int i = 0; i < m_; ++i) {
            const int c = b.basic[i];
            if (c < 0 || c >= ncols_ || used[c]) return false;
            used[c] = true;
        }
        for (int i = 0; i < m_; ++i) {
            basic_[i] = b.basic[i];
            row_of_[b.basic[i]] = i;
            stat_[b.basic[i]] = VStat::basic;
        }
        for (int j = 0; j < ncols_; ++j) {
            if (stat_[j] == VStat::basic) continue;
            if (b.at_upper[j] && std::isfinite(upper_[j])) {
                stat_[j] = VStat::at_upper;
                x_[j] = upper_[j];
            } else if (std::isfinite(lower_[j])) {
                stat_[j] = VStat::at_lower;
                x_[j] = lower_[j];
            } else if (std::isfinite(upper_[j])) {
                stat_[j] = VStat::at_upper;
                x_[j] = upper_[j];
            } else {
                stat_[j] = VStat::free_nb;
                x_[j] = 0.0;
            }
        }
        if (!factorize_basis()) {
            // Singular warm basis: fall back to the all-slack start.
            for (int j = 0; j < ncols_; ++j) row_of_[j] = -1;
            for (int j = 0; j < ncols_; ++j)
                if (stat_[j] == VStat::basic)
                    stat_[j] = std::isfinite(lower_[j]) ? VStat::at_lower
                               : std::isfinite(upper_[j]) ? VStat::at_upper
                                                          : VStat::free_nb;
            for (int j = 0; j < ncols_; ++j)
                x_[j] = stat_[j] == VStat::at_lower   ? lower_[j]
                        : stat_[j] == VStat::at_upper ? upper_[j]
                                                      : 0.0;
            return false;
        }
        return true;
    }

    bool factorize_basis() {
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<std::size_t>(m_) * 4);
        for (int r = 0; r < m_; ++r)
            for_column(basic_[r], [&](int i, double a) { trip.emplace_back(i, r, a); });
        Eigen::SparseMatrix<double> b(m_, m_);
        b.setFromTriplets(trip.begin(), trip.end());
        lu_.compute(b);
        etas_.clear();
        eta_nnz_total_ = 0;
        return lu_.info() == Eigen::Success;
    }

    void refactorize() {
        const auto t0 = std::chrono::steady_clock::now();
        if (!factorize_basis())
            fail("NumericalBreakdown", "basis factorization failed");
        recompute_basics();
        if (stats_.enabled) {
            stats_.factor +=
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            ++stats_.factors;
        }
    }

    void recompute_basics() {
        Eigen::VectorXd r = Eigen::VectorXd::Zero(m_);
        for (int i = 0; i < m_; ++i) r[i] = rhs_[i];
        for (int j = 0; j < ncols_; ++j) {
            if (stat_[j] == VStat::basic || x_[j] == 0.0) continue;
            for_column(j, [&](int i, double a) { r[i] -= a * x_[j]; });
        }
        Eigen::VectorXd xb = ftran(std::move(r));
        for (int i = 0; i < m_; ++i) x_[basic_[i]] = xb[i];
    }

    Eigen::VectorXd ftran(Eigen::VectorXd v) {
        Eigen::VectorXd t = lu_.solve(v);
        for (const Eta& e : etas_) {
            const double zr = t[e.row] / e.pivot;
            if (zr != 0.0) {
                for (const auto& [i, wi] : e.others) t[i] -= wi * zr;
            }
            t[e.row] = zr;
        }
        return t;
    }

    Eigen::VectorXd btran(Eigen::VectorXd v) {
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            double dot = 0.0;
            for (const auto& [i, wi] : it->others) dot += wi * v[i];
            v[it->row] = (v[it->row] - dot) / it->pivot;
        }
        return lu_.adjoint().solve(v);
    }

    double violation(int j) const {
        const double v = x_[j];
        if (v < lower_[j]) return lower_[j] - v;
        if (v > upper_[j]) return v - upper_[j];
        return 0.0;
    }

    double total_infeasibility() const {
        double s = 0.0;
        for (int i = 0; i < m_; ++i) s += violation(basic_[i]);
        return s;
    }

    double max_scaled_infeasibility() const {
        double worst = 0.0;
        for (int i = 0; i < m_; ++i) {
            const int j = basic_[i];
            const double bound = x_[j] < lower_[j] ? lower_[j] : upper_[j];
            const double scale = 1.0 + std::abs(std::isfinite(bound) ? bound : 0.0);
            worst = std::max(worst, violation(j) / scale);
        }
        return worst;
    }

    double merit(bool phase1) const {
        if (phase1) return total_infeasibility();
        double obj = 0.0;
        for (int j = 0; j < ncols_; ++j) obj += cost_[j] * x_[j];
        return obj;
    }

    // Phase-1 costs are the infeasibility signs of the basics; phase-2
    // costs are the objective coefficients of the basics.
    void compute_duals(bool phase1) {
        Eigen::VectorXd cb = Eigen::VectorXd::Zero(m_);
        const double tol = opts_.feas_tol;
        for (int i = 0; i < m_; ++i) {
            const int j = basic_[i];
            if (phase1) {
                if (x_[j] < lower_[j] - tol) cb[i] = -1.0;
                else if (x_[j] > upper_[j] + tol) cb[i] = 1.0;
            } else {
                cb[i] = cost_[j];
            }
        }
        duals_ = btran(std::move(cb));
    }

    double reduced_cost(int j, bool phase1) const {
        double d = phase1 ? 0.0 : cost_[j];
        if (j < n_) {
            for (int k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k)
                d -= duals_[col_row_[k]] * col_val_[k];
        } else {
            d -= duals_[j - n_];
        }
        return d;
    }

    bool eligible(int j, double d) const {
        const double tol = opts_.opt_tol;
        if (lower_[j] == upper_[j]) return false;  // fixed columns never enter
        switch (stat_[j]) {
            case VStat::basic: return false;
            case VStat::at_lower: return d < -tol;
            case VStat::at_upper: return d > tol;
            case VStat::free_nb: return std::abs(d) > tol;
        }
        return false;
    }

    int entering_direction(int j, bool phase1) const {
        const double d = dj_[j];
        (void)phase1;
        if (stat_[j] == VStat::at_lower) return 1;
        if (stat_[j] == VStat::at_upper) return -1;
        return d < 0.0 ? 1 : -1;  // free
    }

    // Dantzig pricing (most negative reduced cost); Bland's smallest
    // index rule when anti-cycling kicks in. Measured faster than devex
    // on the TEP structure in both iterations and wall time.
    int price(bool phase1, bool bland) {
        dj_.assign(ncols_, 0.0);
        int best = -1;
        double best_score = 0.0;
        for (int j = 0; j < ncols_; ++j) {
            if (stat_[j] == VStat::basic) continue;
            const double d = reduced_cost(j, phase1);
            dj_[j] = d;
            if (!eligible(j, d)) continue;
            if (bland) {
                if (best < 0) best = j;  // smallest index rule
                continue;
            }
            if (std::abs(d) > best_score * (1.0 + 1e-12)) {
                best_score = std::abs(d);
                best = j;
            }
        }
        return best;
    }

    // Returns (step, leaving row, leaving-to-upper). leaving row -1 means
    // a bound flip of the entering column; -2 means unblocked.
    std::tuple<double, int, bool> ratio_test(int q, int dir, const Eigen::VectorXd& w,
                                             bool phase1) const {
        const double tol = opts_.feas_tol;
        double t_limit = kInf;
        if (std::isfinite(lower_[q]) && std::isfinite(upper_[q]))
            t_limit = upper_[q] - lower_[q];  // bound flip distance

        // Pass 1: smallest relaxed ratio.
        double t_relaxed = t_limit;
        for (int i = 0; i < m_; ++i) {
            const double wi = w[i];
            if (std::abs(wi) <= kPivTol) continue;
            const double delta = -dir * wi;
            const int j = basic_[i];
            const double v = x_[j];
            double bound = kInf;
            if (phase1 && v < lower_[j] - tol) {
                if (delta > 0.0) bound = lower_[j];       // infeasible below, rising
                else continue;
            } else if (phase1 && v > upper_[j] + tol) {
                if (delta < 0.0) bound = upper_[j];       // infeasible above, falling
                else continue;
            } else if (delta > 0.0) {
                bound = upper_[j];
            } else {
                bound = lower_[j];
            }
            if (!std::isfinite(bound)) continue;
            const double slack = std::abs(bound - v) + tol * (1.0 + std::abs(bound));
            const double ratio = slack / std::abs(delta);
            t_relaxed = std::min(t_relaxed, ratio);
        }
        if (!std::isfinite(t_relaxed)) return {0.0, -2, false};

        // Pass 2: among blockers within the relaxed step, take the largest
        // pivot; ties resolve to the smallest row index.
        int leave = -1;
        bool to_upper = false;
        double best_piv = 0.0;
        double t_exact = t_limit;
        for (int i = 0; i < m_; ++i) {
            const double wi = w[i];
            if (std::abs(wi) <= kPivTol) continue;
            const double delta = -dir * wi;
            const int j = basic_[i];
            const double v = x_[j];
            double bound = kInf;
            bool hits_upper = false;
            if (phase1 && v < lower_[j] - tol) {
                if (delta > 0.0) bound = lower_[j];
                else continue;
            } else if (phase1 && v > upper_[j] + tol) {
                if (delta < 0.0) { bound = upper_[j]; hits_upper = true; }
                else continue;
            } else if (delta > 0.0) {
                bound = upper_[j];
                hits_upper = true;
            } else {
                bound = lower_[j];
            }
            if (!std::isfinite(bound)) continue;
            const double ratio = std::max(0.0, (bound - v) / delta);
            if (ratio <= t_relaxed + 1e-15) {
                if (std::abs(wi) > best_piv + 1e-15) {
                    best_piv = std::abs(wi);
                    leave = i;
                    to_upper = hits_upper;
                    t_exact = ratio;
                }
            }
        }
        if (leave < 0) {
            if (std::isfinite(t_limit)) return {t_limit, -1, false};  // bound flip
            return {0.0, -2, false};
        }
        if (std::isfinite(t_limit) && t_limit < t_exact) return {t_limit, -1, false};
        return {t_exact, leave, to_upper};
    }

    void apply_step(int q, int dir, double t, int leave_row, bool leave_to_upper,
                    const Eigen::VectorXd& w) {
        // Move the entering variable and all basics.
        x_[q] += dir * t;
        for (int i = 0; i < m_; ++i) {
            const double wi = w[i];
            if (wi != 0.0) x_[basic_[i]] -= dir * t * wi;
        }

        if (leave_row < 0) {
            // Bound flip: snap exactly, no basis change.
            stat_[q] = dir > 0 ? VStat::at_upper : VStat::at_lower;
            x_[q] = dir > 0 ? upper_[q] : lower_[q];
            return;
        }

        const int leaving = basic_[leave_row];
        x_[leaving] = leave_to_upper ? upper_[leaving] : lower_[leaving];
        stat_[leaving] = leave_to_upper ? VStat::at_upper : VStat::at_lower;
        if (!std::isfinite(x_[leaving])) {  // free column cannot rest at a bound
            stat_[leaving] = VStat::free_nb;
            x_[leaving] = 0.0;
        }
        row_of_[leaving] = -1;

        basic_[leave_row] = q;
        row_of_[q] = leave_row;
        stat_[q] = VStat::basic;

        Eta e;
        e.row = leave_row;
        e.pivot = w[leave_row];
        e.others.reserve(64);
        for (int i = 0; i < m_; ++i)
            if (i != leave_row && std::abs(w[i]) > kDropTol) e.others.emplace_back(i, w[i]);
        eta_nnz_total_ += etas_.emplace_back(std::move(e)).others.size();
        // Refactor when applying the eta file costs more than a fresh
        // factorization would save.
        if (eta_nnz_total_ > 48 * static_cast<std::size_t>(m_) + 20000) refactorize();
    }

    void finalize(LpResult& out, std::int64_t iter) {
        if (stats_.enabled)
            std::fprintf(stderr,
                         "[lp] m=%d iters=%lld duals=%.2f price=%.2f ftran=%.2f ratio=%.2f "
                         "apply=%.2f merit=%.2f factor=%.2f (%ld factors)\n",
                         m_, static_cast<long long>(iter), stats_.duals, stats_.price,
                         stats_.ftran, stats_.ratio, stats_.apply, stats_.merit, stats_.factor,
                         stats_.factors);
        refactorize();  // exact basics for reporting
        compute_duals(false);
        out.iterations = iter;
        out.objective = merit(false) + objective_offset_;
        out.x.assign(n_, 0.0);
        for (int j = 0; j < n_; ++j) out.x[j] = x_[j];
        out.duals.assign(m_, 0.0);
        for (int i = 0; i < m_; ++i) out.duals[i] = duals_[i];
        out.reduced_costs.assign(n_, 0.0);
        for (int j = 0; j < n_; ++j)
            out.reduced_costs[j] = stat_[j] == VStat::basic ? 0.0 : reduced_cost(j, false);
        out.basis.basic = basic_;
        out.basis.at_upper.assign(ncols_, 0);
        for (int j = 0; j < ncols_; ++j)
            out.basis.at_upper[j] = stat_[j] == VStat::at_upper ? 1 : 0;
    }
};

}  // namespace

LpResult solve_lp(const MilpInstance& m, const LpOptions& opts) {
    m.validate();
    if (m.num_rows() == 0) {
        // Pure bound problem: each variable sits at its cheaper bound.
        LpResult out;
        out.status = LpStatus::optimal;
        out.x.resize(m.num_variables());
        double obj = m.objective_offset();
        for (int j = 0; j < m.num_variables(); ++j) {
            const MilpVariable& v = m.variable(j);
            double val;
            if (v.objective >= 0.0) val = std::isfinite(v.lower) ? v.lower : 0.0;
            else val = std::isfinite(v.upper) ? v.upper : kInf;
            if (!std::isfinite(val)) {
                out.status = LpStatus::unbounded;
                val = 0.0;
            }
            out.x[j] = val;
            obj += v.objective * val;
        }
        out.objective = obj;
        out.reduced_costs.resize(m.num_variables());
        for (int j = 0; j < m.num_variables(); ++j)
            out.reduced_costs[j] = m.variable(j).objective;
        return out;
    }
    Simplex s(m, opts);
    return s.run();
}

}  // namespace scenagg
