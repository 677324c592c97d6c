#include "clt/lp.hpp"

#include <algorithm>
#include <cmath>

namespace clt {

void LpProblem::check_well_formed() const {
    for (const LpVariable& v : variables) {
        if (!(v.lower <= v.upper))
            fail(ErrorCode::MalformedProblem, "variable '" + v.name + "' has empty bounds");
        if (std::isnan(v.lower) || std::isnan(v.upper))
            fail(ErrorCode::MalformedProblem, "variable bound is NaN");
    }
    for (const LpConstraint& c : constraints) {
        if (!std::isfinite(c.rhs))
            fail(ErrorCode::MalformedProblem, "constraint rhs not finite");
        for (const LpTerm& t : c.terms) {
            if (t.var >= variables.size())
                fail(ErrorCode::MalformedProblem, "constraint references unknown variable");
            if (!std::isfinite(t.coef))
                fail(ErrorCode::MalformedProblem, "constraint coefficient not finite");
        }
    }
    for (const LpTerm& t : objective)
        if (t.var >= variables.size())
            fail(ErrorCode::MalformedProblem, "objective references unknown variable");
}

namespace {

enum class VarState : std::uint8_t { Basic, AtLower, AtUpper, FreeZero, Removed };

struct Column {
    std::vector<std::uint32_t> rows;
    std::vector<double> coefs;
};

/// Bounded-variable revised simplex over an explicit dense basis inverse.
/// Column order: structural variables, one slack per row, then artificials
/// appended for rows violated at the initial bound-point.
class Simplex {
public:
    Simplex(const LpProblem& p, const LpSolverConfig& cfg) : p_(p), cfg_(cfg) {
        n_ = static_cast<std::uint32_t>(p.variables.size());
        m_ = static_cast<std::uint32_t>(p.constraints.size());
        build();
    }

    LpSolution run() {
        LpSolution sol;
        if (!phase1(sol)) return sol;
        if (!p_.objective.empty()) {
            set_phase2_costs();
            if (!optimize(sol)) return sol;
        }
        finish(sol, LpStatus::Feasible);
        return sol;
    }

private:
    const LpProblem& p_;
    const LpSolverConfig& cfg_;
    std::uint32_t n_ = 0, m_ = 0, total_ = 0;
    std::vector<Column> cols_;
    std::vector<double> lo_, hi_, cost_;
    std::vector<double> rhs_;
    std::vector<VarState> state_;
    std::vector<std::uint32_t> basis_;   // column basic in each row
    std::vector<double> binv_;           // dense m x m, row-major
    std::vector<double> xb_;             // basic values per row
    std::vector<double> alpha_, y_;
    std::vector<std::uint32_t> artificial_row_;
    std::uint64_t iters_ = 0;
    bool bland_ = false;

    double& binv(std::uint32_t r, std::uint32_t c) { return binv_[r * m_ + c]; }

    double nonbasic_value(std::uint32_t j) const {
        switch (state_[j]) {
            case VarState::AtLower: return lo_[j];
            case VarState::AtUpper: return hi_[j];
            default: return 0.0;
        }
    }

    void build() {
        cols_.resize(n_ + m_);
        lo_.assign(n_ + m_, 0.0);
        hi_.assign(n_ + m_, 0.0);
        for (std::uint32_t j = 0; j < n_; ++j) {
            lo_[j] = p_.variables[j].lower;
            hi_[j] = p_.variables[j].upper;
        }
        rhs_.resize(m_);
        for (std::uint32_t i = 0; i < m_; ++i) {
            const LpConstraint& c = p_.constraints[i];
            rhs_[i] = c.rhs;
            for (const LpTerm& t : c.terms) {
                if (t.coef == 0.0) continue;
                cols_[t.var].rows.push_back(i);
                cols_[t.var].coefs.push_back(t.coef);
            }
            std::uint32_t slack = n_ + i;
            cols_[slack].rows.push_back(i);
            cols_[slack].coefs.push_back(1.0);
            switch (c.relation) {
                case Relation::Le: lo_[slack] = 0.0; hi_[slack] = kLpInf; break;
                case Relation::Ge: lo_[slack] = -kLpInf; hi_[slack] = 0.0; break;
                case Relation::Eq: lo_[slack] = 0.0; hi_[slack] = 0.0; break;
            }
        }

        state_.assign(n_ + m_, VarState::AtLower);
        for (std::uint32_t j = 0; j < n_ + m_; ++j) {
            if (std::isfinite(lo_[j])) state_[j] = VarState::AtLower;
            else if (std::isfinite(hi_[j])) state_[j] = VarState::AtUpper;
            else state_[j] = VarState::FreeZero;
        }

        // Row activity at the initial nonbasic point.
        std::vector<double> act(m_, 0.0);
        for (std::uint32_t j = 0; j < n_; ++j) {
            double v = nonbasic_value(j);
            if (v == 0.0) continue;
            const Column& col = cols_[j];
            for (std::size_t k = 0; k < col.rows.size(); ++k)
                act[col.rows[k]] += col.coefs[k] * v;
        }

        basis_.assign(m_, 0);
        xb_.assign(m_, 0.0);
        binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
        total_ = n_ + m_;
        cost_.assign(total_, 0.0);

        // Rows whose slack fits its bounds start slack-basic; the rest get a
        // signed artificial with phase-1 cost 1.
        std::vector<std::uint32_t> artificials;
        for (std::uint32_t i = 0; i < m_; ++i) {
            std::uint32_t slack = n_ + i;
            double s = rhs_[i] - act[i];
            if (s >= lo_[slack] - cfg_.tolerance && s <= hi_[slack] + cfg_.tolerance) {
                basis_[i] = slack;
                state_[slack] = VarState::Basic;
                xb_[i] = std::clamp(s, lo_[slack], hi_[slack]);
            } else {
                // Slack bounds are 0-anchored, so the nonbasic slack sits at 0
                // and the artificial absorbs the whole violation.
                state_[slack] =
                    std::isfinite(lo_[slack]) ? VarState::AtLower : VarState::AtUpper;
                double violation = s;
                std::uint32_t art = total_++;
                cols_.push_back({{i}, {violation >= 0 ? 1.0 : -1.0}});
                lo_.push_back(0.0);
                hi_.push_back(kLpInf);
                cost_.push_back(1.0);
                state_.push_back(VarState::Basic);
                basis_[i] = art;
                xb_[i] = std::abs(violation);
                artificial_row_.push_back(i);
                artificials.push_back(art);
            }
            binv(i, i) = basis_[i] == n_ + i ? 1.0 : 0.0;
        }
        // Artificial basis columns are +-1 unit vectors; the inverse entry is
        // the column's own sign.
        for (std::uint32_t a = 0; a < artificials.size(); ++a) {
            std::uint32_t art = artificials[a];
            std::uint32_t row = cols_[art].rows[0];
            binv(row, row) = cols_[art].coefs[0];
        }
    }

    double phase1_infeasibility() const {
        double total = 0.0;
        for (std::uint32_t i = 0; i < m_; ++i)
            if (basis_[i] >= n_ + m_) total += std::max(0.0, xb_[i]);
        return total;
    }

    void set_phase2_costs() {
        std::fill(cost_.begin(), cost_.end(), 0.0);
        double dir = p_.sense == LpSense::Minimize ? 1.0 : -1.0;
        for (const LpTerm& t : p_.objective) cost_[t.var] += dir * t.coef;
        // Artificials must not re-enter.
        for (std::uint32_t j = n_ + m_; j < total_; ++j)
            if (state_[j] != VarState::Basic) state_[j] = VarState::Removed;
    }

    void compute_duals() {
        y_.assign(m_, 0.0);
        for (std::uint32_t r = 0; r < m_; ++r) {
            double cb = cost_[basis_[r]];
            if (cb == 0.0) continue;
            const double* row = &binv_[static_cast<std::size_t>(r) * m_];
            for (std::uint32_t c = 0; c < m_; ++c) y_[c] += cb * row[c];
        }
    }

    double reduced_cost(std::uint32_t j) const {
        double d = cost_[j];
        const Column& col = cols_[j];
        for (std::size_t k = 0; k < col.rows.size(); ++k)
            d -= y_[col.rows[k]] * col.coefs[k];
        return d;
    }

    /// Entering column, or total_ if optimal. Direction +1 = increase.
    std::uint32_t price(int& direction) {
        std::uint32_t best = total_;
        double best_score = cfg_.tolerance;
        int best_dir = 0;
        for (std::uint32_t j = 0; j < total_; ++j) {
            VarState st = state_[j];
            if (st == VarState::Basic || st == VarState::Removed) continue;
            if (lo_[j] == hi_[j] && st != VarState::FreeZero) continue; // fixed
            double d = reduced_cost(j);
            int dir = 0;
            if (st == VarState::AtLower && d < -cfg_.tolerance) dir = +1;
            else if (st == VarState::AtUpper && d > cfg_.tolerance) dir = -1;
            else if (st == VarState::FreeZero && std::abs(d) > cfg_.tolerance)
                dir = d < 0 ? +1 : -1;
            if (dir == 0) continue;
            if (bland_) { direction = dir; return j; }
            double score = std::abs(d);
            if (score > best_score + 1e-15) {
                best_score = score;
                best = j;
                best_dir = dir;
            }
        }
        direction = best_dir;
        return best;
    }

    void ftran(std::uint32_t j) {
        alpha_.assign(m_, 0.0);
        const Column& col = cols_[j];
        for (std::size_t k = 0; k < col.rows.size(); ++k) {
            double c = col.coefs[k];
            std::uint32_t i = col.rows[k];
            for (std::uint32_t r = 0; r < m_; ++r) alpha_[r] += binv(r, i) * c;
        }
    }

    /// One pivot. Returns false when the step is unbounded.
    bool pivot(std::uint32_t enter, int dir) {
        ftran(enter);
        double limit = hi_[enter] - lo_[enter]; // bound-flip distance
        std::uint32_t leave_row = m_;           // m_ = bound flip
        double best_t = limit;
        for (std::uint32_t r = 0; r < m_; ++r) {
            double a = dir * alpha_[r];
            if (std::abs(a) <= cfg_.pivot_tolerance) continue;
            std::uint32_t b = basis_[r];
            double t;
            if (a > 0) {
                if (!std::isfinite(lo_[b])) continue;
                t = (xb_[r] - lo_[b]) / a;
            } else {
                if (!std::isfinite(hi_[b])) continue;
                t = (xb_[r] - hi_[b]) / a;
            }
            if (t < -1e-12) t = 0.0;
            bool better = t < best_t - 1e-12;
            // Deterministic tie-breaking: drive artificials out first, then
            // the lowest basic column index.
            if (!better && std::abs(t - best_t) <= 1e-12 && leave_row != m_) {
                std::uint32_t cur = basis_[leave_row], cand = basis_[r];
                bool cand_art = cand >= n_ + m_, cur_art = cur >= n_ + m_;
                if (cand_art != cur_art) better = cand_art;
                else better = cand < cur;
            } else if (leave_row == m_ && std::abs(t - best_t) <= 1e-12 &&
                       std::isfinite(best_t)) {
                better = true; // prefer a basis change over an equal bound flip
            }
            if (better) {
                best_t = t;
                leave_row = r;
            }
        }
        if (!std::isfinite(best_t)) return false;

        double t = std::max(0.0, best_t);
        if (t != 0.0)
            for (std::uint32_t r = 0; r < m_; ++r) xb_[r] -= t * dir * alpha_[r];

        if (leave_row == m_) { // bound flip
            state_[enter] =
                state_[enter] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
            return true;
        }

        std::uint32_t leave = basis_[leave_row];
        double enter_val = nonbasic_value(enter) + dir * t;
        double a = alpha_[leave_row];
        // Leaving variable lands on the bound the ratio test chose.
        state_[leave] = (dir * a > 0) ? VarState::AtLower : VarState::AtUpper;
        if (leave >= n_ + m_) state_[leave] = VarState::Removed; // artificial out
        basis_[leave_row] = enter;
        state_[enter] = VarState::Basic;
        xb_[leave_row] = enter_val;

        // Rank-1 update of the dense inverse.
        double inv = 1.0 / a;
        double* prow = &binv_[static_cast<std::size_t>(leave_row) * m_];
        for (std::uint32_t c = 0; c < m_; ++c) prow[c] *= inv;
        for (std::uint32_t r = 0; r < m_; ++r) {
            if (r == leave_row) continue;
            double f = alpha_[r];
            if (std::abs(f) < 1e-14) continue;
            double* row = &binv_[static_cast<std::size_t>(r) * m_];
            for (std::uint32_t c = 0; c < m_; ++c) row[c] -= f * prow[c];
        }
        return true;
    }

    double current_objective() const {
        double obj = 0.0;
        for (std::uint32_t r = 0; r < m_; ++r) obj += cost_[basis_[r]] * xb_[r];
        for (std::uint32_t j = 0; j < total_; ++j)
            if (state_[j] != VarState::Basic && cost_[j] != 0.0)
                obj += cost_[j] * nonbasic_value(j);
        return obj;
    }

    /// Core loop; leaves the basis optimal for the current costs.
    bool optimize(LpSolution& sol) {
        double last = current_objective();
        std::uint64_t since_progress = 0;
        const std::uint64_t stall_limit = 64 + 2ULL * m_;
        for (;;) {
            if (iters_ >= cfg_.max_iterations) {
                finish(sol, LpStatus::IterationLimit);
                return false;
            }
            compute_duals();
            int dir = 0;
            std::uint32_t enter = price(dir);
            if (enter == total_) return true; // optimal
            if (!pivot(enter, dir)) {
                finish(sol, LpStatus::Unbounded);
                return false;
            }
            ++iters_;
            double obj = current_objective();
            if (obj < last - cfg_.tolerance) {
                last = obj;
                since_progress = 0;
                bland_ = false;
            } else if (++since_progress > stall_limit) {
                bland_ = true; // finite by Bland's rule
            }
        }
    }

    bool phase1(LpSolution& sol) {
        if (artificial_row_.empty()) return true;
        if (!optimize(sol)) return false;
        if (phase1_infeasibility() > 1e-7) {
            finish(sol, LpStatus::Infeasible);
            for (std::uint32_t i = 0; i < m_; ++i)
                if (basis_[i] >= n_ + m_ && xb_[i] > 1e-7) sol.infeasible_rows.push_back(i);
            return false;
        }
        // Artificials still basic sit at ~0; freeze them so phase 2 cannot
        // move them away.
        for (std::uint32_t i = 0; i < m_; ++i)
            if (basis_[i] >= n_ + m_) {
                hi_[basis_[i]] = 0.0;
                xb_[i] = 0.0;
            }
        for (std::uint32_t j = n_ + m_; j < total_; ++j)
            if (state_[j] != VarState::Basic) state_[j] = VarState::Removed;
        std::fill(cost_.begin(), cost_.end(), 0.0);
        bland_ = false;
        return true;
    }

    void finish(LpSolution& sol, LpStatus status) {
        sol.status = status;
        sol.iterations = iters_;
        sol.values.assign(n_, 0.0);
        for (std::uint32_t j = 0; j < n_; ++j)
            if (state_[j] != VarState::Basic) sol.values[j] = nonbasic_value(j);
        for (std::uint32_t r = 0; r < m_; ++r)
            if (basis_[r] < n_) sol.values[basis_[r]] = xb_[r];
        double obj = 0.0;
        for (const LpTerm& t : p_.objective) obj += t.coef * sol.values[t.var];
        sol.objective = obj;
    }
};

std::int64_t to_units_exact(double v, double grid, bool& ok) {
    double scaled = v / grid;
    double rounded = std::nearbyint(scaled);
    if (std::abs(scaled - rounded) > 1e-6) ok = false;
    return static_cast<std::int64_t>(rounded);
}

} // namespace

std::vector<std::uint32_t> exact_violations(const LpProblem& problem,
                                            const std::vector<std::int64_t>& units,
                                            double grid) {
    std::vector<std::uint32_t> out;
    bool ok = true;
    for (std::uint32_t i = 0; i < problem.constraints.size(); ++i) {
        const LpConstraint& c = problem.constraints[i];
        std::int64_t lhs = 0;
        for (const LpTerm& t : c.terms)
            lhs += to_units_exact(t.coef, 1.0, ok) * units[t.var];
        std::int64_t rhs = to_units_exact(c.rhs, grid, ok);
        bool sat = c.relation == Relation::Le   ? lhs <= rhs
                   : c.relation == Relation::Ge ? lhs >= rhs
                                                : lhs == rhs;
        if (!sat) out.push_back(i);
    }
    std::uint32_t bound_base = static_cast<std::uint32_t>(problem.constraints.size());
    for (std::uint32_t j = 0; j < problem.variables.size(); ++j) {
        const LpVariable& v = problem.variables[j];
        if (std::isfinite(v.lower) && units[j] < to_units_exact(v.lower, grid, ok))
            out.push_back(bound_base + j);
        else if (std::isfinite(v.upper) && units[j] > to_units_exact(v.upper, grid, ok))
            out.push_back(bound_base + j);
    }
    if (!ok)
        fail(ErrorCode::MalformedProblem,
             "exact verification requires grid-integral constraint data");
    return out;
}

namespace {

bool snap_and_verify(const LpProblem& problem, const LpSolverConfig& config, LpSolution& sol) {
    sol.snapped_units.assign(problem.variables.size(), 0);
    for (std::uint32_t j = 0; j < problem.variables.size(); ++j)
        sol.snapped_units[j] = std::llround(sol.values[j] / config.snap_grid);
    return exact_violations(problem, sol.snapped_units, config.snap_grid).empty();
}

} // namespace

LpSolution solve(const LpProblem& problem, const LpSolverConfig& config) {
    problem.check_well_formed();
    Simplex simplex(problem, config);
    LpSolution sol = simplex.run();
    if (sol.status != LpStatus::Feasible || config.snap_grid <= 0.0) return sol;

    if (snap_and_verify(problem, config, sol)) {
        sol.snapped = true;
        return sol;
    }

    // Grid repair: pin off-grid variables to rounded values one at a time and
    // re-solve; fall back to the opposite rounding when pinning kills
    // feasibility. Realizable instances admit a grid witness, so this nearly
    // always lands; when it does not, the unsnapped solution is kept and
    // flagged.
    LpProblem work = problem;
    std::uint32_t passes = 0;
    LpSolution cur = sol;
    for (;;) {
        std::uint32_t worst = static_cast<std::uint32_t>(work.variables.size());
        double worst_frac = 1e-6;
        for (std::uint32_t j = 0; j < work.variables.size(); ++j) {
            if (work.variables[j].lower == work.variables[j].upper) continue;
            double scaled = cur.values[j] / config.snap_grid;
            double frac = std::abs(scaled - std::llround(scaled));
            if (frac > worst_frac) {
                worst_frac = frac;
                worst = j;
            }
        }
        if (worst == work.variables.size()) break; // everything on-grid
        if (++passes > config.max_repair_passes) break;

        double scaled = cur.values[worst] / config.snap_grid;
        double nearest = static_cast<double>(std::llround(scaled));
        double lo_bound = work.variables[worst].lower;
        double hi_bound = work.variables[worst].upper;
        bool pinned = false;
        for (double cand : {nearest, nearest > scaled ? std::floor(scaled)
                                                      : std::ceil(scaled)}) {
            double v = cand * config.snap_grid;
            if (v < lo_bound - 1e-12 || v > hi_bound + 1e-12) continue;
            work.variables[worst].lower = v;
            work.variables[worst].upper = v;
            Simplex retry(work, config);
            LpSolution next = retry.run();
            if (next.status == LpStatus::Feasible) {
                cur = next;
                pinned = true;
                break;
            }
            work.variables[worst].lower = lo_bound;
            work.variables[worst].upper = hi_bound;
        }
        if (!pinned) {
            // Pin to the current fractional value so the loop moves on; this
            // variable simply stays off-grid.
            work.variables[worst].lower = cur.values[worst];
            work.variables[worst].upper = cur.values[worst];
        }
    }
    cur.infeasible_rows.clear();
    sol.values = cur.values;
    sol.iterations += cur.iterations;
    if (snap_and_verify(problem, config, sol)) sol.snapped = true;
    return sol;
}

} // namespace clt
