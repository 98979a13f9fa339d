// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#include "itprove/lp_prover.hpp"

#include <algorithm>
#include <cmath>

#include "itprove/shannon_cone.hpp"
#include "itprove/simplex.hpp"

namespace itp {

double evaluate_homogeneous(const EntropyExpr& e, const Counterexample& p) {
    double v = e.constant.get_d() * p.scale;
    for (const auto& [m, c] : e.h) v += c.get_d() * p.h[m];
    for (const auto& [r, c] : e.reals) v += c.get_d() * (r < p.reals.size() ? p.reals[r] : 0.0);
    return v;
}

namespace {

Rational max_abs_coeff(const EntropyExpr& e) {
    Rational m = abs(e.constant);
    for (const auto& [k, c] : e.h) m = std::max(m, Rational(abs(c)));
    for (const auto& [k, c] : e.reals) m = std::max(m, Rational(abs(c)));
    return m;
}

std::size_t real_count(const CiiQuery& q) {
    std::size_t r = q.context.num_reals();
    auto bump = [&](const EntropyExpr& e) {
        if (!e.reals.empty()) r = std::max(r, e.reals.rbegin()->first + 1);
    };
    bump(q.goal);
    for (const auto& row : q.constraints.rows) bump(row);
    return r;
}

// Coordinates of the homogenized primal space: h_1 .. h_{2^n-1}, then one
// column per real known to be nonnegative (a premise row c*R >= 0) or a
// pair R+, R- otherwise, then the homogenizing t when constants occur.
struct Layout {
    std::size_t n = 0, reals = 0;
    bool has_t = false;
    std::vector<std::size_t> pos;
    std::vector<std::optional<std::pair<std::size_t, Rational>>> sign_row;  // (row, c) for c*R >= 0
    std::size_t t_pos = 0;
    std::size_t hsize() const { return full_mask(n); }
    bool nonneg(std::size_t r) const { return sign_row[r].has_value(); }
    std::size_t t() const { return t_pos; }
    std::size_t size() const { return t_pos + (has_t ? 1 : 0); }
};

Layout make_layout(const CiiQuery& q) {
    Layout L;
    L.n = q.context.num_rvs();
    L.reals = real_count(q);
    L.has_t = q.goal.constant != 0;
    L.sign_row.resize(L.reals);
    for (std::size_t j = 0; j < q.constraints.rows.size(); ++j) {
        const auto& row = q.constraints.rows[j];
        L.has_t = L.has_t || row.constant != 0;
        if (row.h.empty() && row.constant == 0 && row.reals.size() == 1 && row.reals.begin()->second > 0) {
            auto [r, c] = *row.reals.begin();
            if (!L.sign_row[r]) L.sign_row[r] = std::make_pair(j, c);
        }
    }
    std::size_t next = L.hsize();
    for (std::size_t r = 0; r < L.reals; ++r) {
        L.pos.push_back(next);
        next += L.nonneg(r) ? 1 : 2;
    }
    L.t_pos = next;
    return L;
}

using SparseCol = std::vector<std::pair<Eigen::Index, double>>;

SparseCol coordinates(const EntropyExpr& e, const Layout& L, double scale) {
    SparseCol out;
    for (const auto& [m, c] : e.h) out.emplace_back(static_cast<Eigen::Index>(m) - 1, c.get_d() * scale);
    for (const auto& [r, c] : e.reals) {
        out.emplace_back(static_cast<Eigen::Index>(L.pos[r]), c.get_d() * scale);
        if (!L.nonneg(r)) out.emplace_back(static_cast<Eigen::Index>(L.pos[r] + 1), -c.get_d() * scale);
    }
    if (e.constant != 0) out.emplace_back(static_cast<Eigen::Index>(L.t()), e.constant.get_d() * scale);
    return out;
}

struct BuiltLp {
    StandardLp lp;
    Layout layout;
    std::size_t n_elem = 0;
    std::vector<std::size_t> premise_index;  // LP column -> constraint row
    std::vector<Rational> premise_scale;     // row was divided by this
    Rational goal_scale;
    Eigen::Index nu = 0;
};

BuiltLp build_lp(const CiiQuery& q) {
    BuiltLp B;
    B.layout = make_layout(q);
    const Layout& L = B.layout;

    const auto& cone = elemental_inequalities(L.n);
    B.n_elem = cone.size();
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::Index col = 0;
    for (const auto& r : cone.rows) {
        for (int k = 0; k < r.size; ++k)
            trip.emplace_back(static_cast<Eigen::Index>(r.mask[k]) - 1, col, static_cast<double>(r.sign[k]));
        ++col;
    }
    for (std::size_t j = 0; j < q.constraints.rows.size(); ++j) {
        const auto& row = q.constraints.rows[j];
        Rational s = max_abs_coeff(row);
        if (s == 0) continue;
        for (auto [i, v] : coordinates(row, L, 1.0 / s.get_d())) trip.emplace_back(i, col, v);
        B.premise_index.push_back(j);
        B.premise_scale.push_back(s);
        ++col;
    }
    // bound multipliers for the sign-constrained coordinates (reals, t)
    for (std::size_t i = L.hsize(); i < L.size(); ++i) trip.emplace_back(static_cast<Eigen::Index>(i), col++, 1.0);
    // nu times the normalization functional H(full) + sum of real columns + t
    B.nu = col;
    if (L.n > 0) trip.emplace_back(static_cast<Eigen::Index>(L.hsize()) - 1, col, -1.0);
    for (std::size_t i = L.hsize(); i < L.size(); ++i) trip.emplace_back(static_cast<Eigen::Index>(i), col, -1.0);
    ++col;

    const auto m = static_cast<Eigen::Index>(L.size());
    B.lp.A.resize(m, col);
    B.lp.A.setFromTriplets(trip.begin(), trip.end());
    B.lp.b = Eigen::VectorXd::Zero(m);
    B.goal_scale = max_abs_coeff(q.goal);
    for (auto [i, v] : coordinates(q.goal, L, 1.0 / B.goal_scale.get_d())) B.lp.b[i] += v;
    B.lp.c = Eigen::VectorXd::Zero(col);
    B.lp.c[B.nu] = 1.0;
    return B;
}

EntropyExpr combine(const CiiQuery& q, const DualCertificate& cert, bool& ok) {
    ok = true;
    const auto& cone = elemental_inequalities(q.context.num_rvs());
    EntropyExpr sum;
    for (const auto& [k, lam] : cert.elemental) {
        if (k >= cone.size() || lam < 0) {
            ok = false;
            return sum;
        }
        const auto& r = cone.rows[k];
        for (int i = 0; i < r.size; ++i) sum.add_h(r.mask[i], lam * r.sign[i]);
    }
    for (const auto& [j, lam] : cert.premises) {
        if (j >= q.constraints.rows.size() || lam < 0) {
            ok = false;
            return sum;
        }
        sum += lam * q.constraints.rows[j];
    }
    return sum;
}

// Completes a certificate from its multipliers: the slack is whatever
// constant is left over, and a positive residual on a nonnegative real is
// charged to that real's sign row.
std::optional<DualCertificate> finalize(const CiiQuery& q, const Layout& L, DualCertificate cert) {
    bool ok;
    EntropyExpr diff = q.goal - combine(q, cert, ok);
    if (!ok || !diff.h.empty() || diff.constant < 0) return std::nullopt;
    for (const auto& [r, c] : diff.reals) {
        if (r >= L.reals || !L.nonneg(r) || c < 0) return std::nullopt;
        const auto& [row, coef] = *L.sign_row[r];
        auto it = std::find_if(cert.premises.begin(), cert.premises.end(), [&](const auto& p) { return p.first == row; });
        if (it == cert.premises.end())
            cert.premises.emplace_back(row, c / coef);
        else
            it->second += c / coef;
    }
    std::sort(cert.premises.begin(), cert.premises.end());
    cert.slack = diff.constant;
    return cert;
}

std::optional<DualCertificate> rationalize_solution(const CiiQuery& q, const BuiltLp& B, const Eigen::VectorXd& y,
                                                    std::int64_t max_den) {
    DualCertificate cert;
    for (std::size_t k = 0; k < B.n_elem; ++k) {
        double v = y[static_cast<Eigen::Index>(k)];
        if (v <= 1e-10) continue;
        Rational lam = rationalize(v, max_den) * B.goal_scale;
        if (lam > 0) cert.elemental.emplace_back(k, lam);
    }
    for (std::size_t p = 0; p < B.premise_index.size(); ++p) {
        double v = y[static_cast<Eigen::Index>(B.n_elem + p)];
        if (v <= 1e-10) continue;
        Rational lam = rationalize(v, max_den) * B.goal_scale / B.premise_scale[p];
        if (lam > 0) cert.premises.emplace_back(B.premise_index[p], lam);
    }
    return finalize(q, B.layout, std::move(cert));
}

// Exact dense Gauss-Jordan on the support; free variables are set to zero.
std::optional<std::vector<Rational>> solve_exact(const std::vector<std::map<std::size_t, Rational>>& cols,
                                                 const std::map<std::size_t, Rational>& rhs) {
    std::map<std::size_t, std::size_t> row_of;
    for (const auto& c : cols)
        for (const auto& [i, v] : c) row_of.emplace(i, 0);
    for (const auto& [i, v] : rhs) row_of.emplace(i, 0);
    std::size_t m = 0;
    for (auto& [i, r] : row_of) r = m++;
    const std::size_t k = cols.size();
    std::vector<std::vector<Rational>> M(m, std::vector<Rational>(k + 1));
    for (std::size_t j = 0; j < k; ++j)
        for (const auto& [i, v] : cols[j]) M[row_of[i]][j] = v;
    for (const auto& [i, v] : rhs) M[row_of[i]][k] = v;

    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t j = 0; j < k && r < m; ++j) {
        std::size_t p = r;
        while (p < m && M[p][j] == 0) ++p;
        if (p == m) continue;
        std::swap(M[p], M[r]);
        Rational inv = 1 / M[r][j];
        for (std::size_t c = j; c <= k; ++c) M[r][c] *= inv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || M[i][j] == 0) continue;
            Rational f = M[i][j];
            for (std::size_t c = j; c <= k; ++c)
                if (M[r][c] != 0) M[i][c] -= f * M[r][c];
        }
        pivot_col.push_back(j);
        ++r;
    }
    for (std::size_t i = r; i < m; ++i)
        if (M[i][k] != 0) return std::nullopt;
    std::vector<Rational> x(k);
    for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = M[i][k];
    return x;
}

std::optional<DualCertificate> exact_support_solve(const CiiQuery& q, const BuiltLp& B, const Eigen::VectorXd& y) {
    const auto& cone = elemental_inequalities(q.context.num_rvs());
    const std::size_t H = B.layout.hsize();
    // coordinates: h masks -> m-1, real r -> H + r, constant -> H + reals
    auto key_of = [&](const EntropyExpr& e) {
        std::map<std::size_t, Rational> c;
        for (const auto& [m, v] : e.h) c[m - 1] = v;
        for (const auto& [rr, v] : e.reals) c[H + rr] = v;
        if (e.constant != 0) c[H + B.layout.reals] = e.constant;
        return c;
    };
    std::vector<std::map<std::size_t, Rational>> cols;
    std::vector<std::pair<bool, std::size_t>> what;  // (is_premise, index)
    for (std::size_t k = 0; k < B.n_elem; ++k) {
        if (y[static_cast<Eigen::Index>(k)] <= 1e-9) continue;
        cols.push_back(key_of(cone.rows[k].to_expr()));
        what.emplace_back(false, k);
    }
    for (std::size_t p = 0; p < B.premise_index.size(); ++p) {
        if (y[static_cast<Eigen::Index>(B.n_elem + p)] <= 1e-9) continue;
        cols.push_back(key_of(q.constraints.rows[B.premise_index[p]]));
        what.emplace_back(true, B.premise_index[p]);
    }
    if (B.layout.has_t) cols.push_back({{H + B.layout.reals, Rational(1)}});  // slack
    for (std::size_t r = 0; r < B.layout.reals; ++r)
        if (B.layout.nonneg(r)) cols.push_back({{H + r, Rational(1)}});
    auto x = solve_exact(cols, key_of(q.goal));
    if (!x) return std::nullopt;
    DualCertificate cert;
    for (std::size_t i = 0; i < what.size(); ++i) {
        if ((*x)[i] < 0) return std::nullopt;
        if ((*x)[i] == 0) continue;
        (what[i].first ? cert.premises : cert.elemental).emplace_back(what[i].second, (*x)[i]);
    }
    return finalize(q, B.layout, std::move(cert));
}

Counterexample extract_point(const BuiltLp& B, const LpSolution& sol) {
    const Layout& L = B.layout;
    Counterexample cx;
    cx.h = EntropicVector(L.n);
    for (std::size_t i = 0; i < L.hsize(); ++i) cx.h.values[static_cast<Eigen::Index>(i)] = -sol.duals[static_cast<Eigen::Index>(i)];
    cx.reals.resize(L.reals);
    for (std::size_t r = 0; r < L.reals; ++r) {
        const auto p = static_cast<Eigen::Index>(L.pos[r]);
        cx.reals[r] = L.nonneg(r) ? std::max(0.0, -sol.duals[p]) : -sol.duals[p] + sol.duals[p + 1];
    }
    cx.scale = L.has_t ? std::max(0.0, -sol.duals[static_cast<Eigen::Index>(L.t())]) : 0.0;
    cx.objective = -sol.objective * B.goal_scale.get_d();
    return cx;
}

}  // namespace

CiiResult prove_cii(const CiiQuery& q, const LpOptions& opts, LpStats* stats) {
    CiiResult res;
    if (q.goal.h.empty() && q.goal.reals.empty() && q.goal.constant >= 0) {
        res.proved = true;
        res.certificate.slack = q.goal.constant;
        return res;
    }
    BuiltLp B = build_lp(q);
    SimplexOptions sopts;
    for (int attempt = 0; attempt < 2; ++attempt) {
        if (stats) ++stats->lp_solves;
        LpSolution sol = solve_standard_lp(B.lp, sopts);
        if (sol.status != LpStatus::Optimal)
            throw SolverFailure(std::string("LP solver returned status ") + to_string(sol.status));
        const double nu = sol.y[B.nu];
        if (nu > opts.tolerance) {
            res.proved = false;
            res.counterexample = extract_point(B, sol);
            return res;
        }
        if (auto cert = rationalize_solution(q, B, sol.y, opts.max_denominator)) {
            res.proved = true;
            res.certificate = std::move(*cert);
            return res;
        }
        if (stats) ++stats->exact_fallbacks;
        if (auto cert = exact_support_solve(q, B, sol.y)) {
            res.proved = true;
            res.certificate = std::move(*cert);
            return res;
        }
        sopts.feasibility_tol = 1e-12;
        sopts.optimality_tol = 1e-12;
        sopts.pivot_tol = 1e-13;
        sopts.refactor_every = 16;
    }
    throw SolverFailure("no exact certificate could be recovered from the LP optimum");
}

bool verify_certificate(const CiiQuery& q, const DualCertificate& cert) {
    if (cert.slack < 0) return false;
    bool ok;
    EntropyExpr sum = combine(q, cert, ok);
    if (!ok) return false;
    sum.constant += cert.slack;
    return sum == q.goal;
}

SystemResult prove_system(const VarContext& ctx, const IneqSystem& constraints, const IneqSystem& goals,
                          const LpOptions& opts, LpStats* stats) {
    SystemResult out;
    CiiQuery q{ctx, constraints, {}};
    for (std::size_t i = 0; i < goals.rows.size(); ++i) {
        q.goal = goals.rows[i];
        CiiResult r = prove_cii(q, opts, stats);
        if (!r.proved) {
            out.proved = false;
            out.failed_row = i;
            out.counterexample = std::move(r.counterexample);
            out.certificates.clear();
            return out;
        }
        out.certificates.push_back(std::move(r.certificate));
    }
    out.proved = true;
    return out;
}

void CertCache::add(const Counterexample& p) {
    if (capacity_ == 0) return;
    std::lock_guard lock(mu_);
    if (points_.size() >= capacity_) points_.pop_front();
    points_.push_back(p);
}

std::size_t CertCache::size() const {
    std::lock_guard lock(mu_);
    return points_.size();
}

void CertCache::clear() {
    std::lock_guard lock(mu_);
    points_.clear();
}

std::vector<Counterexample> CertCache::snapshot() const {
    std::lock_guard lock(mu_);
    return {points_.begin(), points_.end()};
}

namespace {

bool shape_fits(const EntropyExpr& e, const Counterexample& p) {
    if (e.support() & ~full_mask(p.h.n)) return false;
    if (!e.reals.empty() && e.reals.rbegin()->first >= p.reals.size()) return false;
    return true;
}

}  // namespace

bool CertCache::rejects(const EntropyExpr& goal, const std::vector<EntropyExpr>& rows, double threshold) const {
    const double bound = -threshold * max_abs_coeff(goal).get_d();
    std::lock_guard lock(mu_);
    for (const auto& p : points_) {
        if (!shape_fits(goal, p)) continue;
        if (evaluate_homogeneous(goal, p) >= bound) continue;
        bool feasible = true;
        for (const auto& r : rows) {
            if (!shape_fits(r, p) || evaluate_homogeneous(r, p) < -1e-9) {
                feasible = false;
                break;
            }
        }
        if (feasible) return true;
    }
    return false;
}

CacheVerdict cached_check(const EntropyExpr& goal, const CertCache& cache, double eps) {
    for (const auto& p : cache.snapshot())
        if (shape_fits(goal, p) && evaluate_homogeneous(goal, p) < -eps) return CacheVerdict::RejectedByCache;
    return CacheVerdict::Unknown;
}

}  // namespace itp
