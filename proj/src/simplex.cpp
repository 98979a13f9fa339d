// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#include "itprove/simplex.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/LU>

namespace itp {

const char* to_string(LpStatus s) {
    switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration-limit";
    case LpStatus::NumericalFailure: return "numerical-failure";
    }
    return "?";
}

namespace {

class RevisedSimplex {
  public:
    RevisedSimplex(const StandardLp& lp, const SimplexOptions& opts)
        : A_(lp.A), opts_(opts), m_(lp.A.rows()), n_(lp.A.cols()) {
        sign_ = Eigen::VectorXd::Ones(m_);
        b_ = lp.b;
        for (Eigen::Index i = 0; i < m_; ++i) {
            if (b_[i] < 0) {
                sign_[i] = -1;
                b_[i] = -b_[i];
            }
        }
        cost2_ = Eigen::VectorXd::Zero(n_ + m_);
        cost2_.head(n_) = lp.c;
        cost1_ = Eigen::VectorXd::Zero(n_ + m_);
        cost1_.tail(m_).setOnes();
        max_iter_ = opts.max_iterations > 0 ? opts.max_iterations : 50 * (m_ + n_) + 1000;
    }

    // Solves with b perturbed by tiny positive amounts, which breaks the
    // heavy degeneracy of sparse right-hand sides, then restores b on the
    // final basis. Returns false when the restored basis is not usable.
    bool run_perturbed(LpSolution& sol) {
        const Eigen::VectorXd b0 = b_;
        std::mt19937 rng(12345);
        std::uniform_real_distribution<double> u(0.5, 1.0);
        const double scale = opts_.perturbation * (1.0 + b_.lpNorm<Eigen::Infinity>());
        for (Eigen::Index i = 0; i < m_; ++i) b_[i] += scale * u(rng);
        LpSolution tmp = run();
        b_ = b0;
        if (tmp.status != LpStatus::Optimal) return false;
        xb_ = binv_ * b_;
        const double tol = 1e-9 * (1.0 + b_.lpNorm<Eigen::Infinity>());
        for (Eigen::Index i = 0; i < m_; ++i) {
            if (!std::isfinite(xb_[i]) || xb_[i] < -tol) return false;
            if (basis_[i] >= n_ && xb_[i] > tol) return false;
        }
        finish(sol, LpStatus::Optimal);
        return true;
    }

    LpSolution solve() {
        LpSolution sol;
        if (opts_.perturbation > 0 && run_perturbed(sol)) return sol;
        iterations_ = 0;
        singular_ = false;
        since_refactor_ = 0;
        return run();
    }

    LpSolution run() {
        LpSolution sol;
        basis_.resize(m_);
        is_basic_.assign(static_cast<std::size_t>(n_ + m_), false);
        for (Eigen::Index i = 0; i < m_; ++i) {
            basis_[i] = n_ + i;
            is_basic_[static_cast<std::size_t>(n_ + i)] = true;
        }
        binv_ = Eigen::MatrixXd::Identity(m_, m_);
        xb_ = b_;

        LpStatus st = iterate(cost1_, true);
        if (st != LpStatus::Optimal) return finish(sol, st);
        double infeas = 0;
        for (Eigen::Index i = 0; i < m_; ++i)
            if (basis_[i] >= n_) infeas += xb_[i];
        if (!std::isfinite(infeas)) return finish(sol, LpStatus::NumericalFailure);
        if (infeas > opts_.feasibility_tol * (1.0 + b_.lpNorm<Eigen::Infinity>()) * 10)
            return finish(sol, LpStatus::Infeasible);
        drive_out_artificials();
        st = iterate(cost2_, false);
        if (singular_ || !xb_.allFinite()) st = LpStatus::NumericalFailure;
        return finish(sol, st);
    }

  private:
    double column_dot(const Eigen::VectorXd& v, Eigen::Index j) const {
        if (j >= n_) return v[j - n_];
        double s = 0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(A_, j); it; ++it)
            s += v[it.row()] * sign_[it.row()] * it.value();
        return s;
    }

    Eigen::VectorXd binv_times_column(Eigen::Index j) const {
        if (j >= n_) return binv_.col(j - n_);
        Eigen::VectorXd u = Eigen::VectorXd::Zero(m_);
        for (Eigen::SparseMatrix<double>::InnerIterator it(A_, j); it; ++it)
            u.noalias() += (sign_[it.row()] * it.value()) * binv_.col(it.row());
        return u;
    }

    void refactor() {
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m_, m_);
        for (Eigen::Index i = 0; i < m_; ++i) {
            Eigen::Index j = basis_[i];
            if (j >= n_) {
                B(j - n_, i) = 1.0;
            } else {
                for (Eigen::SparseMatrix<double>::InnerIterator it(A_, j); it; ++it)
                    B(it.row(), i) = sign_[it.row()] * it.value();
            }
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
        binv_ = lu.inverse();
        if (!binv_.allFinite()) singular_ = true;
        xb_ = binv_ * b_;
        for (Eigen::Index i = 0; i < m_; ++i)
            if (xb_[i] < 0 && xb_[i] > -opts_.feasibility_tol) xb_[i] = 0;
    }

    void pivot(Eigen::Index r, Eigen::Index q, const Eigen::VectorXd& u) {
        const double ur = u[r];
        Eigen::RowVectorXd row = binv_.row(r) / ur;
        binv_.noalias() -= u * row;
        binv_.row(r) = row;
        double theta = xb_[r] / ur;
        xb_.noalias() -= theta * u;
        xb_[r] = theta;
        is_basic_[static_cast<std::size_t>(basis_[r])] = false;
        basis_[r] = q;
        is_basic_[static_cast<std::size_t>(q)] = true;
        ++since_refactor_;
        if (since_refactor_ >= opts_.refactor_every) {
            refactor();
            since_refactor_ = 0;
        }
    }

    LpStatus iterate(const Eigen::VectorXd& cost, bool phase_one) {
        int degenerate_run = 0;
        bool bland = false;
        Eigen::VectorXd cb(m_);
        const Eigen::Index limit = phase_one ? n_ + m_ : n_;
        // Devex reference weights
        weight_.assign(static_cast<std::size_t>(n_ + m_), 1.0);
        while (true) {
            if (iterations_++ > max_iter_) return LpStatus::IterationLimit;
            if (singular_) return LpStatus::NumericalFailure;
            for (Eigen::Index i = 0; i < m_; ++i) cb[i] = cost[basis_[i]];
            Eigen::VectorXd pi = binv_.transpose() * cb;

            Eigen::Index q = -1;
            double best = 0;
            for (Eigen::Index j = 0; j < limit; ++j) {
                if (is_basic_[static_cast<std::size_t>(j)]) continue;
                double d = cost[j] - column_dot(pi, j);
                if (d >= -opts_.optimality_tol) continue;
                if (bland) {
                    q = j;
                    break;
                }
                double score = d * d / weight_[static_cast<std::size_t>(j)];
                if (score > best) {
                    q = j;
                    best = score;
                }
            }
            if (q < 0) return LpStatus::Optimal;

            Eigen::VectorXd u = binv_times_column(q);
            Eigen::Index r = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            double best_pivot = 0;
            for (Eigen::Index i = 0; i < m_; ++i) {
                if (u[i] <= opts_.pivot_tol) continue;
                double ratio = std::max(xb_[i], 0.0) / u[i];
                bool better;
                if (bland) {
                    better = ratio < best_ratio - 1e-12 ||
                             (std::fabs(ratio - best_ratio) <= 1e-12 && r >= 0 && basis_[i] < basis_[r]);
                } else {
                    better = ratio < best_ratio - 1e-12 ||
                             (std::fabs(ratio - best_ratio) <= 1e-12 && u[i] > best_pivot);
                }
                if (r < 0 || better) {
                    r = i;
                    best_ratio = ratio;
                    best_pivot = u[i];
                }
            }
            if (r < 0) {
                if (!phase_one) return LpStatus::Unbounded;
                return LpStatus::NumericalFailure;
            }
            if (best_ratio <= 1e-12) {
                if (++degenerate_run > 40) bland = true;
            } else {
                degenerate_run = 0;
                bland = false;
            }
            update_weights(r, q, u, limit);
            pivot(r, q, u);
        }
    }

    void update_weights(Eigen::Index r, Eigen::Index q, const Eigen::VectorXd& u, Eigen::Index limit) {
        const double aq = u[r];
        const double wq = weight_[static_cast<std::size_t>(q)];
        Eigen::VectorXd rho = binv_.row(r).transpose();
        for (Eigen::Index j = 0; j < limit; ++j) {
            if (j == q || is_basic_[static_cast<std::size_t>(j)]) continue;
            const double a = column_dot(rho, j);
            if (a == 0) continue;
            const double ratio = a / aq;
            auto& w = weight_[static_cast<std::size_t>(j)];
            w = std::max(w, ratio * ratio * wq);
        }
        weight_[static_cast<std::size_t>(basis_[r])] = std::max(wq / (aq * aq), 1.0);
    }

    void drive_out_artificials() {
        for (Eigen::Index r = 0; r < m_; ++r) {
            if (basis_[r] < n_) continue;
            Eigen::RowVectorXd row = binv_.row(r);
            Eigen::Index q = -1;
            double best = 1e-7;
            for (Eigen::Index j = 0; j < n_; ++j) {
                if (is_basic_[static_cast<std::size_t>(j)]) continue;
                double v = std::fabs(column_dot(row.transpose(), j));
                if (v > best) {
                    best = v;
                    q = j;
                }
            }
            if (q >= 0) {
                Eigen::VectorXd u = binv_times_column(q);
                pivot(r, q, u);
            }
        }
        refactor();
        since_refactor_ = 0;
    }

    LpSolution& finish(LpSolution& sol, LpStatus st) {
        sol.status = st;
        sol.iterations = iterations_;
        sol.y = Eigen::VectorXd::Zero(n_);
        sol.basis.assign(static_cast<std::size_t>(m_), -1);
        for (Eigen::Index i = 0; i < m_; ++i) {
            if (basis_[i] < n_) {
                sol.y[basis_[i]] = std::max(xb_[i], 0.0);
                sol.basis[static_cast<std::size_t>(i)] = static_cast<int>(basis_[i]);
            }
        }
        Eigen::VectorXd cb(m_);
        for (Eigen::Index i = 0; i < m_; ++i) cb[i] = cost2_[basis_[i]];
        Eigen::VectorXd pi = binv_.transpose() * cb;
        sol.duals = pi.cwiseProduct(sign_);
        sol.objective = cost2_.head(n_).dot(sol.y);
        return sol;
    }

    const Eigen::SparseMatrix<double>& A_;
    SimplexOptions opts_;
    Eigen::Index m_, n_;
    Eigen::VectorXd sign_, b_, cost1_, cost2_;
    std::vector<Eigen::Index> basis_;
    std::vector<bool> is_basic_;
    Eigen::MatrixXd binv_;
    Eigen::VectorXd xb_;
    long iterations_ = 0;
    long max_iter_ = 0;
    int since_refactor_ = 0;
    bool singular_ = false;
    std::vector<double> weight_;
};

}  // namespace

LpSolution solve_standard_lp(const StandardLp& lp, const SimplexOptions& opts) {
    if (lp.b.size() != lp.A.rows() || lp.c.size() != lp.A.cols()) {
        LpSolution bad;
        bad.status = LpStatus::NumericalFailure;
        return bad;
    }
    RevisedSimplex solver(lp, opts);
    return solver.solve();
}

}  // namespace itp
