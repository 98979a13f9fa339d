// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace itp {

/// Standard-form linear program:  minimize c'y  subject to  A y = b, y >= 0.
struct StandardLp {
    Eigen::SparseMatrix<double> A;  // column major
    Eigen::VectorXd b;
    Eigen::VectorXd c;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit, NumericalFailure };

const char* to_string(LpStatus s);

struct LpSolution {
    LpStatus status = LpStatus::NumericalFailure;
    double objective = 0;
    Eigen::VectorXd y;       // primal values
    Eigen::VectorXd duals;   // row multipliers pi with A'pi <= c at optimum
    std::vector<int> basis;  // basic column per row; -1 for an artificial
    long iterations = 0;
};

struct SimplexOptions {
    double feasibility_tol = 1e-9;
    double optimality_tol = 1e-9;
    double pivot_tol = 1e-9;
    int refactor_every = 64;
    double perturbation = 1e-7;  // relative size of the anti-degeneracy shift of b; 0 disables
    long max_iterations = 0;  // 0 -> 50 * (rows + cols)
};

/// Two-phase revised simplex with a dense basis inverse, Devex pricing and
/// Bland's rule as the anti-cycling fallback on degenerate stalls.
LpSolution solve_standard_lp(const StandardLp& lp, const SimplexOptions& opts = {});

}  // namespace itp
