// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include "itprove/entropy.hpp"

namespace itp {

/// Elemental inequality in compact form: up to four +-1 entropy terms.
struct ElementalRow {
    std::array<Mask, 4> mask{};
    std::array<int, 4> sign{};
    int size = 0;

    EntropyExpr to_expr() const;
};

/// Rows H(X_i | X_rest) >= 0 followed by I(X_i; X_j | X_K) >= 0 for i < j
/// and K ascending over subsets of the remaining variables.
struct ConeDescription {
    std::size_t n = 0;
    std::vector<ElementalRow> rows;

    std::size_t size() const { return rows.size(); }
};

/// Memoized per process; safe to call concurrently.
const ConeDescription& elemental_inequalities(std::size_t n);

/// Closed form n + C(n,2) 2^(n-2).
std::size_t elemental_count(std::size_t n);

/// Maps each random variable of a source context to a set of target
/// variables; a source subset maps to the union of its members' images.
/// Real variables are renamed through `real_image`.
struct CollapseMap {
    std::vector<Mask> image;
    std::vector<std::size_t> real_image;

    Mask apply(Mask source) const;

    static CollapseMap identity(std::size_t n, std::size_t reals = 0);
    /// Source (X^n, U^l) -> X^n with U_i = X_{aux_sets[i]}.
    static CollapseMap assign_aux(std::size_t n, const std::vector<Mask>& aux_sets, std::size_t reals = 0);
    /// Name-based embedding of `from` into `to`; throws InvalidIndex on a name `to` lacks.
    static CollapseMap embedding(const VarContext& from, const VarContext& to);
};

EntropyExpr collapse_expr(const EntropyExpr& e, const CollapseMap& m);
std::vector<EntropyExpr> collapse_rows(const std::vector<EntropyExpr>& rows, const CollapseMap& m);

/// Re-expresses `e` (over `from`) in the wider context `to`, aligning by name.
EntropyExpr embed_expr(const EntropyExpr& e, const VarContext& from, const VarContext& to);

}  // namespace itp
