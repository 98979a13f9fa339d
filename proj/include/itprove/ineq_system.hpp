// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "itprove/entropy.hpp"

namespace itp {

/// Finite conjunction of "row >= 0" constraints. Equalities are stored as
/// the ordered pair (e >= 0, -e >= 0).
struct IneqSystem {
    std::vector<EntropyExpr> rows;

    IneqSystem() = default;
    explicit IneqSystem(std::vector<EntropyExpr> r) : rows(std::move(r)) {}

    std::size_t size() const { return rows.size(); }
    bool empty() const { return rows.empty(); }

    void add_ge(EntropyExpr e) { rows.push_back(std::move(e)); }
    /// lhs >= rhs
    void add_ge(const EntropyExpr& lhs, const EntropyExpr& rhs) { rows.push_back(lhs - rhs); }
    /// lhs <= rhs
    void add_le(const EntropyExpr& lhs, const EntropyExpr& rhs) { rows.push_back(rhs - lhs); }
    void add_eq(const EntropyExpr& e) {
        rows.push_back(e);
        rows.push_back(-e);
    }
    void add_eq(const EntropyExpr& lhs, const EntropyExpr& rhs) { add_eq(lhs - rhs); }
    void append(const IneqSystem& o) { rows.insert(rows.end(), o.rows.begin(), o.rows.end()); }

    friend bool operator==(const IneqSystem&, const IneqSystem&) = default;
};

}  // namespace itp
