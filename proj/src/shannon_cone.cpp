// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#include "itprove/shannon_cone.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace itp {

EntropyExpr ElementalRow::to_expr() const {
    EntropyExpr e;
    for (int k = 0; k < size; ++k) e.add_h(mask[k], sign[k]);
    return e;
}

namespace {

ConeDescription build_cone(std::size_t n) {
    ConeDescription cone;
    cone.n = n;
    if (n == 0) return cone;
    const Mask all = full_mask(n);
    for (std::size_t i = 0; i < n; ++i) {
        ElementalRow r;
        r.mask[0] = all;
        r.sign[0] = 1;
        r.size = 1;
        Mask rest = all & ~bit(i);
        if (rest != 0) {
            r.mask[1] = rest;
            r.sign[1] = -1;
            r.size = 2;
        }
        cone.rows.push_back(r);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Mask others = all & ~bit(i) & ~bit(j);
            // ascending enumeration of subsets K of `others`
            Mask k = 0;
            while (true) {
                ElementalRow r;
                r.mask = {k | bit(i), k | bit(j), k | bit(i) | bit(j), k};
                r.sign = {1, 1, -1, -1};
                r.size = k == 0 ? 3 : 4;
                cone.rows.push_back(r);
                if (k == others) break;
                k = (k - others) & others;
            }
        }
    }
    return cone;
}

}  // namespace

const ConeDescription& elemental_inequalities(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, std::unique_ptr<ConeDescription>> memo;
    std::lock_guard lock(mu);
    auto& slot = memo[n];
    if (!slot) slot = std::make_unique<ConeDescription>(build_cone(n));
    return *slot;
}

std::size_t elemental_count(std::size_t n) {
    if (n == 0) return 0;
    if (n == 1) return 1;
    return n + (n * (n - 1) / 2) * (std::size_t{1} << (n - 2));
}

Mask CollapseMap::apply(Mask source) const {
    Mask out = 0;
    for (std::size_t k = 0; source != 0; ++k, source >>= 1)
        if (source & 1) out |= image.at(k);
    return out;
}

CollapseMap CollapseMap::identity(std::size_t n, std::size_t reals) {
    CollapseMap m;
    for (std::size_t k = 0; k < n; ++k) m.image.push_back(bit(k));
    for (std::size_t r = 0; r < reals; ++r) m.real_image.push_back(r);
    return m;
}

CollapseMap CollapseMap::assign_aux(std::size_t n, const std::vector<Mask>& aux_sets, std::size_t reals) {
    CollapseMap m = identity(n, reals);
    for (Mask s : aux_sets) m.image.push_back(s);
    return m;
}

CollapseMap CollapseMap::embedding(const VarContext& from, const VarContext& to) {
    CollapseMap m;
    for (const auto& name : from.rvs()) {
        auto k = to.rv_index(name);
        if (!k) throw InvalidIndex("variable '" + name + "' missing from target context");
        m.image.push_back(bit(*k));
    }
    for (const auto& name : from.reals()) {
        auto k = to.real_index(name);
        if (!k) throw InvalidIndex("real variable '" + name + "' missing from target context");
        m.real_image.push_back(*k);
    }
    return m;
}

EntropyExpr collapse_expr(const EntropyExpr& e, const CollapseMap& m) {
    EntropyExpr out;
    for (const auto& [s, c] : e.h) out.add_h(m.apply(s), c);
    for (const auto& [r, c] : e.reals) out.add_real(r < m.real_image.size() ? m.real_image[r] : r, c);
    out.constant = e.constant;
    return out;
}

std::vector<EntropyExpr> collapse_rows(const std::vector<EntropyExpr>& rows, const CollapseMap& m) {
    std::vector<EntropyExpr> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(collapse_expr(r, m));
    return out;
}

EntropyExpr embed_expr(const EntropyExpr& e, const VarContext& from, const VarContext& to) {
    return collapse_expr(e, CollapseMap::embedding(from, to));
}

}  // namespace itp
