// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#include "itprove/region.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "itprove/shannon_cone.hpp"

namespace itp {

namespace {

std::size_t support_size(const EntropyExpr& e) { return e.h.size() + e.reals.size(); }

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::string fresh_name(std::string s, std::set<std::string>& taken) {
    while (taken.count(s)) s += "'";
    taken.insert(s);
    return s;
}

IneqSystem remap(const IneqSystem& s, const CollapseMap& m) {
    IneqSystem out;
    for (const auto& r : s.rows) {
        EntropyExpr e = collapse_expr(r, m);
        if (!e.is_zero()) out.add_ge(std::move(e));
    }
    return out;
}

}  // namespace

const char* to_string(RegionStep::Kind k) {
    switch (k) {
        case RegionStep::Kind::RemoveRow: return "remove-row";
        case RegionStep::Kind::RemoveAuxiliary: return "remove-auxiliary";
        case RegionStep::Kind::EliminateReal: return "eliminate-real";
    }
    return "?";
}

Eii implication_eii(const Eip& p, const Eip& q) {
    if (p.base != q.base) throw std::invalid_argument("regions are over different base variables");
    p.validate();
    q.validate();
    Eip qq = q;
    for (const auto& r : q.aux_reals) qq = fourier_motzkin(qq, r, false);

    Eii e;
    e.base = VarContext(concat(p.base.rvs(), p.aux), concat(p.base.reals(), p.aux_reals));
    e.premise = p.system;
    std::set<std::string> taken(e.base.rvs().begin(), e.base.rvs().end());
    taken.insert(e.base.reals().begin(), e.base.reals().end());
    for (const auto& a : qq.aux) e.aux.push_back(fresh_name(a, taken));

    const std::size_t n = p.base.num_rvs(), l = p.aux.size();
    CollapseMap m = CollapseMap::identity(n, p.base.num_reals());
    for (std::size_t k = 0; k < qq.aux.size(); ++k) m.image.push_back(bit(n + l + k));
    e.consequence = remap(qq.system, m);
    e.validate();
    return e;
}

SearchResult eip_implies(const Eip& p, const Eip& q, const SearchOptions& opts) {
    return prove_eii(implication_eii(p, q), {}, opts);
}

Eip remove_redundant_rows(const Eip& p, const LpOptions& lp, std::vector<DroppedRow>* dropped, bool reverse_order) {
    const VarContext ctx = p.full();
    // An equality (e, -e) is one unit: it goes only when both halves follow.
    std::vector<std::vector<EntropyExpr>> units;
    const auto& src = p.system.rows;
    for (std::size_t j = 0; j < src.size(); ++j) {
        if (j + 1 < src.size() && src[j + 1] == -src[j]) {
            units.push_back({src[j], src[j + 1]});
            ++j;
        } else {
            units.push_back({src[j]});
        }
    }
    auto size_of = [](const std::vector<EntropyExpr>& u) { return support_size(u[0]); };
    for (bool again = true; again;) {
        again = false;
        std::vector<std::size_t> order(units.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return size_of(units[a]) > size_of(units[b]); });
        if (reverse_order) std::reverse(order.begin(), order.end());
        std::vector<bool> gone(units.size(), false);
        for (std::size_t k : order) {
            IneqSystem rest;
            for (std::size_t j = 0; j < units.size(); ++j)
                if (j != k && !gone[j])
                    for (const auto& r : units[j]) rest.add_ge(r);
            std::vector<DualCertificate> certs;
            for (const auto& r : units[k]) {
                CiiResult res = prove_cii({ctx, rest, r}, lp);
                if (!res.proved) break;
                certs.push_back(res.certificate);
            }
            if (certs.size() != units[k].size()) continue;
            gone[k] = true;
            again = true;
            if (dropped)
                for (std::size_t h = 0; h < certs.size(); ++h) dropped->push_back({units[k][h], certs[h], rest.rows});
        }
        std::vector<std::vector<EntropyExpr>> kept;
        for (std::size_t j = 0; j < units.size(); ++j)
            if (!gone[j]) kept.push_back(units[j]);
        units = std::move(kept);
    }
    Eip out = p;
    out.system = IneqSystem();
    for (const auto& u : units)
        for (const auto& r : u) out.system.add_ge(r);
    return out;
}

Eip fourier_motzkin(const Eip& p, const std::string& real, bool prune, const LpOptions& lp) {
    auto it = std::find(p.aux_reals.begin(), p.aux_reals.end(), real);
    if (it == p.aux_reals.end()) return p;
    const std::size_t k = static_cast<std::size_t>(it - p.aux_reals.begin());
    const std::size_t r = p.base.num_reals() + k;

    std::vector<std::pair<EntropyExpr, Rational>> lower, upper;
    std::vector<EntropyExpr> keep;
    for (const auto& row : p.system.rows) {
        const Rational c = row.real_coeff(r);
        if (c > 0) lower.emplace_back(row, c);
        else if (c < 0) upper.emplace_back(row, -c);
        else keep.push_back(row);
    }
    if (keep.size() + lower.size() * upper.size() > kFourierMotzkinRowCap)
        throw BudgetExceeded("Fourier-Motzkin elimination of " + real + " exceeds " +
                             std::to_string(kFourierMotzkinRowCap) + " rows");
    for (const auto& [lo, a] : lower)
        for (const auto& [up, b] : upper) {
            EntropyExpr e = b * lo + a * up;
            e.reals.erase(r);
            keep.push_back(std::move(e));
        }

    Eip out = p;
    out.aux_reals.erase(out.aux_reals.begin() + static_cast<long>(k));
    out.system = IneqSystem();
    for (auto& row : keep) {
        EntropyExpr e;
        e.h = std::move(row.h);
        e.constant = row.constant;
        for (const auto& [j, c] : row.reals) e.add_real(j > r ? j - 1 : j, c);
        if (!e.is_zero()) out.system.add_ge(std::move(e));
    }
    out.validate();
    return prune ? remove_redundant_rows(out, lp) : out;
}

std::optional<AuxRemoval> remove_auxiliary(const Eip& p, const std::string& aux, const SearchOptions& opts) {
    auto it = std::find(p.aux.begin(), p.aux.end(), aux);
    if (it == p.aux.end()) throw std::invalid_argument("unknown auxiliary '" + aux + "'");
    const std::size_t n = p.base.num_rvs(), l = p.aux.size(), reals = p.base.num_reals() + p.aux_reals.size();
    const std::size_t u = n + static_cast<std::size_t>(it - p.aux.begin());

    Eii e;
    e.base = VarContext(concat(p.base.rvs(), p.aux), concat(p.base.reals(), p.aux_reals));
    e.premise = p.system;
    std::set<std::string> taken(e.base.rvs().begin(), e.base.rvs().end());
    taken.insert(e.base.reals().begin(), e.base.reals().end());
    e.aux = {fresh_name(aux, taken)};
    CollapseMap to_v = CollapseMap::identity(n + l, reals);
    to_v.image[u] = bit(n + l);
    e.consequence = remap(p.system, to_v);

    SearchOptions o = opts;
    o.max_cases = 1;
    o.upper_init = {full_mask(n + l) & ~bit(u)};
    SearchResult r = prove_eii(e, {}, o);
    if (r.status == SearchStatus::BudgetExceeded) throw BudgetExceeded(r.message);
    if (!r.proved()) return std::nullopt;

    const Mask s = r.certificate->cases.leaves.at(0).assignment.at(0);
    CollapseMap sub = CollapseMap::identity(n + l, reals);
    for (std::size_t k = 0; k < n + l; ++k) {
        const Mask image = k == u ? s : bit(k);
        // close the gap left by u
        const Mask low = image & full_mask(u), high = image & ~full_mask(u + 1);
        sub.image[k] = low | (high >> 1);
    }
    AuxRemoval out;
    out.region = p;
    out.region.aux.erase(out.region.aux.begin() + static_cast<long>(u - n));
    out.region.system = remap(p.system, sub);
    out.region.validate();
    out.substitution = s;
    out.certificate = std::move(*r.certificate);
    return out;
}

RegionReport simplify(const Eip& p, const SearchOptions& opts) {
    RegionReport rep;
    rep.original = p;
    Eip cur = p;
    try {
        for (bool changed = true; changed;) {
            changed = false;
            std::vector<DroppedRow> dropped;
            Eip next = remove_redundant_rows(cur, opts.lp, &dropped);
            for (auto& d : dropped) {
                RegionStep st;
                st.kind = RegionStep::Kind::RemoveRow;
                st.detail = format_expr(d.row, cur.full()) + " >= 0";
                st.before = cur;
                st.after = next;
                st.row_certificate = d.certificate;
                rep.log.push_back(std::move(st));
            }
            cur = std::move(next);

            for (const auto& name : std::vector<std::string>(cur.aux)) {
                auto rm = remove_auxiliary(cur, name, opts);
                if (!rm) continue;
                RegionStep st;
                st.kind = RegionStep::Kind::RemoveAuxiliary;
                const VarContext ctx = VarContext(concat(cur.base.rvs(), cur.aux));
                const auto parts = ctx.names_of(rm->substitution);
                std::string set;
                for (const auto& s : parts) set += (set.empty() ? "" : ",") + s;
                st.detail = name + " = (" + set + ")";
                st.before = cur;
                st.after = rm->region;
                st.forward = rm->certificate;
                SearchResult back = eip_implies(rm->region, cur, opts);
                if (back.status == SearchStatus::BudgetExceeded) throw BudgetExceeded(back.message);
                if (back.proved()) st.reverse = *back.certificate;
                cur = rm->region;
                rep.log.push_back(std::move(st));
                changed = true;
                break;
            }
            if (changed) continue;

            for (const auto& name : std::vector<std::string>(cur.aux_reals)) {
                RegionStep st;
                st.kind = RegionStep::Kind::EliminateReal;
                st.detail = name;
                st.before = cur;
                cur = fourier_motzkin(cur, name, true, opts.lp);
                st.after = cur;
                rep.log.push_back(std::move(st));
                changed = true;
            }
        }
    } catch (const BudgetExceeded& ex) {
        rep.complete = false;
        rep.message = ex.what();
    }
    rep.simplified = cur;
    return rep;
}

}  // namespace itp
