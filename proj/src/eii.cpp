// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#include "itprove/eii.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "itprove/shannon_cone.hpp"

namespace itp {

namespace {

void check_rows(const IneqSystem& s, std::size_t nvars, std::size_t reals, const char* what) {
    for (const auto& row : s.rows) {
        if (row.support() & ~full_mask(nvars))
            throw std::invalid_argument(std::string(what) + " row uses a variable outside its context");
        if (!row.reals.empty() && row.reals.rbegin()->first >= reals)
            throw std::invalid_argument(std::string(what) + " row uses an undeclared real variable");
    }
}

std::vector<std::string> numbered(const std::string& stem, std::size_t k) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= k; ++i) out.push_back(stem + std::to_string(i));
    return out;
}

void add_eq(IneqSystem& s, const EntropyExpr& e) {
    if (!e.is_zero()) s.add_eq(e);
}

}  // namespace

void Eii::validate() const {
    (void)full();  // throws on clashes
    check_rows(premise, n(), reals(), "premise");
    check_rows(consequence, n() + l(), reals(), "consequence");
}

VarContext Eip::full() const {
    VarContext c = base.with_rvs(aux);
    return c.with_reals(aux_reals);
}

void Eip::validate() const {
    const VarContext f = full();
    check_rows(system, f.num_rvs(), f.num_reals(), "region");
}

IneqSystem canonical(const IneqSystem& s) {
    std::vector<EntropyExpr> rows;
    for (const auto& r : s.rows)
        if (!r.is_zero()) rows.push_back(r);
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return IneqSystem(std::move(rows));
}

Eii rename(const Eii& e, const std::map<std::string, std::string>& map) {
    auto sub = [&](const std::vector<std::string>& names) {
        std::vector<std::string> out;
        for (const auto& s : names) {
            auto it = map.find(s);
            out.push_back(it == map.end() ? s : it->second);
        }
        return out;
    };
    Eii out = e;
    out.base = VarContext(sub(e.base.rvs()), sub(e.base.reals()));
    out.aux = sub(e.aux);
    out.validate();
    return out;
}

Eii copy_lemma(std::size_t n, std::size_t l) {
    Eii e;
    auto xs = numbered("X", n);
    auto ys = numbered("Y", l);
    std::vector<std::string> base = xs;
    base.insert(base.end(), ys.begin(), ys.end());
    e.base = VarContext(base);
    e.aux = numbered("U", l);
    VarContext f = e.full();
    const Mask X = full_mask(n);
    const Mask Y = full_mask(n + l) & ~X;
    const Mask U = full_mask(n + 2 * l) & ~full_mask(n + l);
    add_eq(e.consequence, mutual_info_term(f, U, Y, X));
    for (Mask s = 0; s <= X; ++s) {
        for (Mask t = 1; t < (Mask{1} << l); ++t) {
            Mask ty = t << n, tu = t << (n + l);
            add_eq(e.consequence, EntropyExpr::entropy(s | tu) - EntropyExpr::entropy(s | ty));
        }
    }
    return e;
}

Eii frl() {
    Eii e;
    e.base = VarContext({"X", "Y"});
    e.aux = {"U"};
    VarContext f = e.full();
    add_eq(e.consequence, mutual_info_term(f, 1, 4));
    add_eq(e.consequence, entropy_term(f, 2, 1 | 4));
    return e;
}

Eii frl_with_gap(const Rational& gap) {
    Eii e = frl();
    VarContext f = e.full();
    // H(Y|U) <= I(X;Y) + gap
    e.consequence.add_le(entropy_term(f, 2, 4), mutual_info_term(f, 1, 2) + EntropyExpr::constant_term(gap));
    return e;
}

Eii double_markov() {
    Eii e;
    e.base = VarContext({"X", "Y", "Z"});
    e.aux = {"U"};
    VarContext f = e.full();
    add_eq(e.premise, mutual_info_term(f, 1, 4, 2));
    add_eq(e.premise, mutual_info_term(f, 2, 4, 1));
    add_eq(e.consequence, entropy_term(f, 8, 1));
    add_eq(e.consequence, entropy_term(f, 8, 2));
    add_eq(e.consequence, mutual_info_term(f, 1 | 2, 4, 8));
    return e;
}

Rational e_over_e_minus_1() {
    // 1.5819767068693264243850020051090115585...
    return *parse_rational("1.58197670686932642438500200510901");
}

Eii infinite_divisibility(std::size_t n) {
    if (n == 0) throw std::invalid_argument("infinite_divisibility needs n >= 1");
    Eii e;
    e.base = VarContext({"X"});
    e.aux = numbered("U", n);
    VarContext f = e.full();
    const Mask U = full_mask(n + 1) & ~Mask{1};
    for (std::size_t i = 0; i < n; ++i)
        add_eq(e.consequence, Rational(static_cast<long>(n)) * EntropyExpr::entropy(bit(1 + i)) - EntropyExpr::entropy(U));
    add_eq(e.consequence, entropy_term(f, 1, U));
    Rational coeff = e_over_e_minus_1() / Rational(static_cast<long>(n));
    e.consequence.add_le(EntropyExpr::entropy(2),
                         coeff * EntropyExpr::entropy(1) + EntropyExpr::constant_term(make_rational(243, 100)));
    return e;
}

Eii conjunction(const Eii& a, const Eii& b) {
    std::set<std::string> taken;
    const VarContext af = a.full(), bf = b.full();
    for (const auto& s : af.rvs()) taken.insert(s);
    for (const auto& s : a.base.reals()) taken.insert(s);
    std::map<std::string, std::string> ren;
    auto fresh = [&](const std::string& s) {
        std::string t = s;
        while (taken.count(t)) t += "'";
        taken.insert(t);
        if (t != s) ren[s] = t;
    };
    for (const auto& s : bf.rvs()) fresh(s);
    for (const auto& s : b.base.reals()) fresh(s);
    Eii bb = rename(b, ren);

    Eii out;
    std::vector<std::string> rvs = a.base.rvs(), reals = a.base.reals();
    rvs.insert(rvs.end(), bb.base.rvs().begin(), bb.base.rvs().end());
    reals.insert(reals.end(), bb.base.reals().begin(), bb.base.reals().end());
    out.base = VarContext(rvs, reals);
    out.aux = a.aux;
    out.aux.insert(out.aux.end(), bb.aux.begin(), bb.aux.end());
    VarContext f = out.full();

    for (const auto& r : a.premise.rows) out.premise.add_ge(embed_expr(r, a.base, out.base));
    for (const auto& r : bb.premise.rows) out.premise.add_ge(embed_expr(r, bb.base, out.base));
    const VarContext bbf = bb.full();
    for (const auto& r : a.consequence.rows) out.consequence.add_ge(embed_expr(r, af, f));
    for (const auto& r : bb.consequence.rows) out.consequence.add_ge(embed_expr(r, bbf, f));

    const Mask X = f.mask_of(a.base.rvs()), Y = f.mask_of(bb.base.rvs());
    const Mask U = f.mask_of(a.aux), V = f.mask_of(bb.aux);
    if (U) add_eq(out.consequence, mutual_info_term(f, U, Y, X));
    if (V) add_eq(out.consequence, mutual_info_term(f, V, X | U, Y));
    out.validate();
    return out;
}

Eii quantity_inequality_to_eii(const VarContext& base, const InfoQuantity& lhs, const InfoQuantity& rhs,
                               const IneqSystem& premise) {
    const VarContext lctx = base.with_rvs(lhs.aux);
    std::set<std::string> taken(lctx.rvs().begin(), lctx.rvs().end());
    taken.insert(base.reals().begin(), base.reals().end());
    std::vector<std::string> raux;
    for (const auto& s : rhs.aux) {
        std::string t = s;
        while (taken.count(t)) t += "'";
        taken.insert(t);
        raux.push_back(t);
    }
    Eii e;
    e.base = lctx;
    e.aux = raux;
    VarContext f = e.full();
    // rhs context with renamed auxiliaries, aligned by position
    std::vector<std::string> rnames = base.rvs();
    rnames.insert(rnames.end(), raux.begin(), raux.end());
    VarContext rctx_renamed(rnames, base.reals());

    for (const auto& r : premise.rows) e.premise.add_ge(embed_expr(r, base, e.base));
    for (const auto& r : lhs.constraints.rows) e.premise.add_ge(embed_expr(r, lctx, e.base));
    for (const auto& r : rhs.constraints.rows) e.consequence.add_ge(embed_expr(r, rctx_renamed, f));
    e.consequence.add_ge(embed_expr(lhs.objective, lctx, f) - embed_expr(rhs.objective, rctx_renamed, f));
    e.validate();
    return e;
}

std::vector<RealColumn> encode_reals(const Eii& e) {
    std::vector<RealColumn> out;
    for (std::size_t r = 0; r < e.reals(); ++r) {
        RealColumn c;
        c.name = e.base.real(r);
        for (const auto& row : e.premise.rows) {
            if (row.h.empty() && row.constant == 0 && row.reals.size() == 1 && row.reals.begin()->first == r &&
                row.reals.begin()->second > 0)
                c.nonnegative = true;
        }
        c.columns = c.nonnegative ? 1 : 2;
        out.push_back(c);
    }
    return out;
}

Eii reals_as_entropies(const Eii& e) {
    auto cols = encode_reals(e);
    std::vector<std::string> extra;
    std::vector<std::pair<Mask, Mask>> image;  // (plus, minus) in the new base
    const std::size_t n = e.n();
    for (const auto& c : cols) {
        Mask p = bit(n + extra.size());
        extra.push_back(c.name + (c.nonnegative ? "_" : "_p"));
        Mask m = 0;
        if (!c.nonnegative) {
            m = bit(n + extra.size());
            extra.push_back(c.name + "_m");
        }
        image.emplace_back(p, m);
    }
    Eii out;
    out.base = VarContext(e.base.rvs()).with_rvs(extra);
    out.aux = e.aux;
    const std::size_t shift = extra.size();
    auto convert = [&](const EntropyExpr& row, bool has_aux) {
        EntropyExpr r;
        for (const auto& [m, c] : row.h) {
            Mask mb = m & full_mask(n);
            Mask ma = has_aux ? (m >> n) : 0;
            r.add_h(mb | (ma << (n + shift)), c);
        }
        for (const auto& [k, c] : row.reals) {
            r.add_h(image[k].first, c);
            if (image[k].second) r.add_h(image[k].second, -c);
        }
        r.constant = row.constant;
        return r;
    };
    for (const auto& row : e.premise.rows) out.premise.add_ge(convert(row, false));
    for (const auto& row : e.consequence.rows) out.consequence.add_ge(convert(row, true));
    out.validate();
    return out;
}

ConverseModel past_future_converse_context(const std::vector<std::string>& sequences,
                                           const std::vector<std::string>& statics,
                                           const std::vector<std::string>& extra,
                                           const std::vector<std::string>& reals) {
    if (sequences.size() < 2) throw std::invalid_argument("past/future modelling needs at least two sequences");
    std::vector<std::string> names = statics;
    names.insert(names.end(), extra.begin(), extra.end());
    for (const auto& s : sequences) {
        names.push_back(s);
        names.push_back(s + "p");
        names.push_back(s + "f");
    }
    ConverseModel m;
    m.context = VarContext(names, reals);
    const VarContext& c = m.context;
    const Mask st = c.mask_of(statics);
    for (const auto& s : sequences) {
        for (const auto& t : sequences) {
            if (s == t) continue;
            Mask sn = c.mask_of({s}), sf = c.mask_of({s + "f"});
            Mask tn = c.mask_of({t}), tp = c.mask_of({t + "p"});
            m.csiszar.add_eq(mutual_info_term(c, sf, tn, tp | st), mutual_info_term(c, tp, sn, sf | st));
        }
    }
    return m;
}

}  // namespace itp
