// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#include "itprove/rules.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>

#include "itprove/shannon_cone.hpp"

namespace itp {

namespace {

constexpr std::array<const char*, 10> kRuleNames = {"Sha",  "Con", "Join", "Tran",  "Abs",
                                                    "Perm", "Elim", "CI",  "Union", "Premise"};

bool is_permutation_of_iota(const std::vector<std::size_t>& p) {
    std::vector<std::size_t> s = p;
    std::sort(s.begin(), s.end());
    for (std::size_t k = 0; k < s.size(); ++k)
        if (s[k] != k) return false;
    return true;
}

IneqSystem remap(const IneqSystem& s, const CollapseMap& m) { return IneqSystem(collapse_rows(s.rows, m)); }

Mask system_support(const IneqSystem& s) {
    Mask m = 0;
    for (const auto& r : s.rows) m |= r.support();
    return m;
}

EntropyExpr cond_entropy(Mask a, Mask given) {
    EntropyExpr e;
    e.add_h(a | given, 1);
    e.add_h(given, -1);
    return e;
}

}  // namespace

const char* to_string(Rule r) { return kRuleNames.at(static_cast<std::size_t>(r)); }

std::optional<Rule> parse_rule(const std::string& s) {
    for (std::size_t k = 0; k < kRuleNames.size(); ++k)
        if (s == kRuleNames[k]) return static_cast<Rule>(k);
    return std::nullopt;
}

bool same_eii(const Eii& a, const Eii& b) {
    return a.base == b.base && a.aux == b.aux && canonical(a.premise) == canonical(b.premise) &&
           canonical(a.consequence) == canonical(b.consequence);
}

Eii apply_rule(const ProofStep& step, const std::vector<Eii>& derived, const std::vector<Eii>& premises) {
    const std::size_t idx = derived.size();
    auto bad = [&](const std::string& msg) { return RuleViolation(idx, std::string(to_string(step.rule)) + ": " + msg); };
    if (static_cast<std::size_t>(step.rule) >= kRuleNames.size() ||
        step.payload.index() != static_cast<std::size_t>(step.rule))
        throw RuleViolation(idx, "payload does not match the rule tag");
    for (std::size_t r : step.refs)
        if (r >= idx) throw bad("reference " + std::to_string(r) + " is not an earlier step");
    auto need_refs = [&](std::size_t k) {
        if (step.refs.size() != k) throw bad("expects " + std::to_string(k) + " reference(s)");
    };
    auto ref = [&](std::size_t k) -> const Eii& { return derived[step.refs[k]]; };

    Eii out;
    try {
        switch (step.rule) {
            case Rule::Sha: {
                need_refs(0);
                const auto& p = std::get<ShaPayload>(step.payload);
                const std::size_t n = p.context.num_rvs();
                if (p.i >= n) throw bad("index out of range");
                Mask rest = p.context.full() & ~bit(p.i);
                out.base = p.context;
                if (p.j) {
                    if (*p.j >= n || *p.j == p.i) throw bad("second index invalid");
                    rest &= ~bit(*p.j);
                    out.consequence.add_ge(mutual_info_term(p.context, bit(p.i), bit(*p.j), rest));
                } else {
                    out.consequence.add_ge(entropy_term(p.context, bit(p.i), rest));
                }
                break;
            }
            case Rule::Con: {
                const auto& p = std::get<ConPayload>(step.payload);
                IneqSystem a;
                if (step.refs.size() == 1) {
                    if (!p.system.empty() || p.context != VarContext{})
                        throw bad("explicit system given together with a reference");
                    out.base = ref(0).full();
                    a = ref(0).consequence;
                } else {
                    need_refs(0);
                    out.base = p.context;
                    a = p.system;
                }
                if (p.offset.size() != p.matrix.size()) throw bad("offset length differs from matrix height");
                out.premise = a;
                for (std::size_t r = 0; r < p.matrix.size(); ++r) {
                    const auto& row = p.matrix[r];
                    if (row.size() != a.size()) throw bad("matrix width differs from the system size");
                    if (p.offset[r] < 0) throw bad("negative offset");
                    EntropyExpr e = EntropyExpr::constant_term(p.offset[r]);
                    for (std::size_t k = 0; k < row.size(); ++k) {
                        if (row[k] < 0) throw bad("negative matrix entry");
                        if (row[k] != 0) e += row[k] * a.rows[k];
                    }
                    out.consequence.add_ge(e);
                }
                break;
            }
            case Rule::Join: {
                need_refs(0);
                const auto& p = std::get<JoinPayload>(step.payload);
                out.base = p.context;
                out.aux = {p.aux};
                const Mask x = p.context.full(), u = bit(p.context.num_rvs());
                out.consequence.add_eq(cond_entropy(x, u));
                out.consequence.add_eq(cond_entropy(u, x));
                break;
            }
            case Rule::Tran: {
                need_refs(2);
                const Eii& a = ref(0);
                const Eii& b = ref(1);
                if (b.base != a.full()) throw bad("variables of the second statement do not match");
                if (canonical(b.premise) != canonical(a.consequence))
                    throw bad("premise of the second statement differs from the consequence of the first");
                out.base = a.base;
                out.premise = a.premise;
                out.aux = a.aux;
                out.aux.insert(out.aux.end(), b.aux.begin(), b.aux.end());
                out.consequence = b.consequence;
                break;
            }
            case Rule::Abs: {
                need_refs(1);
                out = ref(0);
                out.consequence.append(out.premise);
                break;
            }
            case Rule::Perm: {
                need_refs(1);
                const auto& p = std::get<PermPayload>(step.payload);
                const Eii& a = ref(0);
                const std::size_t n = a.n(), l = a.l();
                if (p.base.size() != n || !is_permutation_of_iota(p.base)) throw bad("base permutation invalid");
                if (p.aux.size() != l || !is_permutation_of_iota(p.aux)) throw bad("auxiliary permutation invalid");
                std::vector<std::string> names(n);
                CollapseMap m = CollapseMap::identity(n + l, a.reals());
                for (std::size_t i = 0; i < n; ++i) {
                    names[i] = a.base.rv(p.base[i]);
                    m.image[p.base[i]] = bit(i);
                }
                out.aux.resize(l);
                for (std::size_t k = 0; k < l; ++k) {
                    out.aux[k] = a.aux[p.aux[k]];
                    m.image[n + p.aux[k]] = bit(n + k);
                }
                out.base = VarContext(names, a.base.reals());
                out.premise = remap(a.premise, m);
                out.consequence = remap(a.consequence, m);
                break;
            }
            case Rule::Elim: {
                need_refs(1);
                const auto& p = std::get<ElimPayload>(step.payload);
                const Eii& a = ref(0);
                const std::size_t n = a.n(), l = a.l();
                const bool adding = !p.add_base.empty() || !p.add_aux.empty() || !p.add_reals.empty();
                const bool dropping = p.drop_base != 0 || p.drop_aux != 0;
                if (adding == dropping) throw bad("must either introduce or eliminate variables");
                CollapseMap m = CollapseMap::identity(n + l, a.reals());
                if (adding) {
                    out.base = a.base.with_rvs(p.add_base).with_reals(p.add_reals);
                    out.aux = a.aux;
                    out.aux.insert(out.aux.end(), p.add_aux.begin(), p.add_aux.end());
                    for (std::size_t k = 0; k < l; ++k) m.image[n + k] = bit(n + p.add_base.size() + k);
                } else {
                    if (p.drop_base > n || p.drop_aux > l) throw bad("too many variables to eliminate");
                    const std::size_t nb = n - p.drop_base, la = l - p.drop_aux;
                    const Mask removed = (full_mask(n) & ~full_mask(nb)) | (full_mask(n + l) & ~full_mask(n + la));
                    if ((system_support(a.premise) | system_support(a.consequence)) & removed)
                        throw bad("eliminated variable occurs in the statement");
                    std::vector<std::string> names(a.base.rvs().begin(), a.base.rvs().begin() + nb);
                    out.base = VarContext(names, a.base.reals());
                    out.aux.assign(a.aux.begin(), a.aux.begin() + la);
                    for (std::size_t k = 0; k < la; ++k) m.image[n + k] = bit(nb + k);
                }
                out.premise = remap(a.premise, m);
                out.consequence = remap(a.consequence, m);
                break;
            }
            case Rule::CI: {
                need_refs(1);
                const auto& p = std::get<CiPayload>(step.payload);
                out = ref(0);
                if (p.interacting & ~out.base_mask()) throw bad("interacting set outside the base");
                const Mask y = out.base_mask() & ~p.interacting, u = out.aux_mask();
                for (const auto& row : out.consequence.rows)
                    for (const auto& [mask, c] : row.h)
                        if ((mask & u) && (mask & y)) throw bad("auxiliaries meet variables outside the interacting set");
                if (y && u) out.consequence.add_eq(mutual_info_term(out.full(), u, y, p.interacting));
                break;
            }
            case Rule::Union: {
                need_refs(2);
                const auto& p = std::get<UnionPayload>(step.payload);
                const Eii& a = ref(0);
                const Eii& b = ref(1);
                if (a.base != b.base || a.aux != b.aux) throw bad("variables differ between the cases");
                if (canonical(a.consequence) != canonical(b.consequence)) throw bad("consequences differ between the cases");
                const EntropyExpr& c = p.split;
                if (c.is_zero()) throw bad("zero split row");
                const EntropyExpr nc = -c;
                const IneqSystem pa = canonical(a.premise), pb = canonical(b.premise);
                std::set<EntropyExpr> common;
                for (const auto& r : pa.rows)
                    if (r != c) common.insert(r);
                for (const auto& r : pb.rows)
                    if (r != nc) common.insert(r);
                IneqSystem with_c(std::vector<EntropyExpr>(common.begin(), common.end()));
                IneqSystem with_nc = with_c;
                with_c.add_ge(c);
                with_nc.add_ge(nc);
                if (canonical(with_c) != pa || canonical(with_nc) != pb)
                    throw bad("premises are not [A; c] and [A; -c]");
                out.base = a.base;
                out.aux = a.aux;
                out.premise = IneqSystem(std::vector<EntropyExpr>(common.begin(), common.end()));
                out.consequence = a.consequence;
                break;
            }
            case Rule::Premise: {
                need_refs(0);
                const auto& p = std::get<PremisePayload>(step.payload);
                if (p.premise >= premises.size()) throw bad("unknown premise");
                const Eii& lemma = premises[p.premise];
                if (lemma.reals() != 0) throw bad("premise with real variables");
                if (p.substitution.size() != lemma.n()) throw bad("substitution size differs from the premise");
                if (p.fresh.size() != lemma.l()) throw bad("fresh name count differs from the premise");
                const std::size_t n = p.context.num_rvs();
                CollapseMap m;
                for (Mask s : p.substitution) {
                    if (!p.context.valid(s)) throw bad("substitution outside the context");
                    m.image.push_back(s);
                }
                for (std::size_t k = 0; k < lemma.l(); ++k) m.image.push_back(bit(n + k));
                out.base = p.context;
                out.aux = p.fresh;
                for (const auto& r : lemma.premise.rows) {
                    EntropyExpr e = collapse_expr(r, m);
                    if (!e.is_zero()) out.premise.add_ge(e);
                }
                for (const auto& r : lemma.consequence.rows) {
                    EntropyExpr e = collapse_expr(r, m);
                    if (!e.is_zero()) out.consequence.add_ge(e);
                }
                break;
            }
        }
        out.validate();
    } catch (const RuleViolation&) {
        throw;
    } catch (const std::exception& ex) {
        throw bad(ex.what());
    }
    return out;
}

CheckResult check_proof(const ProofObject& p) {
    if (p.steps.empty()) return {false, 0, "empty proof"};
    std::vector<Eii> derived;
    derived.reserve(p.steps.size());
    try {
        for (const auto& s : p.steps) derived.push_back(apply_rule(s, derived, p.premises));
    } catch (const RuleViolation& v) {
        return {false, v.step(), v.what()};
    }
    if (!same_eii(derived.back(), p.goal))
        return {false, p.steps.size() - 1, "final conclusion does not match the goal"};
    return {true, 0, ""};
}

ProofObject worked_joint_entropy_proof() {
    const VarContext x({"X"}), xy({"X", "Y"});
    ProofObject p;
    p.goal.base = xy;
    p.goal.consequence.add_ge(EntropyExpr::entropy(3));
    IneqSystem hx;
    hx.add_ge(EntropyExpr::entropy(1));
    auto& s = p.steps;
    s.push_back({Rule::Sha, ShaPayload{x, 0, std::nullopt}, {}});                 // 0: H(X) >= 0
    s.push_back({Rule::Sha, ShaPayload{xy, 1, std::nullopt}, {}});                // 1: H(Y|X) >= 0
    s.push_back({Rule::Con, ConPayload{xy, hx, {}, {}}, {}});                     // 2: H(X) >= 0 -> True
    s.push_back({Rule::Tran, TranPayload{}, {2, 1}});                             // 3: H(X) >= 0 -> H(Y|X) >= 0
    s.push_back({Rule::Abs, AbsPayload{}, {3}});                                  // 4: ... & H(X) >= 0
    s.push_back({Rule::Con, ConPayload{{}, {}, {{1, 1}}, {0}}, {4}});             // 5: sum of the two rows
    s.push_back({Rule::Tran, TranPayload{}, {4, 5}});                             // 6: H(X) >= 0 -> H(X,Y) >= 0
    s.push_back({Rule::Elim, ElimPayload{{"Y"}, {}, {}, 0, 0}, {0}});             // 7: forall X,Y: H(X) >= 0
    s.push_back({Rule::Tran, TranPayload{}, {7, 6}});                             // 8
    return p;
}

// ---------------------------------------------------------------------------
// Certificate elaboration

namespace {

class Builder {
  public:
    Builder(ProofObject& p, const LpOptions& lp) : p_(p), lp_(lp) {}

    std::size_t add(Rule r, Payload payload, std::vector<std::size_t> refs = {}) {
        ProofStep s{r, std::move(payload), std::move(refs)};
        concl_.push_back(apply_rule(s, concl_, p_.premises));
        p_.steps.push_back(std::move(s));
        return concl_.size() - 1;
    }
    const Eii& at(std::size_t k) const { return concl_.at(k); }

    /// forall ctx: True -> the elemental row k of ctx.
    std::size_t elemental(const VarContext& ctx, std::size_t k);
    /// forall ctx: P -> G, from one certificate per row of G.
    std::size_t cii(const VarContext& ctx, const IneqSystem& p, const IneqSystem& g,
                    const std::vector<DualCertificate>& certs);
    /// forall ctx: True -> exists aux: H(U_i | X_{S_i}) = H(X_{S_i} | U_i) = 0.
    std::size_t joins(const VarContext& ctx, const std::vector<std::string>& aux, const std::vector<Mask>& sets);
    std::size_t leaf(const Eii& w, const IneqSystem& prem, const CaseLeaf& leaf);
    std::size_t cases(const Eii& w, const CaseTree& t);
    std::size_t wrap(const Eii& prev, const PremiseApplication& app, std::size_t inner);

  private:
    /// Perm step putting the base of step s into ctx order (skipped when already there).
    std::size_t to_context_order(std::size_t s, const VarContext& ctx);

    ProofObject& p_;
    const LpOptions& lp_;
    std::vector<Eii> concl_;
};

std::size_t Builder::to_context_order(std::size_t s, const VarContext& ctx) {
    const Eii& a = at(s);
    std::vector<std::size_t> perm(a.n());
    bool identity = true;
    for (std::size_t i = 0; i < a.n(); ++i) {
        perm[i] = *a.base.rv_index(ctx.rv(i));
        identity &= perm[i] == i;
    }
    if (identity) return s;
    std::vector<std::size_t> aux(a.l());
    std::iota(aux.begin(), aux.end(), 0);
    return add(Rule::Perm, PermPayload{perm, aux}, {s});
}

std::size_t Builder::elemental(const VarContext& ctx, std::size_t k) {
    const std::size_t n = ctx.num_rvs();
    const EntropyExpr e = elemental_inequalities(n).rows.at(k).to_expr();
    Mask sub = ctx.full(), mi = 0, mj = 0;
    if (k < n) {
        mi = bit(k);
    } else {
        std::vector<Mask> pos;
        for (const auto& [m, c] : e.h)
            if (c > 0) pos.push_back(m);
        const Mask given = pos.at(0) & pos.at(1);
        mi = pos[0] & ~given;
        mj = pos[1] & ~given;
        sub = pos[0] | pos[1];
    }
    auto position = [&](Mask m) { return static_cast<std::size_t>(popcount((m - 1) & sub)); };
    const VarContext sctx(ctx.names_of(sub), ctx.reals());
    std::optional<std::size_t> j;
    if (mj) j = position(mj);
    std::size_t s = add(Rule::Sha, ShaPayload{sctx, position(mi), j});
    if (sub != ctx.full()) s = add(Rule::Elim, ElimPayload{ctx.names_of(ctx.full() & ~sub), {}, {}, 0, 0}, {s});
    return to_context_order(s, ctx);
}

std::size_t Builder::cii(const VarContext& ctx, const IneqSystem& p, const IneqSystem& g,
                         const std::vector<DualCertificate>& certs) {
    if (g.empty()) return add(Rule::Con, ConPayload{ctx, p, {}, {}});
    std::set<std::size_t> used;
    for (const auto& c : certs)
        for (const auto& [k, v] : c.elemental) used.insert(k);

    // True -> [e_last; ...; e_first]
    std::vector<std::size_t> order;
    std::size_t s = 0;
    bool first = true;
    for (std::size_t k : used) {
        const std::size_t t = elemental(ctx, k);
        if (first) {
            s = t;
            first = false;
        } else {
            const std::size_t drop = add(Rule::Con, ConPayload{{}, {}, {}, {}}, {s});  // P -> True
            const std::size_t pe = add(Rule::Tran, TranPayload{}, {drop, t});         // P -> e
            const std::size_t ab = add(Rule::Abs, AbsPayload{}, {pe});                // P -> [e; P]
            s = add(Rule::Tran, TranPayload{}, {s, ab});                              // True -> [e; P]
        }
        order.insert(order.begin(), k);
    }
    if (first) s = add(Rule::Con, ConPayload{ctx, {}, {}, {}});

    const std::size_t drop = add(Rule::Con, ConPayload{ctx, p, {}, {}});  // P -> True
    const std::size_t pe = add(Rule::Tran, TranPayload{}, {drop, s});    // P -> E
    const std::size_t ab = add(Rule::Abs, AbsPayload{}, {pe});           // P -> [E; P]

    const std::size_t ne = order.size();
    std::vector<std::vector<Rational>> m;
    std::vector<Rational> offset;
    for (const auto& c : certs) {
        std::vector<Rational> row(ne + p.size(), Rational(0));
        for (const auto& [k, v] : c.elemental) {
            auto it = std::find(order.begin(), order.end(), k);
            row[static_cast<std::size_t>(it - order.begin())] += v;
        }
        for (const auto& [j, v] : c.premises) row.at(ne + j) += v;
        m.push_back(std::move(row));
        offset.push_back(c.slack);
    }
    const std::size_t con = add(Rule::Con, ConPayload{{}, {}, std::move(m), std::move(offset)}, {ab});
    const std::size_t out = add(Rule::Tran, TranPayload{}, {ab, con});
    if (canonical(at(out).consequence) != canonical(g)) throw std::logic_error("certificate elaboration mismatch");
    return out;
}

std::size_t Builder::joins(const VarContext& ctx, const std::vector<std::string>& aux, const std::vector<Mask>& sets) {
    std::size_t cur = 0;
    for (std::size_t i = 0; i < aux.size(); ++i) {
        const VarContext sctx(ctx.names_of(sets[i]), ctx.reals());
        std::size_t s = add(Rule::Join, JoinPayload{sctx, aux[i]});
        if (sets[i] != ctx.full()) s = add(Rule::Elim, ElimPayload{ctx.names_of(ctx.full() & ~sets[i]), {}, {}, 0, 0}, {s});
        s = to_context_order(s, ctx);
        if (i == 0) {
            cur = s;
            continue;
        }
        s = add(Rule::Elim, ElimPayload{std::vector<std::string>(aux.begin(), aux.begin() + i), {}, {}, 0, 0}, {s});
        const std::size_t drop = add(Rule::Con, ConPayload{{}, {}, {}, {}}, {cur});  // R -> True
        const std::size_t ri = add(Rule::Tran, TranPayload{}, {drop, s});            // R -> exists U_i: R_i
        const std::size_t ab = add(Rule::Abs, AbsPayload{}, {ri});
        cur = add(Rule::Tran, TranPayload{}, {cur, ab});
    }
    return cur;
}

std::size_t Builder::leaf(const Eii& w, const IneqSystem& prem, const CaseLeaf& lf) {
    const CollapseMap cm = CollapseMap::assign_aux(w.n(), lf.assignment, w.reals());
    IneqSystem collapsed(collapse_rows(w.consequence.rows, cm));
    if (w.l() == 0) return cii(w.base, prem, collapsed, lf.certificates);

    const std::size_t j = joins(w.base, w.aux, lf.assignment);
    if (canonical(at(j).consequence) == canonical(w.consequence)) {  // the join rows are the goal
        const std::size_t drop = add(Rule::Con, ConPayload{w.base, prem, {}, {}});
        return add(Rule::Tran, TranPayload{}, {drop, j});
    }
    const std::size_t s1 = cii(w.base, prem, collapsed, lf.certificates);  // prem -> B~
    const std::size_t drop = add(Rule::Con, ConPayload{w.base, collapsed, {}, {}});  // B~ -> True
    const std::size_t bj = add(Rule::Tran, TranPayload{}, {drop, j});
    const std::size_t ab = add(Rule::Abs, AbsPayload{}, {bj});                    // B~ -> exists U: [J; B~]

    const VarContext full = w.full();
    const IneqSystem mid = at(ab).consequence;  // copy: add() may reallocate
    std::vector<DualCertificate> certs;
    for (const auto& row : w.consequence.rows) {
        CiiResult r = prove_cii({full, mid, row}, lp_);
        if (!r.proved) throw std::logic_error("auxiliary identification is not Shannon-derivable");
        certs.push_back(r.certificate);
    }
    const std::size_t d = cii(full, mid, w.consequence, certs);
    const std::size_t t = add(Rule::Tran, TranPayload{}, {ab, d});
    return add(Rule::Tran, TranPayload{}, {s1, t});
}

std::size_t Builder::cases(const Eii& w, const CaseTree& t) {
    // Premises exactly as the certificates were produced.
    std::vector<IneqSystem> prems;
    IneqSystem a = w.premise;
    for (std::size_t i = 0; i < t.leaves.size(); ++i) {
        IneqSystem prem = a;
        if (i < t.splits.size()) prem.add_ge(t.splits[i]);
        prems.push_back(prem);
        if (i < t.splits.size()) a.add_ge(-t.splits[i]);
    }
    std::size_t cur = leaf(w, prems.back(), t.leaves.back());
    for (std::size_t i = t.splits.size(); i-- > 0;) {
        const std::size_t li = leaf(w, prems[i], t.leaves[i]);
        cur = add(Rule::Union, UnionPayload{t.splits[i]}, {li, cur});
    }
    return cur;
}

std::size_t Builder::wrap(const Eii& prev, const PremiseApplication& app, std::size_t inner) {
    const Eii& lemma = p_.premises.at(app.premise);
    const std::size_t pr = add(Rule::Premise, PremisePayload{app.premise, prev.base, app.substitution, app.fresh});
    Mask used = 0;
    for (Mask s : app.substitution) used |= s;
    const std::size_t ci = add(Rule::CI, CiPayload{used}, {pr});  // C -> exists V: [D; CI]

    CollapseMap sub;
    sub.image = app.substitution;
    IneqSystem cond;
    std::vector<DualCertificate> certs;
    for (std::size_t r = 0; r < lemma.premise.size(); ++r) {
        EntropyExpr c = collapse_expr(lemma.premise.rows[r], sub);
        if (c.is_zero()) continue;
        cond.add_ge(c);
        certs.push_back(app.condition_certificates.at(r));
    }
    const std::size_t ac = cii(prev.base, prev.premise, cond, certs);  // A -> C
    const std::size_t ab1 = add(Rule::Abs, AbsPayload{}, {ac});        // A -> [C; A]
    std::vector<std::vector<Rational>> select;
    for (std::size_t r = 0; r < cond.size(); ++r) {
        std::vector<Rational> row(cond.size() + prev.premise.size(), Rational(0));
        row[r] = 1;
        select.push_back(std::move(row));
    }
    const std::size_t sel =
        add(Rule::Con, ConPayload{{}, {}, std::move(select), std::vector<Rational>(cond.size(), Rational(0))}, {ab1});
    const std::size_t t1 = add(Rule::Tran, TranPayload{}, {sel, ci});  // [C; A] -> exists V: [D; CI]
    const std::size_t ab2 = add(Rule::Abs, AbsPayload{}, {t1});        // ... & [C; A]
    const std::size_t t2 = add(Rule::Tran, TranPayload{}, {ab1, ab2}); // A -> exists V: [D; CI; C; A]
    std::size_t s = add(Rule::Tran, TranPayload{}, {t2, inner});        // A -> exists V, U: B
    const std::size_t nv = app.fresh.size(), nu = prev.l();
    if (nv == 0) return s;
    if (nu > 0) {
        std::vector<std::size_t> base(prev.n()), aux;
        std::iota(base.begin(), base.end(), 0);
        for (std::size_t k = 0; k < nu; ++k) aux.push_back(nv + k);
        for (std::size_t k = 0; k < nv; ++k) aux.push_back(k);
        s = add(Rule::Perm, PermPayload{base, aux}, {s});
    }
    return add(Rule::Elim, ElimPayload{{}, {}, {}, 0, nv}, {s});
}

}  // namespace

ProofObject certificate_to_proof(const ProofCertificate& cert, const LpOptions& lp) {
    std::string why;
    if (!verify_proof_certificate(cert, &why)) throw std::invalid_argument("certificate does not verify: " + why);
    ProofObject p;
    p.goal = cert.goal;
    p.premises = cert.premises;
    std::vector<Eii> working{cert.goal};
    for (const auto& app : cert.applications)
        working.push_back(apply_premise(working.back(), cert.premises.at(app.premise), app.substitution, app.fresh));

    Builder b(p, lp);
    std::size_t s = b.cases(working.back(), cert.cases);
    for (std::size_t k = cert.applications.size(); k-- > 0;) s = b.wrap(working[k], cert.applications[k], s);
    if (!same_eii(b.at(s), p.goal)) throw std::logic_error("elaborated proof does not reach the goal");
    return p;
}

}  // namespace itp
