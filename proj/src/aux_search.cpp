// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#include "itprove/aux_search.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <set>
#include <thread>

#include "itprove/shannon_cone.hpp"

namespace itp {

const char* to_string(Monotonicity m) {
    switch (m) {
    case Monotonicity::Increasing: return "increasing";
    case Monotonicity::Decreasing: return "decreasing";
    case Monotonicity::Constant: return "constant";
    case Monotonicity::Unknown: return "unknown";
    }
    return "?";
}

const char* to_string(SearchStatus s) {
    switch (s) {
    case SearchStatus::Proved: return "proved";
    case SearchStatus::NotProved: return "not-proved";
    case SearchStatus::BudgetExceeded: return "budget-exceeded";
    }
    return "?";
}

namespace {

// Sum_{S contains v} c_S H(Y | X_S) >= 0 whenever every negative term can be
// paid for by positive mass on subsets of it (conditioning reduces entropy).
bool covers(std::vector<std::pair<Mask, Rational>> pos, std::vector<std::pair<Mask, Rational>> neg) {
    std::sort(neg.begin(), neg.end(), [](const auto& a, const auto& b) {
        return popcount(a.first) != popcount(b.first) ? popcount(a.first) < popcount(b.first) : a.first < b.first;
    });
    std::sort(pos.begin(), pos.end(), [](const auto& a, const auto& b) {
        return popcount(a.first) != popcount(b.first) ? popcount(a.first) > popcount(b.first) : a.first < b.first;
    });
    for (auto& [t, need] : neg) {
        for (auto& [s, have] : pos) {
            if (need == 0) break;
            if (have == 0 || (s & ~t)) continue;
            Rational take = have < need ? have : need;
            have -= take;
            need -= take;
        }
        if (need != 0) return false;
    }
    return true;
}

EntropyExpr widen(const EntropyExpr& e, std::size_t var, Mask y) {
    EntropyExpr out;
    for (const auto& [m, c] : e.h) out.add_h(m & bit(var) ? m | y : m, c);
    return out;
}

EntropyExpr entropy_part(const EntropyExpr& e) {
    EntropyExpr out;
    out.h = e.h;
    return out;
}

std::mutex g_mono_mu;
std::map<std::pair<EntropyExpr, std::size_t>, Monotonicity> g_mono_memo;

Monotonicity lp_monotonicity(const EntropyExpr& f, const VarContext& ctx, std::size_t var, const IneqSystem* given,
                             LpStats* stats) {
    if (given) {
        std::vector<std::string> names = ctx.rvs();
        std::string y = "Y";
        while (ctx.rv_index(y)) y += "'";
        VarContext wide(names);
        wide = wide.with_rvs({y});
        const Mask ym = bit(ctx.num_rvs());
        IneqSystem cons;
        for (const auto& r : given->rows) {
            cons.add_ge(entropy_part(r));
            cons.add_ge(widen(entropy_part(r), var, ym));
        }
        EntropyExpr diff = widen(f, var, ym) - f;
        bool inc = prove_cii({wide, cons, diff}, {}, stats).proved;
        bool dec = prove_cii({wide, cons, -diff}, {}, stats).proved;
        if (inc && dec) return Monotonicity::Constant;
        return inc ? Monotonicity::Increasing : dec ? Monotonicity::Decreasing : Monotonicity::Unknown;
    }
    // Project onto the support so the LP stays small.
    const Mask support = f.support() | bit(var);
    CollapseMap proj;
    std::size_t k = 0, cvar = 0;
    for (std::size_t i = 0; i < ctx.num_rvs(); ++i) {
        if (support & bit(i)) {
            if (i == var) cvar = k;
            proj.image.push_back(bit(k++));
        } else {
            proj.image.push_back(0);
        }
    }
    EntropyExpr g = collapse_expr(f, proj);
    auto key = std::make_pair(g, cvar);
    {
        std::lock_guard lock(g_mono_mu);
        auto it = g_mono_memo.find(key);
        if (it != g_mono_memo.end()) return it->second;
    }
    std::vector<std::string> names;
    for (std::size_t i = 0; i <= k; ++i) names.push_back("V" + std::to_string(i));
    VarContext small(names);
    EntropyExpr diff = widen(g, cvar, bit(k)) - g;
    bool inc = prove_cii({small, {}, diff}, {}, stats).proved;
    bool dec = prove_cii({small, {}, -diff}, {}, stats).proved;
    Monotonicity m = inc && dec ? Monotonicity::Constant
                     : inc      ? Monotonicity::Increasing
                     : dec      ? Monotonicity::Decreasing
                                : Monotonicity::Unknown;
    std::lock_guard lock(g_mono_mu);
    g_mono_memo.emplace(key, m);
    return m;
}

}  // namespace

Monotonicity monotonicity_by_rules(const EntropyExpr& expr, std::size_t var) {
    std::vector<std::pair<Mask, Rational>> pos, neg;
    for (const auto& [m, c] : expr.h) {
        if (!(m & bit(var))) continue;
        if (c > 0)
            pos.emplace_back(m, c);
        else
            neg.emplace_back(m, -c);
    }
    if (pos.empty() && neg.empty()) return Monotonicity::Constant;
    if (covers(pos, neg)) return Monotonicity::Increasing;
    if (covers(neg, pos)) return Monotonicity::Decreasing;
    return Monotonicity::Unknown;
}

Monotonicity monotonicity(const EntropyExpr& expr, const VarContext& ctx, std::size_t var, const IneqSystem* given,
                          LpStats* stats) {
    if (var >= ctx.num_rvs()) throw InvalidIndex("monotonicity: variable index out of range");
    Monotonicity m = monotonicity_by_rules(expr, var);
    if (m != Monotonicity::Unknown) return m;
    return lp_monotonicity(entropy_part(expr), ctx, var, given, stats);
}

// ---------------------------------------------------------------------------

RowProver::RowProver(VarContext ctx, IneqSystem premise, CertCache* cache, const SearchOptions& opts, LpStats& stats)
    : ctx_(std::move(ctx)), premise_(std::move(premise)), cache_(cache), opts_(opts), stats_(stats) {}

bool RowProver::proves(const EntropyExpr& row, DualCertificate* cert) {
    {
        std::lock_guard lock(mu_);
        auto it = memo_.find(row);
        if (it != memo_.end()) {
            if (cert && it->second.proved) *cert = it->second.cert;
            return it->second.proved;
        }
    }
    if (cache_ && cache_->rejects(row, premise_.rows)) {
        ++stats_.cache_rejections;
        std::lock_guard lock(mu_);
        memo_.emplace(row, Entry{false, {}});
        return false;
    }
    if (stats_.lp_solves.load() >= opts_.budget) throw BudgetExceeded("LP budget of " + std::to_string(opts_.budget) + " solves exhausted");
    CiiResult r = prove_cii({ctx_, premise_, row}, opts_.lp, &stats_);
    if (!r.proved && cache_) cache_->add(r.counterexample);
    std::lock_guard lock(mu_);
    memo_.emplace(row, Entry{r.proved, r.certificate});
    if (cert && r.proved) *cert = r.certificate;
    return r.proved;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<Monotonicity>> row_monotonicities(const Eii& e, const SearchOptions& opts, LpStats& stats) {
    const VarContext full = e.full();
    std::vector<std::vector<Monotonicity>> out;
    for (const auto& row : e.consequence.rows) {
        std::vector<Monotonicity> g;
        for (std::size_t i = 0; i < e.l(); ++i)
            g.push_back(monotonicity(row, full, e.n() + i, opts.conditional_monotonicity ? &e.premise : nullptr, &stats));
        out.push_back(std::move(g));
    }
    return out;
}

EntropyExpr collapse_row(const Eii& e, const EntropyExpr& row, const std::vector<Mask>& assignment) {
    return collapse_expr(row, CollapseMap::assign_aux(e.n(), assignment, e.reals()));
}

SandwichBounds initial_bounds(const Eii& e, const SearchOptions& opts) {
    SandwichBounds b;
    for (std::size_t i = 0; i < e.l(); ++i) {
        Mask up = e.base_mask();
        if (i < opts.upper_init.size()) up &= opts.upper_init[i];
        b.upper.push_back(up);
        b.lower.push_back(0);
    }
    return b;
}

}  // namespace

SandwichResult sandwich(const Eii& e, RowProver& prover, const SearchOptions& opts) {
    SandwichResult res;
    LpStats scratch;
    res.row_monotonicity = row_monotonicities(e, opts, scratch);
    res.bounds = initial_bounds(e, opts);
    auto& up = res.bounds.upper;
    auto& lo = res.bounds.lower;
    const std::size_t l = e.l();
    while (true) {
        bool changed = false;
        for (std::size_t r = 0; r < e.consequence.size(); ++r) {
            const auto& row = e.consequence.rows[r];
            const auto& g = res.row_monotonicity[r];
            if (std::any_of(g.begin(), g.end(), [](Monotonicity m) { return m == Monotonicity::Unknown; })) continue;
            std::vector<Mask> tilde(l);
            for (std::size_t i = 0; i < l; ++i) tilde[i] = g[i] == Monotonicity::Decreasing ? lo[i] : up[i];
            if (!prover.proves(collapse_row(e, row, tilde))) {
                res.ok = false;
                res.failed_row = r;
                res.history.push_back(res.bounds);
                return res;
            }
            for (std::size_t i = 0; i < l; ++i) {
                if (g[i] == Monotonicity::Constant) continue;
                const Mask free = up[i] & ~lo[i];
                for (std::size_t j = 0; j < e.n(); ++j) {
                    if (!(free & bit(j))) continue;
                    std::vector<Mask> probe = tilde;
                    probe[i] ^= bit(j);
                    if (prover.proves(collapse_row(e, row, probe))) continue;
                    if (g[i] == Monotonicity::Increasing)
                        lo[i] |= bit(j);
                    else
                        up[i] &= ~bit(j);
                    changed = true;
                }
            }
        }
        res.history.push_back(res.bounds);
        if (!changed) break;
    }
    res.ok = true;
    return res;
}

// ---------------------------------------------------------------------------

namespace {

struct Position {
    std::size_t aux;
    Mask bit;
};

struct Failure {
    std::vector<Mask> assignment;
    std::size_t row;
};

bool dominated(const std::vector<Mask>& cand, const Failure& f, const std::vector<std::vector<Monotonicity>>& mono) {
    const auto& g = mono[f.row];
    for (std::size_t i = 0; i < cand.size(); ++i) {
        const Mask c = cand[i], d = f.assignment[i];
        if (c == d) continue;
        const bool shrink = (c & ~d) == 0, grow = (d & ~c) == 0;
        const bool inc = g[i] == Monotonicity::Increasing || g[i] == Monotonicity::Constant;
        const bool dec = g[i] == Monotonicity::Decreasing || g[i] == Monotonicity::Constant;
        if (shrink && inc) continue;
        if (grow && dec) continue;
        return false;
    }
    return true;
}

struct Evaluation {
    bool ok = false;
    bool skipped = false;
    std::size_t failed_row = 0;
    std::size_t covered = 0;
    std::vector<DualCertificate> certs;
};

Evaluation evaluate_candidate(const Eii& e, const std::vector<Mask>& cand, RowProver& prover, std::size_t first_row) {
    Evaluation ev;
    const std::size_t m = e.consequence.size();
    ev.certs.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t r = k == 0 ? first_row : (k <= first_row ? k - 1 : k);
        if (!prover.proves(collapse_row(e, e.consequence.rows[r], cand), &ev.certs[r])) {
            ev.failed_row = r;
            ev.covered = k;
            return ev;
        }
    }
    ev.ok = true;
    ev.covered = m;
    return ev;
}

// Next integer with the same popcount (Gosper); 0 when it leaves `width` bits.
std::uint64_t next_same_popcount(std::uint64_t x, std::size_t width) {
    const std::uint64_t c = x & (~x + 1);
    const std::uint64_t r = x + c;
    if (r == 0) return 0;
    std::uint64_t y = (((r ^ x) >> 2) / c) | r;
    if (width < 64 && (y >> width)) return 0;
    return y;
}

}  // namespace

ExhaustResult exhaust(const Eii& e, const SandwichBounds& bounds, RowProver& prover, const SearchOptions& opts,
                      const std::vector<std::vector<Monotonicity>>* row_monotonicity) {
    ExhaustResult res;
    const std::size_t l = e.l();
    std::vector<Position> pos;
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < e.n(); ++j)
            if ((bounds.upper[i] & ~bounds.lower[i]) & bit(j)) pos.push_back({i, bit(j)});
    const std::size_t f = pos.size();
    if (f > 62) throw BudgetExceeded("exhaust: " + std::to_string(f) + " free positions exceed the enumeration cap");

    auto decode = [&](std::uint64_t word) {
        std::vector<Mask> a = bounds.lower;
        for (std::size_t k = 0; k < f; ++k)
            if (word >> k & 1) a[pos[k].aux] |= pos[k].bit;
        return a;
    };

    const bool prune = opts.prune_monotone && row_monotonicity && l > 0;
    std::vector<Failure> failures;
    std::size_t first_row = 0;
    const int jobs = std::max(1, opts.jobs);
    const std::size_t chunk = jobs == 1 ? 1 : static_cast<std::size_t>(16 * jobs);

    std::vector<std::uint64_t> pending;
    auto flush = [&]() -> bool {
        std::vector<std::vector<Mask>> cands;
        for (auto w : pending) cands.push_back(decode(w));
        pending.clear();
        std::vector<Evaluation> evs(cands.size());
        std::vector<char> skip(cands.size(), 0);
        if (prune) {
            for (std::size_t c = 0; c < cands.size(); ++c)
                for (const auto& fl : failures)
                    if (dominated(cands[c], fl, *row_monotonicity)) {
                        skip[c] = 1;
                        break;
                    }
        }
        if (jobs == 1 || cands.size() == 1) {
            for (std::size_t c = 0; c < cands.size(); ++c) {
                if (skip[c]) continue;
                evs[c] = evaluate_candidate(e, cands[c], prover, first_row);
            }
        } else {
            std::exception_ptr err;
            std::mutex err_mu;
            std::vector<std::thread> workers;
            std::atomic<std::size_t> next{0};
            for (int t = 0; t < jobs; ++t) {
                workers.emplace_back([&] {
                    for (std::size_t c; (c = next++) < cands.size();) {
                        if (skip[c]) continue;
                        try {
                            evs[c] = evaluate_candidate(e, cands[c], prover, first_row);
                        } catch (...) {
                            std::lock_guard lock(err_mu);
                            if (!err) err = std::current_exception();
                        }
                    }
                });
            }
            for (auto& w : workers) w.join();
            if (err) std::rethrow_exception(err);
        }
        for (std::size_t c = 0; c < cands.size(); ++c) {
            if (skip[c]) continue;
            ++res.candidates_tried;
            res.best_rows_covered = std::max(res.best_rows_covered, evs[c].covered);
            if (evs[c].ok) {
                res.ok = true;
                res.assignment = cands[c];
                res.certificates = std::move(evs[c].certs);
                return true;
            }
            first_row = evs[c].failed_row;
            if (prune && failures.size() < 4096) failures.push_back({cands[c], evs[c].failed_row});
        }
        return false;
    };

    std::uint64_t enumerated = 0;
    for (std::size_t k = 0; k <= f; ++k) {
        std::uint64_t w = k == 0 ? 0 : (k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1);
        while (true) {
            if (++enumerated > opts.max_candidates) throw BudgetExceeded("exhaust: candidate cap reached");
            pending.push_back(w);
            if (pending.size() >= chunk && flush()) return res;
            if (k == 0) break;
            w = next_same_popcount(w, f);
            if (w == 0) break;
        }
    }
    if (!pending.empty() && flush()) return res;
    return res;
}

ExhaustResult brute_force(const Eii& e, const SearchOptions& opts) {
    SearchOptions o = opts;
    o.prune_monotone = false;
    o.use_cache = false;
    LpStats stats;
    RowProver prover(e.base, e.premise, nullptr, o, stats);
    SandwichBounds b;
    b.upper.assign(e.l(), e.base_mask());
    b.lower.assign(e.l(), 0);
    return exhaust(e, b, prover, o, nullptr);
}

// ---------------------------------------------------------------------------

Eii apply_premise(const Eii& working, const Eii& premise, const std::vector<Mask>& substitution,
                  const std::vector<std::string>& fresh) {
    if (premise.reals() != 0) throw std::invalid_argument("premises with real variables are not supported");
    if (substitution.size() != premise.n()) throw std::invalid_argument("substitution size does not match premise");
    if (fresh.size() != premise.l()) throw std::invalid_argument("fresh name count does not match premise");
    const std::size_t N = working.n(), lp = premise.l(), l = working.l();
    Mask used = 0;
    for (Mask s : substitution) {
        if (s & ~full_mask(N)) throw std::invalid_argument("substitution uses a variable outside the base");
        used |= s;
    }
    Eii out;
    out.base = working.base.with_rvs(fresh);
    out.aux = working.aux;
    out.premise = working.premise;

    CollapseMap sub;
    sub.image = substitution;
    for (std::size_t j = 0; j < lp; ++j) sub.image.push_back(bit(N + j));
    for (const auto& r : premise.premise.rows) {
        EntropyExpr c = collapse_expr(r, sub);
        if (!c.is_zero()) out.premise.add_ge(c);
    }
    for (const auto& r : premise.consequence.rows) {
        EntropyExpr d = collapse_expr(r, sub);
        if (!d.is_zero()) out.premise.add_ge(d);
    }
    const Mask vmask = full_mask(N + lp) & ~full_mask(N);
    const Mask rest = full_mask(N) & ~used;
    if (rest && vmask) out.premise.add_eq(mutual_info_term(out.base, vmask, rest, used));

    CollapseMap shift = CollapseMap::identity(N, working.reals());
    for (std::size_t k = 0; k < l; ++k) shift.image.push_back(bit(N + lp + k));
    for (const auto& r : working.consequence.rows) out.consequence.add_ge(collapse_expr(r, shift));
    out.validate();
    return out;
}

Eii working_eii(const ProofCertificate& cert) {
    Eii w = cert.goal;
    for (const auto& app : cert.applications) w = apply_premise(w, cert.premises.at(app.premise), app.substitution, app.fresh);
    return w;
}

namespace {

std::vector<EntropyExpr> condition_rows(const Eii& premise, const std::vector<Mask>& substitution) {
    CollapseMap sub;
    sub.image = substitution;
    std::vector<EntropyExpr> out;
    for (const auto& r : premise.premise.rows) out.push_back(collapse_expr(r, sub));
    return out;
}

bool fail(std::string* why, const std::string& msg) {
    if (why) *why = msg;
    return false;
}

}  // namespace

bool verify_proof_certificate(const ProofCertificate& cert, std::string* why) {
    Eii w = cert.goal;
    try {
        w.validate();
        for (std::size_t a = 0; a < cert.applications.size(); ++a) {
            const auto& app = cert.applications[a];
            if (app.premise >= cert.premises.size()) return fail(why, "application " + std::to_string(a) + ": unknown premise");
            const Eii& p = cert.premises[app.premise];
            if (app.substitution.size() != p.n()) return fail(why, "application " + std::to_string(a) + ": bad substitution");
            auto rows = condition_rows(p, app.substitution);
            if (app.condition_certificates.size() != rows.size())
                return fail(why, "application " + std::to_string(a) + ": missing condition certificates");
            for (std::size_t r = 0; r < rows.size(); ++r)
                if (!verify_certificate({w.base, w.premise, rows[r]}, app.condition_certificates[r]))
                    return fail(why, "application " + std::to_string(a) + ": condition row " + std::to_string(r));
            w = apply_premise(w, p, app.substitution, app.fresh);
        }
    } catch (const std::exception& ex) {
        return fail(why, ex.what());
    }
    const auto& t = cert.cases;
    if (t.leaves.size() != t.splits.size() + 1) return fail(why, "case tree has inconsistent shape");
    IneqSystem a = w.premise;
    for (std::size_t i = 0; i < t.leaves.size(); ++i) {
        IneqSystem prem = a;
        if (i < t.splits.size()) prem.add_ge(t.splits[i]);
        const auto& leaf = t.leaves[i];
        if (leaf.assignment.size() != w.l()) return fail(why, "leaf " + std::to_string(i) + ": assignment size");
        for (Mask m : leaf.assignment)
            if (m & ~w.base_mask()) return fail(why, "leaf " + std::to_string(i) + ": assignment outside base");
        if (leaf.certificates.size() != w.consequence.size()) return fail(why, "leaf " + std::to_string(i) + ": certificate count");
        for (std::size_t r = 0; r < w.consequence.size(); ++r) {
            EntropyExpr row = collapse_row(w, w.consequence.rows[r], leaf.assignment);
            if (!verify_certificate({w.base, prem, row}, leaf.certificates[r]))
                return fail(why, "leaf " + std::to_string(i) + ": row " + std::to_string(r));
        }
        if (i < t.splits.size()) a.add_ge(-t.splits[i]);
    }
    return true;
}

// ---------------------------------------------------------------------------

namespace {

class Search {
  public:
    Search(const Eii& goal, const std::vector<Eii>& premises, const SearchOptions& opts)
        : goal_(goal), premises_(premises), opts_(opts), cache_(1024) {}

    SearchResult run() {
        SearchResult res;
        try {
            std::optional<ProofCertificate> cert;
            if (premises_.empty()) {
                cert = solve_top(goal_, &res);
            } else {
                cert = premise_search(&res);
            }
            if (cert) {
                res.status = SearchStatus::Proved;
                res.certificate = std::move(cert);
            } else {
                res.status = SearchStatus::NotProved;
                if (res.message.empty())
                    res.message = goal_.l() == 0 && premises_.empty() ? "not implied over the Shannon cone"
                                                                      : "no auxiliary assignment found";
            }
        } catch (const BudgetExceeded& ex) {
            res.status = SearchStatus::BudgetExceeded;
            res.message = ex.what();
        }
        res.lp_solves = stats_.lp_solves.load();
        res.cache_rejections = stats_.cache_rejections.load();
        return res;
    }

  private:
    CertCache* cache() { return opts_.use_cache ? &cache_ : nullptr; }

    std::optional<ProofCertificate> solve_top(const Eii& working, SearchResult* report,
                                              std::vector<PremiseApplication> apps = {}) {
        auto tree = solve(working, working.premise, opts_.max_cases, report);
        if (!tree) return std::nullopt;
        ProofCertificate cert;
        cert.goal = goal_;
        cert.premises = premises_;
        cert.applications = std::move(apps);
        cert.cases = std::move(*tree);
        return cert;
    }

    struct Plain {
        bool ok = false;
        std::vector<Mask> assignment;
        std::vector<DualCertificate> certs;
    };

    Plain plain(const Eii& e, RowProver& prover, SearchResult* report) {
        Plain p;
        SandwichBounds b;
        const std::vector<std::vector<Monotonicity>>* mono = nullptr;
        SandwichResult sw;
        if (opts_.use_sandwich) {
            sw = sandwich(e, prover, opts_);
            if (report) report->bounds = sw.bounds;
            if (!sw.ok) return p;
            b = sw.bounds;
            mono = &sw.row_monotonicity;
        } else {
            b = initial_bounds(e, opts_);
            if (opts_.prune_monotone) {
                sw.row_monotonicity = row_monotonicities(e, opts_, stats_);
                mono = &sw.row_monotonicity;
            }
            if (report) report->bounds = b;
        }
        ExhaustResult ex = exhaust(e, b, prover, opts_, mono);
        if (report) report->best_rows_covered = std::max(report->best_rows_covered, ex.best_rows_covered);
        p.ok = ex.ok;
        p.assignment = std::move(ex.assignment);
        p.certs = std::move(ex.certificates);
        return p;
    }

    // Leave-one-out chain under premise `a`, at most `cases` leaves.
    std::optional<CaseTree> solve(const Eii& w, const IneqSystem& a, std::size_t cases, SearchResult* report) {
        Eii e = w;
        e.premise = a;
        RowProver prover(e.base, a, cache(), opts_, stats_);
        Plain p = plain(e, prover, report);
        if (p.ok) {
            CaseTree t;
            t.leaves.push_back({p.assignment, p.certs});
            return t;
        }
        if (cases <= 1 || e.consequence.size() < 2) return std::nullopt;
        for (std::size_t j = 0; j < e.consequence.size(); ++j) {
            Eii rest = e;
            rest.consequence.rows.erase(rest.consequence.rows.begin() + static_cast<long>(j));
            Plain q = plain(rest, prover, nullptr);
            if (!q.ok) continue;
            EntropyExpr c = collapse_row(e, e.consequence.rows[j], q.assignment);
            if (prover.proves(-c)) continue;  // the other branch would add nothing
            IneqSystem a2 = a;
            a2.add_ge(-c);
            auto sub = solve(w, a2, cases - 1, nullptr);
            if (!sub) continue;
            CaseLeaf leaf;
            leaf.assignment = q.assignment;
            for (std::size_t r = 0, k = 0; r < e.consequence.size(); ++r) {
                if (r == j) {
                    DualCertificate dc;
                    dc.premises.emplace_back(a.size(), Rational(1));
                    leaf.certificates.push_back(dc);
                } else {
                    leaf.certificates.push_back(q.certs[k++]);
                }
            }
            CaseTree t;
            t.splits.push_back(c);
            t.leaves.push_back(std::move(leaf));
            t.splits.insert(t.splits.end(), sub->splits.begin(), sub->splits.end());
            t.leaves.insert(t.leaves.end(), sub->leaves.begin(), sub->leaves.end());
            return t;
        }
        return std::nullopt;
    }

    // ---- premise search ----

    struct Node {
        Eii working;
        std::vector<PremiseApplication> apps;
        std::size_t used = 0;
        std::size_t next_premise = 0;
        std::vector<std::size_t> counts;
    };

    std::optional<ProofCertificate> premise_search(SearchResult* report) {
        Node root{goal_, {}, 0, 0, std::vector<std::size_t>(premises_.size(), 0)};
        for (std::size_t level = 0;; ++level) {
            deeper_ = false;
            if (auto c = visit(root, level, level == 0 ? report : nullptr)) return c;
            if (!deeper_) return std::nullopt;
        }
    }

    std::optional<ProofCertificate> visit(const Node& node, std::size_t level, SearchResult* report) {
        if (node.used == level) {
            if (auto c = solve_top(node.working, report, node.apps)) return c;
        }
        for (std::size_t p = node.next_premise; p < premises_.size(); ++p) {
            if (node.counts[p] >= opts_.repeat) continue;
            const Eii& prem = premises_[p];
            std::optional<ProofCertificate> found;
            substitutions(node, prem, level - node.used, [&](const std::vector<Mask>& sigma, std::size_t cost,
                                                            std::vector<DualCertificate> certs) {
                Node child;
                child.apps = node.apps;
                PremiseApplication app;
                app.premise = p;
                app.substitution = sigma;
                app.fresh = fresh_names(node.working, prem, node.apps.size() + 1);
                app.condition_certificates = std::move(certs);
                child.working = apply_premise(node.working, prem, sigma, app.fresh);
                child.apps.push_back(std::move(app));
                child.used = node.used + cost;
                child.next_premise = p;
                child.counts = node.counts;
                ++child.counts[p];
                found = visit(child, level, nullptr);
                return found.has_value();
            });
            if (found) return found;
        }
        return std::nullopt;
    }

    static std::vector<std::string> fresh_names(const Eii& w, const Eii& prem, std::size_t index) {
        std::set<std::string> taken;
        const VarContext f = w.full();
        taken.insert(f.rvs().begin(), f.rvs().end());
        taken.insert(w.base.reals().begin(), w.base.reals().end());
        std::vector<std::string> out;
        for (const auto& a : prem.aux) {
            std::string s = a + "_" + std::to_string(index);
            while (taken.count(s)) s += "'";
            taken.insert(s);
            out.push_back(s);
        }
        return out;
    }

    // Calls `emit` for substitutions of total size <= budget that satisfy the
    // premise's condition under the working premise; stops when emit returns true.
    void substitutions(const Node& node, const Eii& prem, std::size_t budget,
                       const std::function<bool(const std::vector<Mask>&, std::size_t, std::vector<DualCertificate>)>& emit) {
        const Eii& w = node.working;
        const std::size_t np = prem.n();
        // Generator bounds from a sandwich on the condition rows.
        Eii gen;
        gen.base = w.base;
        for (std::size_t i = 0; i < np; ++i) gen.aux.push_back("#" + std::to_string(i));
        gen.premise = w.premise;
        {
            CollapseMap lift;
            for (std::size_t i = 0; i < np; ++i) lift.image.push_back(bit(w.n() + i));
            for (const auto& r : prem.premise.rows) gen.consequence.add_ge(collapse_expr(r, lift));
        }
        RowProver& prover = condition_prover(node);
        SandwichBounds b;
        b.upper.assign(np, w.base_mask());
        b.lower.assign(np, 0);
        if (!gen.consequence.empty()) {
            SearchOptions o = opts_;
            o.upper_init.clear();
            SandwichResult sw = sandwich(gen, prover, o);
            if (!sw.ok) return;
            b = sw.bounds;
        }
        std::vector<std::vector<Mask>> choices(np);
        for (std::size_t i = 0; i < np; ++i) {
            const Mask free = b.upper[i] & ~b.lower[i];
            for (Mask s = free;; s = (s - 1) & free) {
                if (Mask m = b.lower[i] | s) choices[i].push_back(m);
                if (s == 0) break;
            }
            std::sort(choices[i].begin(), choices[i].end(), [](Mask x, Mask y) {
                return popcount(x) != popcount(y) ? popcount(x) < popcount(y) : x < y;
            });
        }
        std::vector<Mask> sigma(np);
        std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t cost) -> bool {
            if (i == np) {
                std::vector<DualCertificate> certs;
                for (const auto& row : condition_rows(prem, sigma)) {
                    DualCertificate dc;
                    if (!prover.proves(row, &dc)) return false;
                    certs.push_back(dc);
                }
                return emit(sigma, cost, std::move(certs));
            }
            for (Mask m : choices[i]) {
                const std::size_t c = cost + static_cast<std::size_t>(popcount(m));
                if (c + (np - i - 1) > budget) {
                    deeper_ = true;
                    break;
                }
                sigma[i] = m;
                if (rec(i + 1, c)) return true;
            }
            return false;
        };
        rec(0, 0);
    }

    RowProver& condition_prover(const Node& node) {
        std::string key;
        for (const auto& a : node.apps) {
            key += std::to_string(a.premise) + ":";
            for (Mask m : a.substitution) key += std::to_string(m) + ",";
            key += ";";
        }
        auto it = condition_provers_.find(key);
        if (it == condition_provers_.end())
            it = condition_provers_
                     .emplace(key, std::make_unique<RowProver>(node.working.base, node.working.premise, cache(), opts_, stats_))
                     .first;
        return *it->second;
    }

    const Eii& goal_;
    const std::vector<Eii>& premises_;
    const SearchOptions& opts_;
    LpStats stats_;
    CertCache cache_;
    bool deeper_ = false;
    std::map<std::string, std::unique_ptr<RowProver>> condition_provers_;
};

}  // namespace

SearchResult prove_eii(const Eii& e, const std::vector<Eii>& premises, const SearchOptions& opts) {
    e.validate();
    for (const auto& p : premises) {
        p.validate();
        if (p.reals() != 0) throw std::invalid_argument("premises with real variables are not supported");
    }
    Search s(e, premises, opts);
    return s.run();
}

SearchResult leave_one_out(const Eii& e, const SearchOptions& opts) { return prove_eii(e, {}, opts); }

}  // namespace itp
