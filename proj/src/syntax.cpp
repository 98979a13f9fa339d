// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#include "itprove/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>

namespace itp {

namespace {

struct Term {
    enum class Kind { Entropy, Mutual, Real, Constant };
    Kind kind = Kind::Constant;
    Rational coeff = 1;
    std::vector<std::vector<std::string>> sets;  // Entropy: a, given; Mutual: a, b, given
    std::string name;
};
using Expr = std::vector<Term>;

struct RawRow {
    Expr expr;  // expr >= 0, or == 0
    bool equality = false;
};

struct Decls {
    bool present = false;
    bool typed = false;  // ";" seen
    std::size_t offset = 0;
    std::vector<std::string> rvs;  // everything before ";", or all names when untyped
    std::vector<std::string> reals;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

class Parser {
  public:
    explicit Parser(std::string_view text) : s_(text) {
        // comments become blanks so offsets stay put
        for (std::size_t i = 0; i < s_.size(); ++i) {
            if (s_[i] != '#') continue;
            for (; i < s_.size() && s_[i] != '\n'; ++i) s_[i] = ' ';
        }
    }

    std::size_t pos() {
        skip();
        return pos_;
    }
    bool at_end() { return pos() == s_.size(); }

    [[noreturn]] void fail(const std::string& what) { throw ParseError(pos(), what); }
    [[noreturn]] void fail_at(std::size_t at, const std::string& what) { throw ParseError(at, what); }

    bool accept(std::string_view tok) {
        skip();
        if (s_.compare(pos_, tok.size(), tok) != 0) return false;
        pos_ += tok.size();
        return true;
    }
    void expect(std::string_view tok) {
        if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
    }
    bool peek(std::string_view tok) {
        skip();
        return s_.compare(pos_, tok.size(), tok) == 0;
    }

    bool keyword(std::string_view kw) {
        skip();
        if (s_.compare(pos_, kw.size(), kw) != 0) return false;
        const std::size_t end = pos_ + kw.size();
        if (end < s_.size() && ident_char(s_[end])) return false;
        pos_ = end;
        return true;
    }

    std::string name() {
        skip();
        if (pos_ >= s_.size() || !ident_start(s_[pos_])) fail("expected a name");
        const std::size_t start = pos_;
        while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
        std::string n = s_.substr(start, pos_ - start);
        if (n == "forall" || n == "exists" || n == "true") fail_at(start, "'" + n + "' is a keyword");
        return n;
    }

    Decls decls() {
        Decls d;
        d.present = true;
        d.offset = pos();
        auto list = [&](std::vector<std::string>& out) {
            while (!peek(":") && !peek(";")) {
                out.push_back(name());
                accept(",");
            }
        };
        list(d.rvs);
        if (accept(";")) {
            d.typed = true;
            list(d.reals);
        }
        expect(":");
        return d;
    }

    std::vector<RawRow> constraints() {
        std::vector<RawRow> rows;
        if (keyword("true")) return rows;
        do {
            constraint(rows);
        } while (accept(","));
        return rows;
    }

    void note_use(const std::string& n, std::size_t at, bool rv) {
        if (!first_use_.count(n)) {
            first_use_[n] = at;
            order_.push_back(n);
        }
        (rv ? rv_use_ : real_use_).insert(n);
        if (rv_use_.count(n) && real_use_.count(n))
            fail_at(at, "'" + n + "' is used both as a random variable and as a real");
    }

    const std::vector<std::string>& order() const { return order_; }
    bool used_as_rv(const std::string& n) const { return rv_use_.count(n) > 0; }
    bool used_as_real(const std::string& n) const { return real_use_.count(n) > 0; }
    std::size_t first_use(const std::string& n) const { return first_use_.at(n); }

  private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    void constraint(std::vector<RawRow>& rows) {
        Expr lhs = expr();
        bool any = false;
        for (;;) {
            int op = 0;
            if (accept("<=")) op = -1;
            else if (accept(">=")) op = 1;
            else if (accept("==")) op = 0;
            else break;
            any = true;
            Expr rhs = expr();
            RawRow row;
            row.equality = op == 0;
            const Expr& big = op >= 0 ? lhs : rhs;
            const Expr& small = op >= 0 ? rhs : lhs;
            row.expr = big;
            for (Term t : small) {
                t.coeff = -t.coeff;
                row.expr.push_back(std::move(t));
            }
            rows.push_back(std::move(row));
            lhs = std::move(rhs);
        }
        if (!any) fail("expected '<=', '>=' or '=='");
    }

    Expr expr() {
        Expr out;
        bool negate = accept("-");
        if (!negate) accept("+");
        for (;;) {
            Expr t = term();
            for (auto& x : t) {
                if (negate) x.coeff = -x.coeff;
                out.push_back(std::move(x));
            }
            if (accept("+")) negate = false;
            else if (accept("-")) negate = true;
            else return out;
        }
    }

    std::optional<Rational> number() {
        skip();
        const std::size_t start = pos_;
        auto digit = [&](std::size_t i) { return i < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i])); };
        if (pos_ >= s_.size() || (!digit(pos_) && !(s_[pos_] == '.' && digit(pos_ + 1)))) return std::nullopt;
        while (digit(pos_) || (pos_ < s_.size() && s_[pos_] == '.')) ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '/' && digit(pos_ + 1)) {
            ++pos_;
            while (digit(pos_)) ++pos_;
        } else if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t k = pos_ + 1;
            if (k < s_.size() && (s_[k] == '+' || s_[k] == '-')) ++k;
            if (digit(k)) {
                pos_ = k;
                while (digit(pos_)) ++pos_;
            }
        }
        auto r = parse_rational(std::string_view(s_).substr(start, pos_ - start));
        if (!r) fail_at(start, "malformed number");
        return r;
    }

    bool atom_ahead() {
        skip();
        return pos_ < s_.size() && (ident_start(s_[pos_]) || s_[pos_] == '(');
    }

    Expr term() {
        if (auto c = number()) {
            const bool star = accept("*");
            if (!star && !atom_ahead()) {
                Term t;
                t.coeff = *c;
                return {t};
            }
            Expr a = atom();
            for (auto& t : a) t.coeff *= *c;
            return a;
        }
        return atom();
    }

    std::vector<std::string> rv_list(std::initializer_list<std::string_view> stops) {
        std::vector<std::string> out;
        for (;;) {
            const std::size_t at = pos();
            std::string n = name();
            note_use(n, at, true);
            out.push_back(std::move(n));
            if (accept(",")) continue;
            for (auto s : stops)
                if (peek(s)) return out;
            fail("expected ',' or one of the closing symbols");
        }
    }

    Expr atom() {
        if (accept("(")) {
            Expr e = expr();
            expect(")");
            return e;
        }
        const std::size_t at = pos();
        std::string n = name();
        const bool call = peek("(");
        if (call && (n == "H" || n == "I")) {
            expect("(");
            Term t;
            if (n == "H") {
                t.kind = Term::Kind::Entropy;
                t.sets.push_back(rv_list({"|", ")"}));
                t.sets.push_back(accept("|") ? rv_list({")"}) : std::vector<std::string>{});
            } else {
                t.kind = Term::Kind::Mutual;
                t.sets.push_back(rv_list({";"}));
                expect(";");
                t.sets.push_back(rv_list({"|", ")"}));
                t.sets.push_back(accept("|") ? rv_list({")"}) : std::vector<std::string>{});
            }
            expect(")");
            return {t};
        }
        if (call) fail_at(at, "unknown function '" + n + "'");
        note_use(n, at, false);
        Term t;
        t.kind = Term::Kind::Real;
        t.name = std::move(n);
        return {t};
    }

    std::string s_;
    std::size_t pos_ = 0;
    std::map<std::string, std::size_t> first_use_;
    std::vector<std::string> order_;
    std::set<std::string> rv_use_, real_use_;
};

// Random variables and reals of a declaration list, checked against use.
void classify(const Decls& d, const Parser& p, std::vector<std::string>& rvs, std::vector<std::string>& reals) {
    for (const auto& n : d.rvs) {
        if (!d.typed && p.used_as_real(n)) reals.push_back(n);
        else rvs.push_back(n);
    }
    for (const auto& n : d.reals) reals.push_back(n);
    for (const auto& n : rvs)
        if (p.used_as_real(n)) throw ParseError(p.first_use(n), "'" + n + "' is declared as a random variable");
    for (const auto& n : reals)
        if (p.used_as_rv(n)) throw ParseError(p.first_use(n), "'" + n + "' is declared as a real");
}

void check_unique(const std::vector<std::string>& names, std::size_t at) {
    std::set<std::string> seen;
    for (const auto& n : names)
        if (!seen.insert(n).second) throw ParseError(at, "'" + n + "' is declared twice");
}

EntropyExpr lower(const Expr& e, const VarContext& ctx) {
    EntropyExpr out;
    for (const auto& t : e) {
        switch (t.kind) {
            case Term::Kind::Constant: out += EntropyExpr::constant_term(t.coeff); break;
            case Term::Kind::Real: out += EntropyExpr::real(*ctx.real_index(t.name), t.coeff); break;
            case Term::Kind::Entropy:
                out += t.coeff * entropy_term(ctx, ctx.mask_of(t.sets[0]), ctx.mask_of(t.sets[1]));
                break;
            case Term::Kind::Mutual:
                out += t.coeff * mutual_info_term(ctx, ctx.mask_of(t.sets[0]), ctx.mask_of(t.sets[1]),
                                                  ctx.mask_of(t.sets[2]));
                break;
        }
    }
    return out;
}

IneqSystem lower(const std::vector<RawRow>& rows, const VarContext& ctx) {
    IneqSystem s;
    for (const auto& r : rows) {
        EntropyExpr e = lower(r.expr, ctx);
        if (r.equality) s.add_eq(e);
        else s.add_ge(std::move(e));
    }
    return s;
}

bool mentions(const std::vector<RawRow>& rows, const std::set<std::string>& names) {
    for (const auto& r : rows)
        for (const auto& t : r.expr) {
            if (t.kind == Term::Kind::Real && names.count(t.name)) return true;
            for (const auto& set : t.sets)
                for (const auto& n : set)
                    if (names.count(n)) return true;
        }
    return false;
}

// Free names in order of first use, minus `bound`.
void free_names(const Parser& p, const std::set<std::string>& bound, std::vector<std::string>& rvs,
                std::vector<std::string>& reals) {
    for (const auto& n : p.order()) {
        if (bound.count(n)) continue;
        (p.used_as_rv(n) ? rvs : reals).push_back(n);
    }
}

void check_declared(const Parser& p, const std::set<std::string>& declared) {
    for (const auto& n : p.order())
        if (!declared.count(n)) throw ParseError(p.first_use(n), "undeclared name '" + n + "'");
}

struct RegionParse {
    Eip region;
    std::vector<std::string> free_rvs, free_reals;
};

RegionParse parse_region_impl(std::string_view text, const VarContext* base) {
    Parser p(text);
    Decls all, ex;
    if (p.keyword("forall")) all = p.decls();
    if (p.keyword("exists")) ex = p.decls();
    std::vector<RawRow> rows = p.constraints();
    if (!p.at_end()) p.fail("unexpected trailing input");

    RegionParse out;
    Eip& r = out.region;
    classify(ex, p, r.aux, r.aux_reals);
    std::set<std::string> bound(r.aux.begin(), r.aux.end());
    bound.insert(r.aux_reals.begin(), r.aux_reals.end());

    std::vector<std::string> rvs, reals;
    if (all.present) {
        classify(all, p, rvs, reals);
        std::vector<std::string> names = rvs;
        names.insert(names.end(), reals.begin(), reals.end());
        for (const auto& n : names)
            if (bound.count(n)) throw ParseError(all.offset, "'" + n + "' is both universal and existential");
        std::set<std::string> declared(names.begin(), names.end());
        declared.insert(bound.begin(), bound.end());
        check_declared(p, declared);
    } else {
        free_names(p, bound, rvs, reals);
    }
    out.free_rvs = rvs;
    out.free_reals = reals;
    if (base) {
        for (const auto& n : rvs)
            if (!base->rv_index(n)) throw ParseError(0, "'" + n + "' is not a random variable of the common base");
        for (const auto& n : reals)
            if (!base->real_index(n)) throw ParseError(0, "'" + n + "' is not a real of the common base");
        r.base = *base;
    } else {
        r.base = VarContext(rvs, reals);
    }
    std::vector<std::string> names = r.base.rvs();
    names.insert(names.end(), r.base.reals().begin(), r.base.reals().end());
    names.insert(names.end(), bound.begin(), bound.end());
    check_unique(names, 0);
    r.system = lower(rows, r.full());
    r.validate();
    return out;
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
    return out;
}

std::string decl_text(const std::vector<std::string>& rvs, const std::vector<std::string>& reals) {
    std::string out = join(rvs);
    if (!reals.empty()) out += (out.empty() ? "; " : "; ") + join(reals);
    return out;
}

std::string row_text(const EntropyExpr& e, const VarContext& ctx, const char* op) {
    EntropyExpr pos, neg;
    for (const auto& [m, c] : e.h) (c > 0 ? pos : neg).add_h(m, c > 0 ? c : Rational(-c));
    for (const auto& [r, c] : e.reals) (c > 0 ? pos : neg).add_real(r, c > 0 ? c : Rational(-c));
    if (e.constant > 0) pos.constant = e.constant;
    if (e.constant < 0) neg.constant = -e.constant;
    return format_expr(pos, ctx) + " " + op + " " + format_expr(neg, ctx);
}

}  // namespace

Eii parse_statement(std::string_view text) {
    Parser p(text);
    Decls all, ex;
    if (p.keyword("forall")) all = p.decls();
    std::vector<RawRow> first = p.constraints(), second;
    const bool split = p.accept(">>");
    if (split) {
        if (p.keyword("exists")) ex = p.decls();
        second = p.constraints();
    }
    if (!p.at_end()) p.fail("unexpected trailing input");

    Eii e;
    std::vector<std::string> aux_reals;
    classify(ex, p, e.aux, aux_reals);
    if (!aux_reals.empty()) throw ParseError(ex.offset, "existential reals are only allowed in regions");
    std::set<std::string> bound(e.aux.begin(), e.aux.end());
    if (split && mentions(first, bound)) throw ParseError(0, "the premise mentions an existential variable");

    std::vector<std::string> rvs, reals;
    if (all.present) {
        classify(all, p, rvs, reals);
        for (const auto& n : rvs)
            if (bound.count(n)) throw ParseError(all.offset, "'" + n + "' is both universal and existential");
        std::set<std::string> declared(rvs.begin(), rvs.end());
        declared.insert(reals.begin(), reals.end());
        declared.insert(bound.begin(), bound.end());
        check_declared(p, declared);
    } else {
        free_names(p, bound, rvs, reals);
    }
    std::vector<std::string> names = rvs;
    names.insert(names.end(), reals.begin(), reals.end());
    names.insert(names.end(), e.aux.begin(), e.aux.end());
    check_unique(names, all.offset);

    e.base = VarContext(rvs, reals);
    const VarContext f = e.full();
    if (split) {
        e.premise = lower(first, f);
        e.consequence = lower(second, f);
    } else {
        e.consequence = lower(first, f);
    }
    e.validate();
    return e;
}

Eip parse_region(std::string_view text, const VarContext* base) { return parse_region_impl(text, base).region; }

std::pair<Eip, Eip> parse_region_pair(std::string_view a, std::string_view b) {
    RegionParse pa = parse_region_impl(a, nullptr), pb = parse_region_impl(b, nullptr);
    std::vector<std::string> rvs = pa.region.base.rvs(), reals = pa.region.base.reals();
    for (const auto& n : pb.region.base.rvs()) {
        if (std::find(reals.begin(), reals.end(), n) != reals.end())
            throw ParseError(0, "'" + n + "' is a real in the first region and a random variable in the second");
        if (std::find(rvs.begin(), rvs.end(), n) == rvs.end()) rvs.push_back(n);
    }
    for (const auto& n : pb.region.base.reals()) {
        if (std::find(rvs.begin(), rvs.end(), n) != rvs.end())
            throw ParseError(0, "'" + n + "' is a random variable in the first region and a real in the second");
        if (std::find(reals.begin(), reals.end(), n) == reals.end()) reals.push_back(n);
    }
    const VarContext base(rvs, reals);
    return {parse_region(a, &base), parse_region(b, &base)};
}

std::string print_constraints(const IneqSystem& s, const VarContext& ctx) {
    if (s.empty()) return "true";
    std::string out;
    for (std::size_t j = 0; j < s.rows.size(); ++j) {
        if (!out.empty()) out += ", ";
        if (j + 1 < s.rows.size() && s.rows[j + 1] == -s.rows[j]) {
            out += row_text(s.rows[j], ctx, "==");
            ++j;
        } else {
            out += row_text(s.rows[j], ctx, ">=");
        }
    }
    return out;
}

std::string print_statement(const Eii& e) {
    const VarContext f = e.full();
    std::string out = "forall " + decl_text(e.base.rvs(), e.base.reals()) + ": " + print_constraints(e.premise, f) + " >> ";
    if (!e.aux.empty()) out += "exists " + join(e.aux) + ": ";
    return out + print_constraints(e.consequence, f);
}

std::string print_region(const Eip& p) {
    std::string out = "forall " + decl_text(p.base.rvs(), p.base.reals()) + ": ";
    if (!p.aux.empty() || !p.aux_reals.empty()) out += "exists " + decl_text(p.aux, p.aux_reals) + ": ";
    return out + print_constraints(p.system, p.full());
}

}  // namespace itp
