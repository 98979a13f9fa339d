// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#include "itprove/entropy.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

namespace itp {

VarContext::VarContext(std::vector<std::string> rvs, std::vector<std::string> reals)
    : rvs_(std::move(rvs)), reals_(std::move(reals)) {
    if (rvs_.size() > kMaxRandomVars)
        throw std::invalid_argument("too many random variables (" + std::to_string(rvs_.size()) + ")");
    std::set<std::string> seen;
    for (const auto& name : rvs_)
        if (name.empty() || !seen.insert(name).second)
            throw std::invalid_argument("duplicate or empty variable name '" + name + "'");
    for (const auto& name : reals_)
        if (name.empty() || !seen.insert(name).second)
            throw std::invalid_argument("duplicate or empty variable name '" + name + "'");
}

std::optional<std::size_t> VarContext::rv_index(const std::string& name) const {
    for (std::size_t k = 0; k < rvs_.size(); ++k)
        if (rvs_[k] == name) return k;
    return std::nullopt;
}

std::optional<std::size_t> VarContext::real_index(const std::string& name) const {
    for (std::size_t k = 0; k < reals_.size(); ++k)
        if (reals_[k] == name) return k;
    return std::nullopt;
}

Mask VarContext::mask_of(const std::vector<std::string>& names) const {
    Mask m = 0;
    for (const auto& name : names) {
        auto k = rv_index(name);
        if (!k) throw InvalidIndex("unknown random variable '" + name + "'");
        m |= bit(*k);
    }
    return m;
}

std::vector<std::string> VarContext::names_of(Mask m) const {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < rvs_.size(); ++k)
        if (m & bit(k)) out.push_back(rvs_[k]);
    return out;
}

VarContext VarContext::with_rvs(const std::vector<std::string>& extra) const {
    auto rvs = rvs_;
    rvs.insert(rvs.end(), extra.begin(), extra.end());
    return VarContext(std::move(rvs), reals_);
}

VarContext VarContext::with_reals(const std::vector<std::string>& extra) const {
    auto reals = reals_;
    reals.insert(reals.end(), extra.begin(), extra.end());
    return VarContext(rvs_, std::move(reals));
}

EntropyExpr EntropyExpr::entropy(Mask subset, const Rational& coeff) {
    EntropyExpr e;
    e.add_h(subset, coeff);
    return e;
}

EntropyExpr EntropyExpr::real(std::size_t index, const Rational& coeff) {
    EntropyExpr e;
    e.add_real(index, coeff);
    return e;
}

EntropyExpr EntropyExpr::constant_term(const Rational& value) {
    EntropyExpr e;
    e.constant = value;
    return e;
}

Mask EntropyExpr::support() const {
    Mask m = 0;
    for (const auto& [s, c] : h) m |= s;
    return m;
}

Rational EntropyExpr::coeff(Mask m) const {
    auto it = h.find(m);
    return it == h.end() ? Rational(0) : it->second;
}

Rational EntropyExpr::real_coeff(std::size_t r) const {
    auto it = reals.find(r);
    return it == reals.end() ? Rational(0) : it->second;
}

void EntropyExpr::add_h(Mask m, const Rational& c) {
    if (m == 0 || c == 0) return;  // h_emptyset = 0
    auto [it, inserted] = h.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) h.erase(it);
    }
}

void EntropyExpr::add_real(std::size_t r, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = reals.try_emplace(r, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) reals.erase(it);
    }
}

EntropyExpr& EntropyExpr::operator+=(const EntropyExpr& o) {
    for (const auto& [m, c] : o.h) add_h(m, c);
    for (const auto& [r, c] : o.reals) add_real(r, c);
    constant += o.constant;
    return *this;
}

EntropyExpr& EntropyExpr::operator-=(const EntropyExpr& o) {
    for (const auto& [m, c] : o.h) add_h(m, -c);
    for (const auto& [r, c] : o.reals) add_real(r, -c);
    constant -= o.constant;
    return *this;
}

EntropyExpr& EntropyExpr::operator*=(const Rational& s) {
    if (s == 0) {
        h.clear();
        reals.clear();
        constant = 0;
        return *this;
    }
    for (auto& [m, c] : h) c *= s;
    for (auto& [r, c] : reals) c *= s;
    constant *= s;
    return *this;
}

EntropyExpr EntropyExpr::operator-() const {
    EntropyExpr e = *this;
    e *= Rational(-1);
    return e;
}

bool operator<(const EntropyExpr& a, const EntropyExpr& b) {
    if (a.h != b.h) return a.h < b.h;
    if (a.reals != b.reals) return a.reals < b.reals;
    return a.constant < b.constant;
}

EntropyExpr entropy_term(const VarContext& ctx, Mask subset, Mask given) {
    if (!ctx.valid(subset) || !ctx.valid(given))
        throw InvalidIndex("subset out of range for a context of " + std::to_string(ctx.num_rvs()) + " variables");
    EntropyExpr e;
    e.add_h(subset | given, 1);
    e.add_h(given, -1);
    return e;
}

EntropyExpr mutual_info_term(const VarContext& ctx, Mask a, Mask b, Mask given) {
    if (!ctx.valid(a) || !ctx.valid(b) || !ctx.valid(given))
        throw InvalidIndex("subset out of range for a context of " + std::to_string(ctx.num_rvs()) + " variables");
    EntropyExpr e;
    e.add_h(a | given, 1);
    e.add_h(b | given, 1);
    e.add_h(a | b | given, -1);
    e.add_h(given, -1);
    return e;
}

namespace {

std::string join_names(const VarContext& ctx, Mask m) {
    std::string out;
    for (std::size_t k = 0; k < ctx.num_rvs(); ++k) {
        if (!(m & bit(k))) continue;
        if (!out.empty()) out += ',';
        out += ctx.rv(k);
    }
    return out;
}

void append_term(std::string& out, const Rational& c, const std::string& atom) {
    Rational mag = abs(c);
    if (out.empty()) {
        if (c < 0) out += "-";
    } else {
        out += c < 0 ? " - " : " + ";
    }
    if (atom.empty()) {
        out += to_string(mag);
        return;
    }
    if (mag != 1) out += to_string(mag) + "*";
    out += atom;
}

}  // namespace

std::string format_expr(const EntropyExpr& e, const VarContext& ctx) {
    std::string out;
    for (const auto& [m, c] : e.h) append_term(out, c, "H(" + join_names(ctx, m) + ")");
    for (const auto& [r, c] : e.reals)
        append_term(out, c, r < ctx.num_reals() ? ctx.real(r) : "R" + std::to_string(r));
    if (e.constant != 0) append_term(out, e.constant, "");
    return out.empty() ? "0" : out;
}

double evaluate(const EntropyExpr& e, const EntropicVector& h, std::span<const double> reals) {
    double v = e.constant.get_d();
    for (const auto& [m, c] : e.h) {
        if (m > full_mask(h.n)) throw InvalidIndex("expression uses a subset outside the entropic vector");
        v += c.get_d() * h[m];
    }
    for (const auto& [r, c] : e.reals) {
        if (r >= reals.size()) throw std::invalid_argument("missing value for real variable #" + std::to_string(r));
        v += c.get_d() * reals[r];
    }
    return v;
}

std::size_t JointPmf::size() const {
    return std::accumulate(alphabet.begin(), alphabet.end(), std::size_t{1}, std::multiplies<>());
}

EntropicVector entropic_vector_of_pmf(const JointPmf& pmf) {
    const std::size_t n = pmf.num_vars();
    if (n > kMaxRandomVars) throw InvalidPmf("too many variables");
    if (pmf.p.size() != pmf.size()) throw InvalidPmf("probability table size does not match the alphabets");
    double total = 0;
    for (double v : pmf.p) {
        if (!(v >= 0) || !std::isfinite(v)) throw InvalidPmf("negative or non-finite probability");
        total += v;
    }
    if (std::fabs(total - 1.0) > 1e-12) throw InvalidPmf("probabilities do not sum to 1");

    EntropicVector out(n);
    const std::size_t cells = pmf.size();
    std::vector<std::size_t> digits(n);
    for (Mask s = 1; s <= full_mask(n); ++s) {
        // marginal over the variables in s, keyed by the mixed-radix index of s's digits
        std::map<std::size_t, double> marginal;
        std::fill(digits.begin(), digits.end(), 0);
        for (std::size_t cell = 0; cell < cells; ++cell) {
            std::size_t key = 0;
            for (std::size_t k = 0; k < n; ++k)
                if (s & bit(k)) key = key * pmf.alphabet[k] + digits[k];
            marginal[key] += pmf.p[cell];
            for (std::size_t k = n; k-- > 0;) {
                if (++digits[k] < pmf.alphabet[k]) break;
                digits[k] = 0;
            }
        }
        double hs = 0;
        for (const auto& [key, q] : marginal)
            if (q > 0) hs -= q * std::log2(q);
        out.at(s) = hs;
    }
    return out;
}

}  // namespace itp
