// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#include "itprove/rational.hpp"

#include <cctype>
#include <cmath>

namespace itp {

std::string to_string(const Rational& r) {
    return r.get_str();
}

std::optional<Rational> parse_rational(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::string s(text);
    bool neg = false;
    std::size_t pos = 0;
    if (s[pos] == '+' || s[pos] == '-') {
        neg = s[pos] == '-';
        ++pos;
    }
    if (pos >= s.size()) return std::nullopt;

    auto slash = s.find('/', pos);
    if (slash != std::string::npos) {
        std::string num = s.substr(pos, slash - pos);
        std::string den = s.substr(slash + 1);
        if (num.empty() || den.empty()) return std::nullopt;
        for (char c : num)
            if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        for (char c : den)
            if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        mpz_class d(den);
        if (d == 0) return std::nullopt;
        Rational r(mpz_class(num), d);
        r.canonicalize();
        return neg ? Rational(-r) : r;
    }

    // decimal with optional fraction and exponent
    mpz_class mant = 0;
    long scale = 0;
    bool any_digit = false;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        mant = mant * 10 + (s[pos] - '0');
        any_digit = true;
        ++pos;
    }
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            mant = mant * 10 + (s[pos] - '0');
            --scale;
            any_digit = true;
            ++pos;
        }
    }
    if (!any_digit) return std::nullopt;
    if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
        ++pos;
        bool eneg = false;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
            eneg = s[pos] == '-';
            ++pos;
        }
        if (pos >= s.size()) return std::nullopt;
        long e = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            e = e * 10 + (s[pos] - '0');
            if (e > 100000) return std::nullopt;
            ++pos;
        }
        scale += eneg ? -e : e;
    }
    if (pos != s.size()) return std::nullopt;

    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
    Rational r = scale >= 0 ? Rational(mant * ten_pow) : Rational(mant, ten_pow);
    r.canonicalize();
    return neg ? Rational(-r) : r;
}

Rational rationalize(double x, std::int64_t max_den) {
    if (!std::isfinite(x)) return Rational(0);
    const bool neg = x < 0;
    double v = std::fabs(x);
    // convergents h/k
    mpz_class h_prev = 1, h = static_cast<long>(std::floor(v));
    mpz_class k_prev = 0, k = 1;
    double frac = v - std::floor(v);
    mpz_class bound = max_den;
    for (int iter = 0; iter < 64 && frac > 1e-300; ++iter) {
        double inv = 1.0 / frac;
        double a_d = std::floor(inv);
        if (a_d > 1e15) break;
        mpz_class a = static_cast<long>(a_d);
        mpz_class k_next = a * k + k_prev;
        if (k_next > bound) {
            // semiconvergent with the largest admissible multiplier
            mpz_class m = (bound - k_prev) / k;
            if (m > 0) {
                mpz_class hs = m * h + h_prev;
                mpz_class ks = m * k + k_prev;
                Rational cand(hs, ks), cur(h, k);
                Rational target(v);
                if (abs(cand - target) < abs(cur - target)) {
                    h = hs;
                    k = ks;
                }
            }
            break;
        }
        mpz_class h_next = a * h + h_prev;
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
        frac = inv - a_d;
    }
    Rational r(h, k);
    r.canonicalize();
    return neg ? Rational(-r) : r;
}

}  // namespace itp
