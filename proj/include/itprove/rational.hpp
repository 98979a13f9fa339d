// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace itp {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline double to_double(const Rational& r) { return r.get_d(); }

std::string to_string(const Rational& r);

/// Parses "3", "-2/5" or a finite decimal such as "0.25" or "1e-3" exactly.
std::optional<Rational> parse_rational(std::string_view text);

/// Best rational approximation of `x` with denominator at most `max_den`
/// (continued-fraction convergents and semiconvergents).
Rational rationalize(double x, std::int64_t max_den);

}  // namespace itp
