// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "itprove/entropy.hpp"
#include "itprove/rational.hpp"

using namespace itp;

namespace {

// Direct marginalization oracle for a single subset, independent of the
// library's mixed-radix walk: enumerates every cell by explicit decoding.
double brute_entropy(const JointPmf& pmf, Mask s) {
    std::map<std::vector<std::size_t>, double> marg;
    const std::size_t n = pmf.num_vars();
    for (std::size_t cell = 0; cell < pmf.p.size(); ++cell) {
        std::vector<std::size_t> x(n);
        std::size_t rem = cell;
        for (std::size_t k = n; k-- > 0;) {
            x[k] = rem % pmf.alphabet[k];
            rem /= pmf.alphabet[k];
        }
        std::vector<std::size_t> key;
        for (std::size_t k = 0; k < n; ++k)
            if (s & bit(k)) key.push_back(x[k]);
        marg[key] += pmf.p[cell];
    }
    double h = 0;
    for (auto& [k, q] : marg)
        if (q > 0) h -= q * std::log(q) / std::log(2.0);
    return h;
}

JointPmf random_pmf(std::mt19937& rng, std::vector<std::size_t> alphabet) {
    JointPmf pmf{std::move(alphabet), {}};
    std::uniform_real_distribution<double> u(0.0, 1.0);
    pmf.p.resize(pmf.size());
    double total = 0;
    for (auto& v : pmf.p) total += (v = u(rng) < 0.2 ? 0.0 : u(rng));
    for (auto& v : pmf.p) v /= total;
    // exact renormalization of the last cell keeps the sum within 1e-12
    double s = 0;
    for (std::size_t i = 0; i + 1 < pmf.p.size(); ++i) s += pmf.p[i];
    pmf.p.back() = std::max(0.0, 1.0 - s);
    return pmf;
}

}  // namespace

TEST(Rational, ParseForms) {
    EXPECT_EQ(*parse_rational("3"), Rational(3));
    EXPECT_EQ(*parse_rational("-2/4"), make_rational(-1, 2));
    EXPECT_EQ(*parse_rational("0.25"), make_rational(1, 4));
    EXPECT_EQ(*parse_rational("1e-3"), make_rational(1, 1000));
    EXPECT_EQ(*parse_rational("2.5E2"), Rational(250));
    EXPECT_FALSE(parse_rational("1/0"));
    EXPECT_FALSE(parse_rational("abc"));
    EXPECT_FALSE(parse_rational(""));
}

TEST(Rational, RationalizeRecoversSmallFractions) {
    for (long den = 1; den <= 60; ++den)
        for (long num = -70; num <= 70; num += 7) {
            Rational q = make_rational(num, den);
            EXPECT_EQ(rationalize(q.get_d(), 1'000'000), q) << num << "/" << den;
        }
    Rational pi = rationalize(M_PI, 1000);
    EXPECT_EQ(pi, make_rational(355, 113));
}

TEST(VarContext, RejectsDuplicates) {
    EXPECT_THROW(VarContext({"X", "X"}), std::invalid_argument);
    EXPECT_THROW(VarContext({"X"}, {"X"}), std::invalid_argument);
    VarContext ctx({"X", "Y", "Z"}, {"R"});
    EXPECT_EQ(ctx.mask_of({"X", "Z"}), 0b101u);
    EXPECT_THROW(ctx.mask_of({"W"}), InvalidIndex);
    EXPECT_EQ(ctx.names_of(0b110), (std::vector<std::string>{"Y", "Z"}));
}

TEST(EntropyExpr, TermsAndArithmetic) {
    VarContext ctx({"X", "Y", "Z"});
    auto i = mutual_info_term(ctx, 0b001, 0b010, 0b100);
    EXPECT_EQ(i.coeff(0b101), Rational(1));
    EXPECT_EQ(i.coeff(0b110), Rational(1));
    EXPECT_EQ(i.coeff(0b111), Rational(-1));
    EXPECT_EQ(i.coeff(0b100), Rational(-1));
    // I(X;Y) + H(X|Y) == H(X)
    auto lhs = mutual_info_term(ctx, 0b001, 0b010) + entropy_term(ctx, 0b001, 0b010);
    EXPECT_EQ(lhs, EntropyExpr::entropy(0b001));
    EXPECT_TRUE((i - i).is_zero());
    EXPECT_THROW(entropy_term(ctx, 0b1000), InvalidIndex);
    EXPECT_EQ(format_expr(entropy_term(ctx, 0b001, 0b010), ctx), "-H(Y) + H(X,Y)");
}

TEST(EntropicVector, MatchesBruteForceOracle) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        auto pmf = random_pmf(rng, {2, 3, 2, static_cast<std::size_t>(2 + trial % 3)});
        auto h = entropic_vector_of_pmf(pmf);
        for (Mask s = 1; s < 16; ++s) EXPECT_NEAR(h[s], brute_entropy(pmf, s), 1e-12);
    }
}

TEST(EntropicVector, KnownValues) {
    // X uniform bit, Y = X, Z independent uniform bit
    JointPmf pmf{{2, 2, 2}, {0.25, 0.25, 0, 0, 0, 0, 0.25, 0.25}};
    auto h = entropic_vector_of_pmf(pmf);
    EXPECT_NEAR(h[0b001], 1.0, 1e-15);
    EXPECT_NEAR(h[0b011], 1.0, 1e-15);
    EXPECT_NEAR(h[0b111], 2.0, 1e-15);
    VarContext ctx({"X", "Y", "Z"});
    EXPECT_NEAR(evaluate(mutual_info_term(ctx, 1, 2), h), 1.0, 1e-15);
    EXPECT_NEAR(evaluate(mutual_info_term(ctx, 1, 4), h), 0.0, 1e-15);
}

TEST(EntropicVector, RejectsBadPmf) {
    EXPECT_THROW(entropic_vector_of_pmf({{2}, {0.5, 0.6}}), InvalidPmf);
    EXPECT_THROW(entropic_vector_of_pmf({{2}, {1.5, -0.5}}), InvalidPmf);
    EXPECT_THROW(entropic_vector_of_pmf({{2, 2}, {1.0}}), InvalidPmf);
}

TEST(Evaluate, MissingRealThrows) {
    EntropicVector h(1);
    EXPECT_THROW(evaluate(EntropyExpr::real(0), h), std::invalid_argument);
    std::vector<double> r{2.5};
    EXPECT_DOUBLE_EQ(evaluate(EntropyExpr::real(0, 2) + EntropyExpr::constant_term(1), h, r), 6.0);
}
