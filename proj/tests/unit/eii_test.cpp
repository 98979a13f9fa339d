// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "itprove/eii.hpp"
#include "itprove/lp_prover.hpp"
#include "pmf_util.hpp"

using namespace itp;
using itp::testing::derive;
using itp::testing::random_pmf;
using itp::testing::rank;
using itp::testing::unrank;

namespace {

// p(x, y, u) = p(x, y) p_{Y|X}(u | x), with X = (X1..Xn), Y = (Y1..Yl).
JointPmf conditional_copy(const JointPmf& xy, std::size_t n, std::size_t l) {
    JointPmf out{xy.alphabet, {}};
    for (std::size_t k = 0; k < l; ++k) out.alphabet.push_back(xy.alphabet[n + k]);
    out.p.assign(out.size(), 0.0);
    std::map<std::vector<std::size_t>, double> px;
    for (std::size_t i = 0; i < xy.p.size(); ++i) {
        auto v = unrank(xy, i);
        px[std::vector<std::size_t>(v.begin(), v.begin() + static_cast<long>(n))] += xy.p[i];
    }
    for (std::size_t i = 0; i < xy.p.size(); ++i) {
        auto v = unrank(xy, i);
        std::vector<std::size_t> x(v.begin(), v.begin() + static_cast<long>(n));
        for (std::size_t j = 0; j < xy.p.size(); ++j) {
            auto w = unrank(xy, j);
            if (!std::equal(x.begin(), x.end(), w.begin())) continue;
            if (px[x] == 0) continue;
            auto full = v;
            full.insert(full.end(), w.begin() + static_cast<long>(n), w.end());
            out.p[rank(out.alphabet, full)] += xy.p[i] * xy.p[j] / px[x];
        }
    }
    return out;
}

void expect_rows_hold(const IneqSystem& s, const EntropicVector& h, std::span<const double> reals = {}) {
    for (const auto& r : s.rows) EXPECT_GE(evaluate(r, h, reals), -1e-9);
}

}  // namespace

TEST(Lemmas, CopyLemmaHoldsForConditionalCopies) {
    std::mt19937 rng(11);
    for (auto [n, l] : {std::pair<std::size_t, std::size_t>{1, 1}, {2, 1}, {1, 2}}) {
        Eii e = copy_lemma(n, l);
        ASSERT_NO_THROW(e.validate());
        EXPECT_EQ(e.n(), n + l);
        EXPECT_EQ(e.l(), l);
        // one CI equality plus 2^n (2^l - 1) entropy equalities
        EXPECT_EQ(e.consequence.size(), 2 * (1 + (std::size_t{1} << n) * ((std::size_t{1} << l) - 1)));
        for (int trial = 0; trial < 5; ++trial) {
            auto pmf = conditional_copy(random_pmf(rng, n + l, 2), n, l);
            expect_rows_hold(e.consequence, entropic_vector_of_pmf(pmf));
        }
    }
}

TEST(Lemmas, CopyLemmaRowsFailForAnIndependentCopy) {
    // U independent of everything violates H(X,U) = H(X,Y) when X and Y are correlated.
    Eii e = copy_lemma(1, 1);
    JointPmf xy{{2, 2}, {0.5, 0, 0, 0.5}};
    auto pmf = derive(xy, {2, 2, 2}, {[](auto& v) { return v[0]; }, [](auto& v) { return v[1]; },
                                      [](auto&) -> std::size_t { return 0; }});
    auto h = entropic_vector_of_pmf(pmf);
    bool violated = false;
    for (const auto& r : e.consequence.rows) violated |= evaluate(r, h) < -1e-6;
    EXPECT_TRUE(violated);
}

TEST(Lemmas, FrlAndDoubleMarkovShapes) {
    Eii f = frl();
    EXPECT_EQ(f.base.rvs(), (std::vector<std::string>{"X", "Y"}));
    EXPECT_EQ(f.aux, std::vector<std::string>{"U"});
    EXPECT_TRUE(f.premise.empty());
    // with X independent of Y, U = Y satisfies FRL
    JointPmf xy{{2, 2}, {0.25, 0.25, 0.25, 0.25}};
    auto pmf = derive(xy, {2, 2, 2}, {[](auto& v) { return v[0]; }, [](auto& v) { return v[1]; },
                                      [](auto& v) { return v[1]; }});
    expect_rows_hold(f.consequence, entropic_vector_of_pmf(pmf));

    Eii g = frl_with_gap(make_rational(1, 2));
    EXPECT_EQ(g.consequence.size(), f.consequence.size() + 1);
    EXPECT_EQ(g.consequence.rows.back().constant, make_rational(1, 2));

    Eii d = double_markov();
    EXPECT_EQ(d.premise.size(), 4u);
    EXPECT_EQ(d.consequence.size(), 6u);
}

TEST(Lemmas, InfiniteDivisibilityConstant) {
    Rational c = e_over_e_minus_1();
    double e = std::exp(1.0);
    EXPECT_NEAR(to_double(c), e / (e - 1), 1e-15);
    Eii id = infinite_divisibility(3);
    EXPECT_EQ(id.l(), 3u);
    const auto& last = id.consequence.rows.back();
    EXPECT_EQ(last.constant, make_rational(243, 100));
    EXPECT_EQ(last.coeff(1), c / 3);
    EXPECT_EQ(last.coeff(2), -1);
}

TEST(Conjunction, RenamesClashesAndLinksAuxiliaries) {
    Eii a = frl(), b = frl();
    Eii c = conjunction(a, b);
    EXPECT_EQ(c.base.rvs(), (std::vector<std::string>{"X", "Y", "X'", "Y'"}));
    EXPECT_EQ(c.aux, (std::vector<std::string>{"U", "U'"}));
    EXPECT_EQ(c.consequence.size(), a.consequence.size() + b.consequence.size() + 4);
    // U, Y' clean copy: the first block is unchanged up to embedding
    VarContext f = c.full();
    EXPECT_EQ(c.consequence.rows[0], mutual_info_term(f, f.mask_of({"X"}), f.mask_of({"U"})));

    Eii d = conjunction(double_markov(), copy_lemma(1, 1));
    EXPECT_EQ(d.n(), 5u);
    EXPECT_EQ(d.l(), 2u);
    EXPECT_EQ(d.premise.size(), 4u);
    ASSERT_NO_THROW(d.validate());
}

TEST(QuantityInequality, BuildsUniversalAndExistentialSides) {
    VarContext base({"X", "Y"});
    // inf_{U: H(U|X,Y) = 0} H(U) >= inf_{V: I(V;Y) = 0} H(X|V)
    InfoQuantity lhs{{"U"}, {}, EntropyExpr::entropy(4)};
    lhs.constraints.add_eq(entropy_term(base.with_rvs({"U"}), 4, 3));
    InfoQuantity rhs{{"U"}, {}, entropy_term(base.with_rvs({"U"}), 1, 4)};
    rhs.constraints.add_eq(mutual_info_term(base.with_rvs({"U"}), 4, 2));
    Eii e = quantity_inequality_to_eii(base, lhs, rhs);
    EXPECT_EQ(e.base.rvs(), (std::vector<std::string>{"X", "Y", "U"}));
    EXPECT_EQ(e.aux, std::vector<std::string>{"U'"});
    EXPECT_EQ(e.premise.size(), 2u);
    EXPECT_EQ(e.consequence.size(), 3u);
    VarContext f = e.full();
    EXPECT_EQ(e.consequence.rows.back(),
              EntropyExpr::entropy(4) - entropy_term(f, 1, f.mask_of({"U'"})));
}

TEST(Reals, NativeEncodingAgreesWithEntropySubstitution) {
    // Affine CII-shaped EIIs: prove row by row both ways and compare verdicts.
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> coef(-2, 2);
    VarContext ctx({"X", "Y"}, {"R", "S"});
    int agree = 0, proved = 0;
    for (int trial = 0; trial < 60; ++trial) {
        Eii e;
        e.base = ctx;
        e.premise.add_ge(EntropyExpr::real(0));
        EntropyExpr p;
        for (Mask m = 1; m <= 3; ++m) p.add_h(m, coef(rng));
        p.add_real(0, coef(rng));
        p.add_real(1, coef(rng));
        e.premise.add_ge(p);
        EntropyExpr g;
        for (Mask m = 1; m <= 3; ++m) g.add_h(m, coef(rng));
        g.add_real(0, coef(rng));
        g.add_real(1, coef(rng));
        e.consequence.add_ge(g);

        auto cols = encode_reals(e);
        ASSERT_EQ(cols.size(), 2u);
        EXPECT_TRUE(cols[0].nonnegative);
        EXPECT_EQ(cols[1].columns, cols[1].nonnegative ? 1 : 2);

        Eii s = reals_as_entropies(e);
        EXPECT_EQ(s.reals(), 0u);
        EXPECT_EQ(s.n(), 2u + 1u + static_cast<std::size_t>(cols[1].columns));
        bool a = prove_cii({e.base, e.premise, e.consequence.rows[0]}).proved;
        bool b = prove_cii({s.base, s.premise, s.consequence.rows[0]}).proved;
        agree += a == b;
        proved += a;
    }
    EXPECT_EQ(agree, 60);
    EXPECT_GT(proved, 0);
}

TEST(PastFuture, ContextShape) {
    auto m = past_future_converse_context({"X", "Y"}, {"Q"});
    EXPECT_EQ(m.context.rvs(), (std::vector<std::string>{"Q", "X", "Xp", "Xf", "Y", "Yp", "Yf"}));
    EXPECT_EQ(m.csiszar.size(), 4u);
    auto m2 = past_future_converse_context({"X", "Y"});
    EXPECT_EQ(m2.context.num_rvs(), 6u);
    EXPECT_EQ(m2.csiszar.size(), 4u);
    EXPECT_THROW(past_future_converse_context({"X"}), std::invalid_argument);
}

TEST(PastFuture, CsiszarIdentityHoldsOnTwoLetterSequences) {
    // Base (X1, X2, Y1, Y2, Q) with Q uniform on {0, 1} and independent; the
    // present/past/future variables at time Q are deterministic functions.
    std::mt19937 rng(3);
    auto m = past_future_converse_context({"X", "Y"}, {"Q"});
    for (int trial = 0; trial < 10; ++trial) {
        auto seq = random_pmf(rng, 4, 2, 0.2);
        JointPmf base{{2, 2, 2, 2, 2}, {}};
        base.p.resize(base.size());
        for (std::size_t i = 0; i < seq.p.size(); ++i)
            for (std::size_t q = 0; q < 2; ++q) base.p[i * 2 + q] = seq.p[i] / 2;
        auto at = [](std::size_t off, int which) {
            // which: 0 present, -1 past, +1 future; 2 marks "empty"
            return [off, which](const std::vector<std::size_t>& v) -> std::size_t {
                std::size_t q = v[4];
                long t = static_cast<long>(q) + which;
                if (which != 0 && (t < 0 || t > 1)) return 2;
                return v[off + static_cast<std::size_t>(which == 0 ? q : static_cast<std::size_t>(t))];
            };
        };
        auto pmf = derive(base, {2, 2, 3, 3, 2, 3, 3},
                          {[](auto& v) { return v[4]; }, at(0, 0), at(0, -1), at(0, +1), at(2, 0), at(2, -1),
                           at(2, +1)});
        auto h = entropic_vector_of_pmf(pmf);
        for (const auto& r : m.csiszar.rows) EXPECT_NEAR(evaluate(r, h), 0, 1e-9);
    }
}
