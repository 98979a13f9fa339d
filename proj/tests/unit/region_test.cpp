// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#include "itprove/region.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fm_oracle.hpp"
#include "instances.hpp"
#include "itprove/lp_prover.hpp"

namespace itp {
namespace {

using itp::testing::common_part_region;
using itp::testing::independent_aux_region;
using itp::testing::superposition_region;
using namespace itp::testing::fm;

bool equivalent(const Eip& a, const Eip& b) { return eip_implies(a, b).proved() && eip_implies(b, a).proved(); }

TEST(EipImplies, Reflexive) {
    const Eip p = superposition_region();
    SearchResult r = eip_implies(p, p);
    EXPECT_TRUE(r.proved());
}

TEST(EipImplies, DroppingARowRelaxes) {
    const Eip p = superposition_region();
    Eip q = p;
    q.system.rows.erase(q.system.rows.begin() + 2);  // R1 + R2 <= I(X;Y1)
    EXPECT_TRUE(eip_implies(p, q).proved());
    EXPECT_FALSE(eip_implies(q, p).proved());
}

TEST(EipImplies, ExtraRowIsNotImplied) {
    const Eip p = superposition_region();
    Eip q = p;
    q.system.add_le(EntropyExpr::real(0), EntropyExpr());
    EXPECT_EQ(eip_implies(p, q).status, SearchStatus::NotProved);
}

TEST(EipImplies, DifferentBasesAreRejected) {
    Eip a = superposition_region(), b = independent_aux_region();
    EXPECT_THROW(eip_implies(a, b), std::invalid_argument);
}

TEST(EipImplies, ExistentialRealsOfTheRightSideAreProjected) {
    // x <= z, z <= y  is  x <= y.
    Eip q = real_region(1);
    q.system.add_ge(EntropyExpr::real(2) - EntropyExpr::real(0));
    q.system.add_ge(EntropyExpr::real(1) - EntropyExpr::real(2));
    Eip p = real_region(0);
    p.system.add_ge(EntropyExpr::real(1) - EntropyExpr::real(0));
    EXPECT_TRUE(eip_implies(p, q).proved());
    EXPECT_TRUE(eip_implies(q, p).proved());
    Eip strict = real_region(0);
    strict.system.add_ge(EntropyExpr::real(1) - EntropyExpr::real(0) - EntropyExpr::constant_term(1));
    EXPECT_FALSE(eip_implies(q, strict).proved());
}

TEST(RedundantRows, ShannonRowsGo) {
    Eip p;
    p.base = VarContext({"X", "Y"});
    p.system.add_ge(mutual_info_term(p.base, 1, 2));
    p.system.add_ge(entropy_term(p.base, 1));
    std::vector<DroppedRow> dropped;
    EXPECT_TRUE(remove_redundant_rows(p, {}, &dropped).system.empty());
    EXPECT_EQ(dropped.size(), 2u);
}

TEST(RedundantRows, LooserBoundGoes) {
    Eip p;
    p.base = VarContext({"X", "Y", "Z"}, {"R"});
    const EntropyExpr R = EntropyExpr::real(0), I = mutual_info_term(p.base, 1, 2);
    p.system.add_le(R, I);
    p.system.add_le(R, I + entropy_term(p.base, 4));
    std::vector<DroppedRow> dropped;
    Eip out = remove_redundant_rows(p, {}, &dropped);
    ASSERT_EQ(out.system.size(), 1u);
    EXPECT_EQ(out.system.rows[0], I - R);
    ASSERT_EQ(dropped.size(), 1u);
    CiiQuery q{p.full(), IneqSystem(dropped[0].remaining), dropped[0].row};
    EXPECT_TRUE(verify_certificate(q, dropped[0].certificate));
}

TEST(RedundantRows, SuperpositionRowsAllStay) {
    const Eip p = superposition_region();
    EXPECT_EQ(remove_redundant_rows(p).system, p.system);
}

TEST(RedundantRows, IdempotentAndOrderIndependentUpToEquivalence) {
    std::mt19937 rng(11);
    for (int t = 0; t < 20; ++t) {
        Eip p;
        p.base = VarContext({"X", "Y"}, {"R"});
        std::uniform_int_distribution<int> c(-2, 2), m(1, 3);
        for (int k = 0; k < 4; ++k) {
            EntropyExpr e = EntropyExpr::real(0, c(rng));
            for (int j = 0; j < 2; ++j) e.add_h(static_cast<Mask>(m(rng)), c(rng));
            if (!e.is_zero()) p.system.add_ge(e);
        }
        const Eip once = remove_redundant_rows(p);
        EXPECT_EQ(remove_redundant_rows(once).system, once.system);
        const Eip rev = remove_redundant_rows(p, {}, nullptr, true);
        EXPECT_TRUE(equivalent(once, p)) << t;
        EXPECT_TRUE(equivalent(once, rev)) << t;
        for (std::size_t k = 0; k < once.system.size(); ++k) {
            IneqSystem rest;
            for (std::size_t j = 0; j < once.system.size(); ++j)
                if (j != k) rest.add_ge(once.system.rows[j]);
            EXPECT_FALSE(prove_cii({once.full(), rest, once.system.rows[k]}).proved) << t;
        }
    }
}

TEST(FourierMotzkin, OneSidedBoundVanishes) {
    // exists R0: R0 >= 0, R0 <= I(X;Y)
    Eip p;
    p.base = VarContext({"X", "Y"});
    p.aux_reals = {"R0"};
    const VarContext f = p.full();
    p.system.add_ge(EntropyExpr::real(0));
    p.system.add_le(EntropyExpr::real(0), mutual_info_term(f, 1, 2));
    Eip out = fourier_motzkin(p, "R0");
    EXPECT_TRUE(out.aux_reals.empty());
    EXPECT_TRUE(out.system.empty());
}

TEST(FourierMotzkin, SplitRate) {
    // exists R0: R1 <= a + R0, R2 <= b - R0, R0 >= 0 with a = H(X), b = H(Y)
    Eip p;
    p.base = VarContext({"X", "Y"}, {"R1", "R2"});
    p.aux_reals = {"R0"};
    const VarContext f = p.full();
    const EntropyExpr R1 = EntropyExpr::real(0), R2 = EntropyExpr::real(1), R0 = EntropyExpr::real(2);
    const EntropyExpr a = entropy_term(f, 1), b = entropy_term(f, 2);
    p.system.add_le(R1, a + R0);
    p.system.add_le(R2, b - R0);
    p.system.add_ge(R0);
    Eip out = fourier_motzkin(p, "R0");
    IneqSystem want;
    want.add_le(R1 + R2, a + b);
    want.add_le(R2, b);
    EXPECT_EQ(canonical(out.system), canonical(want));
}

TEST(FourierMotzkin, BoundedShareKeepsFourRows) {
    // as above with R0 <= R2 and R1 - R0 <= a
    Eip p;
    p.base = VarContext({"X", "Y"}, {"R1", "R2"});
    p.aux_reals = {"R0"};
    const VarContext f = p.full();
    const EntropyExpr R1 = EntropyExpr::real(0), R2 = EntropyExpr::real(1), R0 = EntropyExpr::real(2);
    const EntropyExpr a = entropy_term(f, 1), b = entropy_term(f, 2);
    p.system.add_le(R1 - R0, a);
    p.system.add_le(R2 + R0, b);
    p.system.add_ge(R0);
    p.system.add_le(R0, R2);
    Eip out = fourier_motzkin(p, "R0");
    IneqSystem want;
    want.add_le(R1 + R2, a + b);
    want.add_le(R1, a + R2);
    want.add_le(R2, b);
    want.add_ge(R2);
    EXPECT_EQ(canonical(out.system), canonical(want));
}

TEST(FourierMotzkin, MatchesDirectProjectionOnRandomSystems) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> coord(-40, 40), rows(1, 8);
    int points = 0, inside = 0;
    for (int t = 0; t < 60; ++t) {
        Eip p = real_region(1);
        const int k = rows(rng);
        for (int j = 0; j < k; ++j) p.system.add_ge(random_real_row(rng, 3));
        const Eip raw = fourier_motzkin(p, "z0", false);
        const Eip pruned = fourier_motzkin(p, "z0", true);
        for (int s = 0; s < 40; ++s) {
            const Rational x(coord(rng), 8), y(coord(rng), 8);
            const bool want = exists_z(p.system, x, y);
            EXPECT_EQ(holds(raw.system, {x, y}), want) << t;
            EXPECT_EQ(holds(pruned.system, {x, y}), want) << t;
            ++points;
            inside += want;
        }
    }
    EXPECT_GE(points, 1000);
    EXPECT_GT(inside, 100);
    EXPECT_LT(inside, points - 100);
}

TEST(FourierMotzkin, TwoEliminationsMatchVertexOracle) {
    std::mt19937 rng(6);
    std::uniform_int_distribution<int> coord(-40, 40), rows(2, 8);
    int points = 0, inside = 0;
    for (int t = 0; t < 40; ++t) {
        Eip p = real_region(2);
        const int k = rows(rng);
        for (int j = 0; j < k; ++j) p.system.add_ge(random_real_row(rng, 4));
        Eip out = fourier_motzkin(fourier_motzkin(p, "z0", false), "z1", false);
        for (int s = 0; s < 30; ++s) {
            const Rational x(coord(rng), 8), y(coord(rng), 8);
            const bool want = exists_zw(p.system, x, y);
            EXPECT_EQ(holds(out.system, {x, y}), want) << t;
            ++points;
            inside += want;
        }
    }
    EXPECT_GE(points, 1000);
    EXPECT_GT(inside, 100);
}

TEST(FourierMotzkin, FeasiblePointsProjectIntoTheResult) {
    std::mt19937 rng(8);
    std::uniform_int_distribution<int> coord(-40, 40);
    int hits = 0;
    for (int t = 0; t < 30; ++t) {
        Eip p = real_region(1);
        for (int j = 0; j < 6; ++j) p.system.add_ge(random_real_row(rng, 3));
        const Eip out = fourier_motzkin(p, "z0");
        for (int s = 0; s < 2000; ++s) {
            const std::vector<Rational> pt = {Rational(coord(rng), 8), Rational(coord(rng), 8), Rational(coord(rng), 8)};
            if (!holds(p.system, pt)) continue;
            ++hits;
            EXPECT_TRUE(holds(out.system, {pt[0], pt[1]}));
        }
    }
    EXPECT_GT(hits, 100);
}

TEST(FourierMotzkin, UnknownRealIsANoOp) {
    const Eip p = superposition_region();
    EXPECT_EQ(fourier_motzkin(p, "R1").system, p.system);
}

TEST(FourierMotzkin, RowCapRaisesBudget) {
    Eip p = real_region(1);
    for (int j = 0; j < 70; ++j) {
        p.system.add_ge(EntropyExpr::real(2) + EntropyExpr::constant_term(j));
        p.system.add_ge(EntropyExpr::constant_term(j) - EntropyExpr::real(2) + EntropyExpr::real(0));
    }
    EXPECT_THROW(fourier_motzkin(p, "z0", false), BudgetExceeded);
}

TEST(RemoveAuxiliary, FunctionOfXBecomesX) {
    Eip p;
    p.base = VarContext({"X"}, {"R"});
    p.aux = {"U"};
    const VarContext f = p.full();
    p.system.add_le(EntropyExpr::real(0), entropy_term(f, 2));
    p.system.add_eq(entropy_term(f, 2, 1));
    auto r = remove_auxiliary(p, "U");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->substitution, Mask{1});
    EXPECT_TRUE(r->region.aux.empty());
    IneqSystem want;
    want.add_le(EntropyExpr::real(0), entropy_term(p.base, 1));
    EXPECT_EQ(canonical(r->region.system), canonical(want));
}

TEST(RemoveAuxiliary, IndependentAuxBecomesConstant) {
    const Eip p = independent_aux_region();
    auto r = remove_auxiliary(p, "U");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->substitution, Mask{0});
    EXPECT_TRUE(equivalent(r->region, p));
}

TEST(RemoveAuxiliary, CommonPartStays) {
    EXPECT_FALSE(remove_auxiliary(common_part_region(), "U"));
}

TEST(RemoveAuxiliary, UnknownNameThrows) {
    EXPECT_THROW(remove_auxiliary(common_part_region(), "V"), std::invalid_argument);
}

TEST(RemoveAuxiliary, LaterAuxiliariesKeepTheirMeaning) {
    // exists U, W: H(U) = 0, R <= H(W|X) with W = Y forced by H(W|Y) = H(Y|W) = 0
    Eip p;
    p.base = VarContext({"X", "Y"}, {"R"});
    p.aux = {"U", "W"};
    const VarContext f = p.full();
    p.system.add_eq(entropy_term(f, 4));
    p.system.add_eq(entropy_term(f, 8, 2));
    p.system.add_eq(entropy_term(f, 2, 8));
    p.system.add_le(EntropyExpr::real(0), entropy_term(f, 8, 1));
    auto r = remove_auxiliary(p, "U");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->region.aux, std::vector<std::string>{"W"});
    EXPECT_TRUE(equivalent(r->region, p));
}

TEST(Simplify, SuperpositionIsAlreadyMinimal) {
    const Eip p = superposition_region();
    RegionReport rep = simplify(p);
    EXPECT_TRUE(rep.complete);
    EXPECT_EQ(rep.simplified.system, p.system);
    EXPECT_EQ(rep.simplified.aux, p.aux);
    EXPECT_TRUE(rep.log.empty());
}

TEST(Simplify, IndependentAuxCollapses) {
    const Eip p = independent_aux_region();
    RegionReport rep = simplify(p);
    ASSERT_TRUE(rep.complete);
    EXPECT_TRUE(rep.simplified.aux.empty());
    IneqSystem want;
    want.add_le(EntropyExpr::real(0), mutual_info_term(p.base, 1, 2));
    EXPECT_EQ(canonical(rep.simplified.system), canonical(want));
    EXPECT_TRUE(equivalent(rep.simplified, p));

    bool removed = false;
    for (const auto& st : rep.log) {
        if (st.kind != RegionStep::Kind::RemoveAuxiliary) continue;
        removed = true;
        ASSERT_TRUE(st.forward);
        ASSERT_TRUE(st.reverse);
        EXPECT_TRUE(verify_proof_certificate(*st.forward));
        EXPECT_TRUE(verify_proof_certificate(*st.reverse));
    }
    EXPECT_TRUE(removed);
}

TEST(Simplify, CommonPartIsUnchanged) {
    const Eip p = common_part_region();
    RegionReport rep = simplify(p);
    EXPECT_EQ(rep.simplified.aux, p.aux);
    EXPECT_EQ(canonical(rep.simplified.system), canonical(p.system));
}

TEST(Simplify, EmptySystemStaysEmpty) {
    Eip p;
    p.base = VarContext({"X"}, {"R"});
    RegionReport rep = simplify(p);
    EXPECT_TRUE(rep.simplified.system.empty());
    EXPECT_TRUE(rep.log.empty());
}

TEST(Simplify, ExistentialRealsAreEliminated) {
    Eip p;
    p.base = VarContext({"X", "Y"}, {"R1", "R2"});
    p.aux_reals = {"R0"};
    const VarContext f = p.full();
    const EntropyExpr R1 = EntropyExpr::real(0), R2 = EntropyExpr::real(1), R0 = EntropyExpr::real(2);
    p.system.add_le(R1 - R0, entropy_term(f, 1));
    p.system.add_le(R2 + R0, entropy_term(f, 2));
    p.system.add_ge(R0);
    p.system.add_le(R0, R2);
    RegionReport rep = simplify(p);
    EXPECT_TRUE(rep.simplified.aux_reals.empty());
    EXPECT_TRUE(equivalent(rep.simplified, p));
}

TEST(Simplify, NeverAddsAuxiliariesOrRows) {
    std::mt19937 rng(3);
    for (int t = 0; t < 10; ++t) {
        Eip p;
        p.base = VarContext({"X", "Y"}, {"R"});
        p.aux = {"U"};
        std::uniform_int_distribution<int> c(-1, 1), m(1, 7);
        for (int k = 0; k < 3; ++k) {
            EntropyExpr e = EntropyExpr::real(0, c(rng));
            for (int j = 0; j < 2; ++j) e.add_h(static_cast<Mask>(m(rng)), c(rng));
            if (!e.is_zero()) p.system.add_ge(e);
        }
        RegionReport rep = simplify(p);
        EXPECT_LE(rep.simplified.aux.size(), p.aux.size());
        EXPECT_LE(rep.simplified.system.size(), p.system.size());
        EXPECT_TRUE(equivalent(rep.simplified, p)) << t;
    }
}

}  // namespace
}  // namespace itp
