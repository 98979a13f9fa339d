// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>

#include "instances.hpp"
#include "mutate.hpp"
#include "random_eii.hpp"
#include "itprove/rules.hpp"

using namespace itp;

namespace {

Eii conclude(const std::vector<ProofStep>& steps, const std::vector<Eii>& premises = {}) {
    std::vector<Eii> d;
    for (const auto& s : steps) d.push_back(apply_rule(s, d, premises));
    return d.back();
}

std::size_t count_rule(const ProofObject& p, Rule r) {
    return static_cast<std::size_t>(std::count_if(p.steps.begin(), p.steps.end(), [&](const ProofStep& s) { return s.rule == r; }));
}

IneqSystem rows(std::initializer_list<EntropyExpr> es) {
    IneqSystem s;
    for (const auto& e : es) s.add_ge(e);
    return s;
}

}  // namespace

TEST(Rules, ShaConditionsOnEverythingElse) {
    VarContext c({"X", "Z1", "Z2"});
    Eii e = conclude({{Rule::Sha, ShaPayload{c, 0, std::nullopt}, {}}});
    EXPECT_EQ(e.consequence, rows({entropy_term(c, 1, 6)}));
    Eii f = conclude({{Rule::Sha, ShaPayload{c, 2, 0}, {}}});
    EXPECT_EQ(f.consequence, rows({mutual_info_term(c, 4, 1, 2)}));
    EXPECT_TRUE(f.premise.empty() && f.aux.empty());
}

TEST(Rules, ConSumsRows) {
    VarContext c({"X", "Y"});
    IneqSystem a = rows({entropy_term(c, 2, 1), EntropyExpr::entropy(1)});
    Eii e = conclude({{Rule::Con, ConPayload{c, a, {{1, 1}}, {0}}, {}}});
    EXPECT_EQ(e.premise, a);
    EXPECT_EQ(e.consequence, rows({EntropyExpr::entropy(3)}));
    Eii g = conclude({{Rule::Con, ConPayload{c, a, {{2, 0}}, {Rational(1, 2)}}, {}}});
    EXPECT_EQ(g.consequence.rows[0], Rational(2) * entropy_term(c, 2, 1) + EntropyExpr::constant_term(Rational(1, 2)));
}

TEST(Rules, ConRejectsNegativeEntriesAndBadShapes) {
    VarContext c({"X"});
    IneqSystem a = rows({EntropyExpr::entropy(1)});
    EXPECT_THROW(conclude({{Rule::Con, ConPayload{c, a, {{-1}}, {0}}, {}}}), RuleViolation);
    EXPECT_THROW(conclude({{Rule::Con, ConPayload{c, a, {{1}}, {-1}}, {}}}), RuleViolation);
    EXPECT_THROW(conclude({{Rule::Con, ConPayload{c, a, {{1, 1}}, {0}}, {}}}), RuleViolation);
    EXPECT_THROW(conclude({{Rule::Con, ConPayload{c, a, {{1}}, {}}, {}}}), RuleViolation);
}

TEST(Rules, IdentityConAndPermAreNoOps) {
    VarContext c({"X", "Y", "Z"});
    // True -> [H(X|Y,Z); I(X;Y|Z)] from two Sha rows
    std::vector<ProofStep> s = {{Rule::Sha, ShaPayload{c, 0, 1}, {}},
                                {Rule::Sha, ShaPayload{c, 0, std::nullopt}, {}},
                                {Rule::Con, ConPayload{{}, {}, {}, {}}, {0}},
                                {Rule::Tran, TranPayload{}, {2, 1}},
                                {Rule::Abs, AbsPayload{}, {3}},
                                {Rule::Tran, TranPayload{}, {0, 4}}};
    const Eii before = conclude(s);
    const std::size_t m = before.consequence.size();
    std::vector<std::vector<Rational>> id(m, std::vector<Rational>(m, Rational(0)));
    for (std::size_t k = 0; k < m; ++k) id[k][k] = 1;
    auto with_id = s;
    with_id.push_back({Rule::Con, ConPayload{{}, {}, id, std::vector<Rational>(m, Rational(0))}, {5}});
    with_id.push_back({Rule::Tran, TranPayload{}, {5, 6}});
    EXPECT_TRUE(same_eii(conclude(with_id), before));

    auto with_perm = s;
    with_perm.push_back({Rule::Perm, PermPayload{{0, 1, 2}, {}}, {5}});
    EXPECT_TRUE(same_eii(conclude(with_perm), before));
}

TEST(Rules, PermReordersVariables) {
    VarContext c({"X", "Y"});
    Eii e = conclude({{Rule::Sha, ShaPayload{c, 1, std::nullopt}, {}}, {Rule::Perm, PermPayload{{1, 0}, {}}, {0}}});
    EXPECT_EQ(e.base.rvs(), (std::vector<std::string>{"Y", "X"}));
    EXPECT_EQ(e.consequence.rows[0], entropy_term(e.base, 1, 2));  // H(Y|X) in the new order
    EXPECT_THROW(conclude({{Rule::Sha, ShaPayload{c, 1, std::nullopt}, {}}, {Rule::Perm, PermPayload{{1, 1}, {}}, {0}}}),
                 RuleViolation);
}

TEST(Rules, ElimIntroducesAndRemovesIrrelevantVariables) {
    VarContext c({"X"});
    std::vector<ProofStep> s = {{Rule::Join, JoinPayload{c, "U"}, {}},
                                {Rule::Elim, ElimPayload{{"Y"}, {"V"}, {}, 0, 0}, {0}}};
    Eii e = conclude(s);
    EXPECT_EQ(e.base.rvs(), (std::vector<std::string>{"X", "Y"}));
    EXPECT_EQ(e.aux, (std::vector<std::string>{"U", "V"}));
    EXPECT_EQ(e.consequence.rows[0], entropy_term(e.full(), 1, 4));  // U moved past Y
    s.push_back({Rule::Elim, ElimPayload{{}, {}, {}, 1, 1}, {1}});
    EXPECT_TRUE(same_eii(conclude(s), conclude({s[0]})));
    // X occurs, so it cannot be dropped
    s.push_back({Rule::Elim, ElimPayload{{}, {}, {}, 1, 0}, {2}});
    EXPECT_THROW(conclude(s), RuleViolation);
}

TEST(Rules, TranNeedsAnExactInterface) {
    VarContext c({"X", "Y"});
    IneqSystem hx = rows({EntropyExpr::entropy(1)});
    std::vector<ProofStep> s = {{Rule::Sha, ShaPayload{c, 1, std::nullopt}, {}},
                                {Rule::Con, ConPayload{c, hx, {}, {}}, {}},
                                {Rule::Tran, TranPayload{}, {0, 1}}};
    try {
        conclude(s);
        FAIL() << "expected a rule violation";
    } catch (const RuleViolation& v) {
        EXPECT_EQ(v.step(), 2u);
    }
}

TEST(Rules, CiRequiresLocalAuxiliaries) {
    VarContext c({"X", "Y"});
    VarContext x({"X"});
    std::vector<ProofStep> s = {{Rule::Join, JoinPayload{x, "U"}, {}},
                                {Rule::Elim, ElimPayload{{"Y"}, {}, {}, 0, 0}, {0}},
                                {Rule::CI, CiPayload{1}, {1}}};
    Eii e = conclude(s);
    EntropyExpr ci = mutual_info_term(e.full(), 4, 2, 1);
    EXPECT_NE(std::find(e.consequence.rows.begin(), e.consequence.rows.end(), ci), e.consequence.rows.end());
    s.back() = {Rule::CI, CiPayload{0}, {1}};  // U meets X, which is not declared
    EXPECT_THROW(conclude(s), RuleViolation);
}

TEST(Rules, UnionMergesComplementaryCases) {
    VarContext c({"X", "Y"});
    EntropyExpr split = EntropyExpr::entropy(1) - EntropyExpr::entropy(2);
    IneqSystem pos = rows({split}), neg = rows({-split});
    std::vector<ProofStep> s = {{Rule::Con, ConPayload{c, pos, {}, {}}, {}},
                                {Rule::Con, ConPayload{c, neg, {}, {}}, {}},
                                {Rule::Union, UnionPayload{split}, {0, 1}}};
    Eii e = conclude(s);
    EXPECT_TRUE(e.premise.empty());
    s.back() = {Rule::Union, UnionPayload{split + EntropyExpr::entropy(3)}, {0, 1}};
    EXPECT_THROW(conclude(s), RuleViolation);
}

TEST(Rules, ReferencesMustPointBackward) {
    VarContext c({"X"});
    EXPECT_THROW(conclude({{Rule::Abs, AbsPayload{}, {0}}}), RuleViolation);
    EXPECT_THROW(conclude({{Rule::Abs, ShaPayload{c, 0, std::nullopt}, {}}}), RuleViolation);
}

TEST(CheckProof, WorkedDerivationOfJointEntropy) {
    ProofObject p = worked_joint_entropy_proof();
    EXPECT_EQ(p.steps.size(), 9u);
    EXPECT_TRUE(check_proof(p).valid);
    ProofObject broken = p;
    broken.steps.erase(broken.steps.begin() + 4);  // the Abs step
    CheckResult r = check_proof(broken);
    EXPECT_FALSE(r.valid);
    EXPECT_EQ(r.step, 4u);
    EXPECT_EQ(broken.steps[4].rule, Rule::Con);
}

TEST(CheckProof, GoalMustMatch) {
    ProofObject p = worked_joint_entropy_proof();
    p.goal.consequence.rows[0] = EntropyExpr::entropy(1);
    CheckResult r = check_proof(p);
    EXPECT_FALSE(r.valid);
    EXPECT_EQ(r.step, 8u);
    EXPECT_FALSE(check_proof(ProofObject{}).valid);
}

TEST(CheckProof, MutationsOfTheWorkedProofAreRejected) {
    itp::testing::ProofMutator mutate(7);
    const ProofObject p = worked_joint_entropy_proof();
    int rejected = 0;
    for (int k = 0; k < 500; ++k) rejected += !check_proof(mutate(p)).valid;
    EXPECT_GE(rejected, 495);
}

TEST(CertificateToProof, JoinExampleIsOneJoinAndOneTran) {
    Eii e;
    e.base = VarContext({"X", "Y"});
    e.aux = {"U"};
    e.consequence.add_eq(entropy_term(e.full(), 3, 4));
    e.consequence.add_eq(entropy_term(e.full(), 4, 3));
    auto r = prove_eii(e);
    ASSERT_TRUE(r.proved());
    ProofObject p = certificate_to_proof(*r.certificate);
    EXPECT_TRUE(check_proof(p).valid);
    EXPECT_EQ(count_rule(p, Rule::Join), 1u);
    EXPECT_EQ(count_rule(p, Rule::Tran), 1u);
}

TEST(CertificateToProof, WynerBothDirections) {
    for (const Eii& e : {itp::testing::wyner_direction1(), itp::testing::wyner_direction2()}) {
        auto r = prove_eii(e);
        ASSERT_TRUE(r.proved());
        ProofObject p = certificate_to_proof(*r.certificate);
        CheckResult c = check_proof(p);
        EXPECT_TRUE(c.valid) << c.reason;
        EXPECT_GE(count_rule(p, Rule::Join), 1u);
    }
}

TEST(CertificateToProof, ZhangYeungUsesTheCiRule) {
    auto r = prove_eii(itp::testing::zhang_yeung(), {copy_lemma(2, 2)});
    ASSERT_TRUE(r.proved());
    ProofObject p = certificate_to_proof(*r.certificate);
    EXPECT_TRUE(check_proof(p).valid);
    EXPECT_GE(count_rule(p, Rule::CI), 1u);
    EXPECT_EQ(count_rule(p, Rule::Premise), 1u);

    ProofObject no_premise = p;
    no_premise.premises.clear();
    EXPECT_FALSE(check_proof(no_premise).valid);
}

TEST(CertificateToProof, CaseSplitsBecomeUnionSteps) {
    SearchOptions o;
    o.max_cases = 2;
    auto r = prove_eii(itp::testing::two_branch(), {}, o);
    ASSERT_TRUE(r.proved());
    ProofObject p = certificate_to_proof(*r.certificate);
    EXPECT_TRUE(check_proof(p).valid);
    EXPECT_EQ(count_rule(p, Rule::Union), 1u);
}

TEST(CertificateToProof, RoundTripOnRandomInstances) {
    std::mt19937 rng(53);
    int proved = 0;
    for (int t = 0; t < 40; ++t) {
        Eii e = itp::testing::random_eii(rng, 3, 1 + static_cast<std::size_t>(t % 2));
        auto r = prove_eii(e);
        if (!r.proved()) continue;
        ++proved;
        ProofObject p = certificate_to_proof(*r.certificate);
        CheckResult c = check_proof(p);
        EXPECT_TRUE(c.valid) << "instance " << t << ": " << c.reason;
    }
    EXPECT_GT(proved, 3);
}

TEST(CertificateToProof, MutationsOfAnElaboratedProofAreRejected) {
    auto r = prove_eii(itp::testing::wyner_direction1());
    ASSERT_TRUE(r.proved());
    const ProofObject p = certificate_to_proof(*r.certificate);
    itp::testing::ProofMutator mutate(11);
    int rejected = 0;
    for (int k = 0; k < 500; ++k) rejected += !check_proof(mutate(p)).valid;
    EXPECT_GE(rejected, 495);
}

TEST(CertificateToProof, RejectsBrokenCertificates) {
    auto r = prove_eii(itp::testing::wyner_direction1());
    ASSERT_TRUE(r.proved());
    ProofCertificate c = *r.certificate;
    c.cases.leaves[0].certificates[0].slack += 1;
    EXPECT_THROW(certificate_to_proof(c), std::invalid_argument);
}
