// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "itprove/aux_search.hpp"
#include "itprove/eii.hpp"

namespace itp {

/// Elementary rules, the conditional independence rule, the union rule,
/// and Premise (an instance of an assumed EII under a substitution).
enum class Rule { Sha, Con, Join, Tran, Abs, Perm, Elim, CI, Union, Premise };
const char* to_string(Rule r);
std::optional<Rule> parse_rule(const std::string& s);

/// forall context: H(X_i | rest) >= 0, or I(X_i; X_j | rest) >= 0 when j is set.
struct ShaPayload {
    VarContext context;
    std::size_t i = 0;
    std::optional<std::size_t> j;
    friend bool operator==(const ShaPayload&, const ShaPayload&) = default;
};

/// A -> M A + offset, offset >= 0. With a reference, A is the consequence of
/// that step over its full context; otherwise A is `system` over `context`.
struct ConPayload {
    VarContext context;
    IneqSystem system;
    std::vector<std::vector<Rational>> matrix;
    std::vector<Rational> offset;
    friend bool operator==(const ConPayload&, const ConPayload&) = default;
};

/// forall context exists aux: H(context | aux) = H(aux | context) = 0.
struct JoinPayload {
    VarContext context;
    std::string aux;
    friend bool operator==(const JoinPayload&, const JoinPayload&) = default;
};

struct TranPayload {
    friend bool operator==(const TranPayload&, const TranPayload&) = default;
};
struct AbsPayload {
    friend bool operator==(const AbsPayload&, const AbsPayload&) = default;
};

/// New base variable i is old base variable base[i]; likewise for aux.
struct PermPayload {
    std::vector<std::size_t> base;
    std::vector<std::size_t> aux;
    friend bool operator==(const PermPayload&, const PermPayload&) = default;
};

/// Appends irrelevant variables, or drops trailing ones that do not occur.
struct ElimPayload {
    std::vector<std::string> add_base;
    std::vector<std::string> add_aux;
    std::vector<std::string> add_reals;
    std::size_t drop_base = 0;
    std::size_t drop_aux = 0;
    friend bool operator==(const ElimPayload&, const ElimPayload&) = default;
};

/// Adds I(U; Y | X) = 0 where X = `interacting` and Y is the rest of the base.
struct CiPayload {
    Mask interacting = 0;
    friend bool operator==(const CiPayload&, const CiPayload&) = default;
};

/// [A; c] -> B and [A; -c] -> B give A -> B.
struct UnionPayload {
    EntropyExpr split;
    friend bool operator==(const UnionPayload&, const UnionPayload&) = default;
};

/// premises[premise] with Y_i = X_{substitution[i]} over `context`, copies named `fresh`.
struct PremisePayload {
    std::size_t premise = 0;
    VarContext context;
    std::vector<Mask> substitution;
    std::vector<std::string> fresh;
    friend bool operator==(const PremisePayload&, const PremisePayload&) = default;
};

/// Alternatives in Rule order.
using Payload = std::variant<ShaPayload, ConPayload, JoinPayload, TranPayload, AbsPayload, PermPayload, ElimPayload,
                             CiPayload, UnionPayload, PremisePayload>;

struct ProofStep {
    Rule rule = Rule::Sha;
    Payload payload;
    std::vector<std::size_t> refs;  // earlier step indices
    friend bool operator==(const ProofStep&, const ProofStep&) = default;
};

struct ProofObject {
    Eii goal;
    std::vector<Eii> premises;  // assumed EIIs usable by Premise steps
    std::vector<ProofStep> steps;
};

class RuleViolation : public std::runtime_error {
  public:
    RuleViolation(std::size_t step, const std::string& what)
        : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
    std::size_t step() const { return step_; }

  private:
    std::size_t step_;
};

/// Conclusion of `step`, given the conclusions of all earlier steps. The
/// step's own index is derived.size(). Throws RuleViolation.
Eii apply_rule(const ProofStep& step, const std::vector<Eii>& derived, const std::vector<Eii>& premises = {});

/// Same variables in the same order and the same canonical systems.
bool same_eii(const Eii& a, const Eii& b);

struct CheckResult {
    bool valid = false;
    std::size_t step = 0;  // first offending step when invalid
    std::string reason;
    explicit operator bool() const { return valid; }
};

CheckResult check_proof(const ProofObject& p);

/// The worked derivation of forall X,Y: H(X,Y) >= 0.
ProofObject worked_joint_entropy_proof();

/// Elaborates a search certificate into rule steps. Throws
/// std::invalid_argument when the certificate does not verify.
ProofObject certificate_to_proof(const ProofCertificate& cert, const LpOptions& lp = {});

}  // namespace itp
