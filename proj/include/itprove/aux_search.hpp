// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "itprove/eii.hpp"
#include "itprove/lp_prover.hpp"

namespace itp {

/// Constant means both increasing and decreasing (the variable does not occur).
enum class Monotonicity { Increasing, Decreasing, Constant, Unknown };
const char* to_string(Monotonicity m);

/// How `expr` (over `ctx`, reals and constant ignored) moves when variable
/// `var` is replaced by (var, Y) for a fresh Y. Rules first, then the LP
/// check over the expression's support. With `given`, the check is the
/// conditional one: both the original and the widened point satisfy `given`.
Monotonicity monotonicity(const EntropyExpr& expr, const VarContext& ctx, std::size_t var,
                          const IneqSystem* given = nullptr, LpStats* stats = nullptr);
/// Only the term rules; Unknown when they are inconclusive.
Monotonicity monotonicity_by_rules(const EntropyExpr& expr, std::size_t var);

/// Per auxiliary, lower[i] subset of upper[i] subset of the base mask.
struct SandwichBounds {
    std::vector<Mask> upper;
    std::vector<Mask> lower;
    friend bool operator==(const SandwichBounds&, const SandwichBounds&) = default;
};

class BudgetExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct SearchOptions {
    std::size_t repeat = 1;        // applications per premise
    long budget = 20000;           // LP solves per prove_eii call
    std::size_t max_cases = 4;     // leaves of a leave-one-out case split; 1 disables it
    bool use_cache = true;
    bool use_sandwich = true;
    bool prune_monotone = true;    // skip candidates dominated by a failed one
    bool conditional_monotonicity = false;
    int jobs = 1;
    std::uint64_t max_candidates = std::uint64_t{1} << 24;
    std::vector<Mask> upper_init;  // optional per-aux cap on candidate sets
    LpOptions lp;
};

/// Proves collapsed rows under one fixed premise, memoized and cached.
class RowProver {
  public:
    RowProver(VarContext ctx, IneqSystem premise, CertCache* cache, const SearchOptions& opts, LpStats& stats);

    /// True iff premise -> row >= 0 holds over the Shannon cone.
    bool proves(const EntropyExpr& row, DualCertificate* cert = nullptr);

    const VarContext& context() const { return ctx_; }
    const IneqSystem& premise() const { return premise_; }

  private:
    struct Entry {
        bool proved;
        DualCertificate cert;
    };
    VarContext ctx_;
    IneqSystem premise_;
    CertCache* cache_;
    const SearchOptions& opts_;
    LpStats& stats_;
    std::mutex mu_;
    std::map<EntropyExpr, Entry> memo_;
};

struct SandwichResult {
    bool ok = false;
    SandwichBounds bounds;
    std::vector<SandwichBounds> history;  // after each outer pass
    std::size_t failed_row = 0;           // when !ok
    /// row_monotonicity[r][i]: consequence row r in aux i.
    std::vector<std::vector<Monotonicity>> row_monotonicity;
};

SandwichResult sandwich(const Eii& e, RowProver& prover, const SearchOptions& opts = {});

struct ExhaustResult {
    bool ok = false;
    std::vector<Mask> assignment;
    std::vector<DualCertificate> certificates;  // one per consequence row
    std::uint64_t candidates_tried = 0;
    std::size_t best_rows_covered = 0;
};

/// Candidates within `bounds`, ordered by total distance from the lower
/// bounds and then lexicographically; the first one proving every row wins.
ExhaustResult exhaust(const Eii& e, const SandwichBounds& bounds, RowProver& prover, const SearchOptions& opts = {},
                      const std::vector<std::vector<Monotonicity>>* row_monotonicity = nullptr);

/// Plain 2^(n l) search: no sandwich, no cache, no pruning.
ExhaustResult brute_force(const Eii& e, const SearchOptions& opts = {});

/// Y_i = X_{substitution[i]} in the premise, fresh copies V named `fresh`.
struct PremiseApplication {
    std::size_t premise = 0;
    std::vector<Mask> substitution;
    std::vector<std::string> fresh;
    std::vector<DualCertificate> condition_certificates;  // premise of the working EII -> C(sigma)
};

/// Leave-one-out chain. With splits c_1..c_k, leaf i < k is certified under
/// A, -c_1, ..., -c_i, c_{i+1} and the last leaf under A, -c_1, ..., -c_k.
struct CaseLeaf {
    std::vector<Mask> assignment;
    std::vector<DualCertificate> certificates;
};
struct CaseTree {
    std::vector<EntropyExpr> splits;
    std::vector<CaseLeaf> leaves;
};

struct ProofCertificate {
    Eii goal;
    std::vector<Eii> premises;
    std::vector<PremiseApplication> applications;
    CaseTree cases;
};

/// Working EII after the applications: base extended by the copies,
/// premise A u C(sigma) u D(sigma, V) u {I(V; X | X_sigma) = 0} per step.
Eii apply_premise(const Eii& working, const Eii& premise, const std::vector<Mask>& substitution,
                  const std::vector<std::string>& fresh);
Eii working_eii(const ProofCertificate& cert);

/// Exact replay of every certificate in `cert`.
bool verify_proof_certificate(const ProofCertificate& cert, std::string* why = nullptr);

enum class SearchStatus { Proved, NotProved, BudgetExceeded };
const char* to_string(SearchStatus s);

struct SearchResult {
    SearchStatus status = SearchStatus::NotProved;
    std::optional<ProofCertificate> certificate;
    SandwichBounds bounds;  // tightest bounds of the plain search
    std::size_t best_rows_covered = 0;
    long lp_solves = 0;
    long cache_rejections = 0;
    std::string message;
    bool proved() const { return status == SearchStatus::Proved; }
};

SearchResult prove_eii(const Eii& e, const std::vector<Eii>& premises = {}, const SearchOptions& opts = {});

/// Leave-one-out on a premise-free EII.
SearchResult leave_one_out(const Eii& e, const SearchOptions& opts = {});

}  // namespace itp
