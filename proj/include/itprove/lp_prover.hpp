// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <deque>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "itprove/entropy.hpp"
#include "itprove/ineq_system.hpp"

namespace itp {

/// Raised when the floating LP fails or no exact certificate can be
/// recovered from an apparently optimal solution.
class SolverFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Does  A >= 0  imply  goal >= 0  for every point of the Shannon cone?
struct CiiQuery {
    VarContext context;
    IneqSystem constraints;
    EntropyExpr goal;
};

/// goal = sum_k elemental[k] * E_k + sum_j premises[j] * A_j + slack, with
/// every multiplier and the slack nonnegative. The slack only absorbs the
/// constant part; entropy and real coefficients match exactly.
struct DualCertificate {
    std::vector<std::pair<std::size_t, Rational>> elemental;
    std::vector<std::pair<std::size_t, Rational>> premises;
    Rational slack = 0;

    friend bool operator==(const DualCertificate&, const DualCertificate&) = default;
};

/// Homogenized minimizer: (h, reals, scale) with H(full) + sum|reals| + scale <= 1.
/// Constants in rows are multiplied by `scale`.
struct Counterexample {
    EntropicVector h;
    std::vector<double> reals;
    double scale = 0;
    double objective = 0;
};

/// Value of `e` at a homogenized point; the constant term is weighted by the scale.
double evaluate_homogeneous(const EntropyExpr& e, const Counterexample& p);

struct CiiResult {
    bool proved = false;
    DualCertificate certificate;
    Counterexample counterexample;
};

struct LpOptions {
    double tolerance = 1e-8;  // on the objective after scaling the goal to max-abs 1
    std::int64_t max_denominator = 1'000'000;
};

/// Solve counters shared by a proving session.
struct LpStats {
    std::atomic<long> lp_solves{0};
    std::atomic<long> cache_rejections{0};
    std::atomic<long> exact_fallbacks{0};
};

CiiResult prove_cii(const CiiQuery& q, const LpOptions& opts = {}, LpStats* stats = nullptr);

/// True iff the rational identity of the certificate holds exactly.
bool verify_certificate(const CiiQuery& q, const DualCertificate& cert);

struct SystemResult {
    bool proved = false;
    std::vector<DualCertificate> certificates;  // one per goal row when proved
    std::size_t failed_row = 0;
    Counterexample counterexample;
};

/// Proves every row of `goals` under `constraints`; stops at the first failure.
SystemResult prove_system(const VarContext& ctx, const IneqSystem& constraints, const IneqSystem& goals,
                          const LpOptions& opts = {}, LpStats* stats = nullptr);

/// Bounded FIFO store of counterexample points.
class CertCache {
  public:
    explicit CertCache(std::size_t capacity = 1024) : capacity_(capacity) {}
    CertCache(const CertCache&) = delete;
    CertCache& operator=(const CertCache&) = delete;

    void add(const Counterexample& p);
    std::size_t size() const;
    std::size_t capacity() const { return capacity_; }
    void clear();

    /// Some stored point of matching shape satisfies every row of `rows`
    /// (within 1e-9) and drives `goal` below -threshold * max|goal|.
    bool rejects(const EntropyExpr& goal, const std::vector<EntropyExpr>& rows, double threshold = 1e-6) const;

    std::vector<Counterexample> snapshot() const;

  private:
    std::size_t capacity_;
    mutable std::mutex mu_;
    std::deque<Counterexample> points_;
};

enum class CacheVerdict { RejectedByCache, Unknown };

/// Unfiltered check: assumes all entries were produced under the current constraints.
CacheVerdict cached_check(const EntropyExpr& goal, const CertCache& cache, double eps = 1e-9);

}  // namespace itp
