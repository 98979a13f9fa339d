// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "itprove/rational.hpp"

namespace itp {

/// Bitmask over the random variables of a context. Bit k is variable k, so
/// coordinate i of an entropic vector is the subset whose binary
/// representation is i.
using Mask = std::uint32_t;

inline constexpr std::size_t kMaxRandomVars = 24;

inline Mask full_mask(std::size_t n) { return n == 0 ? 0 : static_cast<Mask>((Mask{1} << n) - 1); }
inline Mask bit(std::size_t k) { return Mask{1} << k; }
inline int popcount(Mask m) { return __builtin_popcount(m); }

class InvalidIndex : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Ordered random-variable and real-variable names. Immutable after
/// construction; widening produces a new context.
class VarContext {
  public:
    VarContext() = default;
    explicit VarContext(std::vector<std::string> rvs, std::vector<std::string> reals = {});

    std::size_t num_rvs() const { return rvs_.size(); }
    std::size_t num_reals() const { return reals_.size(); }
    const std::vector<std::string>& rvs() const { return rvs_; }
    const std::vector<std::string>& reals() const { return reals_; }
    const std::string& rv(std::size_t k) const { return rvs_.at(k); }
    const std::string& real(std::size_t k) const { return reals_.at(k); }

    std::optional<std::size_t> rv_index(const std::string& name) const;
    std::optional<std::size_t> real_index(const std::string& name) const;
    Mask full() const { return full_mask(rvs_.size()); }

    /// Mask of the named random variables; throws InvalidIndex on unknown names.
    Mask mask_of(const std::vector<std::string>& names) const;
    std::vector<std::string> names_of(Mask m) const;
    bool valid(Mask m) const { return (m & ~full()) == 0; }

    /// New context with extra random variables appended after the existing ones.
    VarContext with_rvs(const std::vector<std::string>& extra) const;
    VarContext with_reals(const std::vector<std::string>& extra) const;

    friend bool operator==(const VarContext&, const VarContext&) = default;

  private:
    std::vector<std::string> rvs_;
    std::vector<std::string> reals_;
};

/// Affine functional  sum_S h[S] H(X_S) + sum_r reals[r] R_r + constant.
/// Coefficient keys are interpreted against the VarContext the owning
/// system carries; zero coefficients are never stored.
struct EntropyExpr {
    std::map<Mask, Rational> h;
    std::map<std::size_t, Rational> reals;
    Rational constant = 0;

    EntropyExpr() = default;

    static EntropyExpr entropy(Mask subset, const Rational& coeff = 1);
    static EntropyExpr real(std::size_t index, const Rational& coeff = 1);
    static EntropyExpr constant_term(const Rational& value);

    bool is_zero() const { return h.empty() && reals.empty() && constant == 0; }
    bool has_reals() const { return !reals.empty(); }
    bool is_homogeneous() const { return constant == 0; }
    Mask support() const;
    Rational coeff(Mask m) const;
    Rational real_coeff(std::size_t r) const;

    void add_h(Mask m, const Rational& c);
    void add_real(std::size_t r, const Rational& c);

    EntropyExpr& operator+=(const EntropyExpr& o);
    EntropyExpr& operator-=(const EntropyExpr& o);
    EntropyExpr& operator*=(const Rational& s);
    EntropyExpr operator-() const;

    friend EntropyExpr operator+(EntropyExpr a, const EntropyExpr& b) { return a += b; }
    friend EntropyExpr operator-(EntropyExpr a, const EntropyExpr& b) { return a -= b; }
    friend EntropyExpr operator*(const Rational& s, EntropyExpr a) { return a *= s; }
    friend EntropyExpr operator*(EntropyExpr a, const Rational& s) { return a *= s; }
    friend bool operator==(const EntropyExpr&, const EntropyExpr&) = default;
    friend bool operator<(const EntropyExpr& a, const EntropyExpr& b);
};

/// H(X_S | X_T) = H(X_{S u T}) - H(X_T).
EntropyExpr entropy_term(const VarContext& ctx, Mask subset, Mask given = 0);
/// I(X_A; X_B | X_C) = H(A u C) + H(B u C) - H(A u B u C) - H(C).
EntropyExpr mutual_info_term(const VarContext& ctx, Mask a, Mask b, Mask given = 0);

/// Human-readable rendering, e.g. "H(X,Y) - H(Y) + 2*R".
std::string format_expr(const EntropyExpr& e, const VarContext& ctx);

/// Joint entropies H(X_S) for every nonempty S, in bits. Entry (S - 1)
/// holds H(X_S).
struct EntropicVector {
    std::size_t n = 0;
    Eigen::VectorXd values;

    EntropicVector() = default;
    explicit EntropicVector(std::size_t nvars)
        : n(nvars), values(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(full_mask(nvars)))) {}

    double operator[](Mask m) const { return m == 0 ? 0.0 : values[static_cast<Eigen::Index>(m) - 1]; }
    double& at(Mask m) { return values[static_cast<Eigen::Index>(m) - 1]; }
};

/// Evaluates an expression at an entropic point. `reals` must provide a
/// value for every real variable the expression uses.
double evaluate(const EntropyExpr& e, const EntropicVector& h, std::span<const double> reals = {});

/// Joint probability table over finite alphabets. Variable 0 varies
/// slowest: index = ((x0 * a1 + x1) * a2 + x2) ...
struct JointPmf {
    std::vector<std::size_t> alphabet;
    std::vector<double> p;

    std::size_t num_vars() const { return alphabet.size(); }
    std::size_t size() const;
};

class InvalidPmf : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

EntropicVector entropic_vector_of_pmf(const JointPmf& pmf);

}  // namespace itp
