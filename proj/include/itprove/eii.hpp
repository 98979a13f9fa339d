// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "itprove/entropy.hpp"
#include "itprove/ineq_system.hpp"

namespace itp {

/// forall base:  premise(base) >= 0  ->  exists aux:  consequence(base, aux) >= 0.
///
/// Masks in `consequence` index the combined context base.rvs() ++ aux;
/// real indices refer to base.reals().
struct Eii {
    VarContext base;
    std::vector<std::string> aux;
    IneqSystem premise;
    IneqSystem consequence;

    std::size_t n() const { return base.num_rvs(); }
    std::size_t l() const { return aux.size(); }
    std::size_t reals() const { return base.num_reals(); }
    VarContext full() const { return base.with_rvs(aux); }
    Mask base_mask() const { return full_mask(n()); }
    Mask aux_mask() const { return full_mask(n() + l()) & ~base_mask(); }

    /// Throws std::invalid_argument on name clashes or out-of-range masks.
    void validate() const;
};

/// exists aux (random) and aux_reals:  system(base, aux) >= 0.
struct Eip {
    VarContext base;
    std::vector<std::string> aux;
    std::vector<std::string> aux_reals;
    IneqSystem system;

    VarContext full() const;
    void validate() const;
};

/// Sorted, duplicate-free rows with zero rows removed.
IneqSystem canonical(const IneqSystem& s);

/// Renames variables by name; names absent from `map` are kept.
Eii rename(const Eii& e, const std::map<std::string, std::string>& map);

// Lemma library.

/// forall X^n, Y^l exists U^l: I(U;Y|X) = 0 and H(X_S, U_T) = H(X_S, Y_T)
/// for every S and nonempty T.
Eii copy_lemma(std::size_t n, std::size_t l);
/// forall X, Y exists U: I(X;U) = 0, H(Y|X,U) = 0.
Eii frl();
/// frl() plus H(Y|U) <= I(X;Y) + gap.
Eii frl_with_gap(const Rational& gap);
/// forall X,Y,Z: I(X;Z|Y) = I(Y;Z|X) = 0 -> exists U: H(U|X) = H(U|Y) = I(X,Y;Z|U) = 0.
Eii double_markov();
/// forall X exists U^n: H(U_i) = H(U^n)/n, H(X|U^n) = 0,
/// H(U_1) <= e/(n(e-1)) H(X) + 243/100.
Eii infinite_divisibility(std::size_t n);
/// e/(e-1) as a rational within 1e-16.
Rational e_over_e_minus_1();

/// Conjunction of two EIIs; the second one's names are suffixed with "'"
/// until they are disjoint from the first one's.
Eii conjunction(const Eii& a, const Eii& b);

/// inf over aux of objective subject to constraints, over base ++ aux.
struct InfoQuantity {
    std::vector<std::string> aux;
    IneqSystem constraints;
    EntropyExpr objective;
};

/// lhs >= rhs under `premise`, both quantities over `base`. The lhs
/// auxiliaries become universal, the rhs ones existential.
Eii quantity_inequality_to_eii(const VarContext& base, const InfoQuantity& lhs, const InfoQuantity& rhs,
                               const IneqSystem& premise = {});

/// LP column layout for the real variables of an EII.
struct RealColumn {
    std::string name;
    bool nonnegative = false;  // a premise row c*R >= 0 with c > 0 exists
    int columns = 2;           // 1 if nonnegative, else R+ - R-
};
std::vector<RealColumn> encode_reals(const Eii& e);

/// Replaces every real by entropies of fresh random variables: H(R_) for a
/// nonnegative real, H(R_p) - H(R_m) otherwise. Used as a cross-check of
/// the native encoding.
Eii reals_as_entropies(const Eii& e);

/// Present/past/future modelling of a multi-letter converse: each sequence
/// S gives variables S, S+"p", S+"f"; for every ordered pair (S, T) the row
/// I(Sf; T | Tp, statics) = I(Tp; S | Sf, statics) is added.
struct ConverseModel {
    VarContext context;
    IneqSystem csiszar;
};
ConverseModel past_future_converse_context(const std::vector<std::string>& sequences,
                                           const std::vector<std::string>& statics = {},
                                           const std::vector<std::string>& extra = {},
                                           const std::vector<std::string>& reals = {});

}  // namespace itp
