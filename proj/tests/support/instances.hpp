// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "itprove/eii.hpp"

namespace itp::testing {

inline Eii wyner_direction1() {
    Eii e;
    e.base = VarContext({"X1", "X2", "Y1", "Y2", "V"});
    e.aux = {"U1", "U2"};
    const VarContext f = e.full();
    auto m = [&](std::vector<std::string> v) { return f.mask_of(v); };
    e.premise.add_eq(mutual_info_term(f, m({"X1", "Y1"}), m({"X2", "Y2"})));
    e.premise.add_eq(mutual_info_term(f, m({"X1", "X2"}), m({"Y1", "Y2"}), m({"V"})));
    e.consequence.add_eq(mutual_info_term(f, m({"X1"}), m({"Y1"}), m({"U1"})));
    e.consequence.add_eq(mutual_info_term(f, m({"X2"}), m({"Y2"}), m({"U2"})));
    e.consequence.add_ge(mutual_info_term(f, m({"V"}), m({"X1", "X2", "Y1", "Y2"})),
                         mutual_info_term(f, m({"U1"}), m({"X1", "Y1"})) + mutual_info_term(f, m({"U2"}), m({"X2", "Y2"})));
    return e;
}

inline Eii wyner_direction2() {
    Eii e;
    e.base = VarContext({"X1", "X2", "Y1", "Y2", "U1", "U2"});
    e.aux = {"V"};
    const VarContext f = e.full();
    auto m = [&](std::vector<std::string> v) { return f.mask_of(v); };
    e.premise.add_eq(mutual_info_term(f, m({"X1", "Y1", "U1"}), m({"X2", "Y2", "U2"})));
    e.premise.add_eq(mutual_info_term(f, m({"X1"}), m({"Y1"}), m({"U1"})));
    e.premise.add_eq(mutual_info_term(f, m({"X2"}), m({"Y2"}), m({"U2"})));
    e.consequence.add_eq(mutual_info_term(f, m({"X1", "X2"}), m({"Y1", "Y2"}), m({"V"})));
    e.consequence.add_le(mutual_info_term(f, m({"V"}), m({"X1", "X2", "Y1", "Y2"})),
                         mutual_info_term(f, m({"U1"}), m({"X1", "Y1"})) + mutual_info_term(f, m({"U2"}), m({"X2", "Y2"})));
    return e;
}

inline EntropyExpr zhang_yeung_expr(const VarContext& c, Mask A = 1, Mask B = 2, Mask C = 4, Mask D = 8) {
    return mutual_info_term(c, A, B) + mutual_info_term(c, A, C | D) + Rational(3) * mutual_info_term(c, C, D, A) +
           mutual_info_term(c, C, D, B) - Rational(2) * mutual_info_term(c, C, D);
}

/// 2 I(C;D) <= I(A;B) + I(A;C,D) + 3 I(C;D|A) + I(C;D|B).
inline Eii zhang_yeung() {
    Eii e;
    e.base = VarContext({"A", "B", "C", "D"});
    e.consequence.add_ge(zhang_yeung_expr(e.base));
    return e;
}

/// Converse of the channel with state known at the encoder, two-letter
/// past/present/future modelling conditioned on the message.
inline Eii gelfand_pinsker_converse() {
    auto model = past_future_converse_context({"S", "Y"}, {"M"}, {"X"}, {"R"});
    Eii e;
    e.base = model.context;
    e.aux = {"U"};
    const VarContext f = e.full();
    auto m = [&](std::vector<std::string> v) { return f.mask_of(v); };
    const EntropyExpr R = EntropyExpr::real(0);
    e.premise.add_ge(R);
    e.premise.add_le(R, mutual_info_term(f, m({"M"}), m({"Y"}), m({"Yp"})));
    e.premise.add_eq(mutual_info_term(f, m({"M"}), m({"S", "Sp", "Sf"})));
    e.premise.add_eq(mutual_info_term(f, m({"S"}), m({"Sp", "Sf"})));
    e.premise.add_eq(entropy_term(f, m({"X"}), m({"M", "S", "Sp", "Sf"})));
    e.premise.add_eq(mutual_info_term(f, m({"Y"}), m({"M", "Sp", "Sf", "Yp"}), m({"X", "S"})));
    e.premise.append(model.csiszar);
    e.consequence.add_le(R, mutual_info_term(f, m({"U"}), m({"Y"})) - mutual_info_term(f, m({"U"}), m({"S"})));
    e.consequence.add_eq(mutual_info_term(f, m({"U"}), m({"Y"}), m({"X", "S"})));
    return e;
}

/// forall X, R: -H(X) <= R <= H(X) -> exists U: R <= H(U) <= R + H(X).
/// U = X works iff R >= 0 and U = const iff R <= 0, so one split on R is needed.
inline Eii two_branch() {
    Eii e;
    e.base = VarContext({"X"}, {"R"});
    e.aux = {"U"};
    const EntropyExpr R = EntropyExpr::real(0), HX = EntropyExpr::entropy(1), HU = EntropyExpr::entropy(2);
    e.premise.add_ge(R + HX);
    e.premise.add_ge(HX - R);
    e.consequence.add_ge(HU - R);
    e.consequence.add_ge(R + HX - HU);
    return e;
}

/// Two conditional copies on disjoint pairs (X1,Y1) and (X2,Y2); one copy
/// lemma application covers only one pair.
inline Eii two_copies() {
    Eii e;
    e.base = VarContext({"X1", "Y1", "X2", "Y2"});
    e.aux = {"U1", "U2"};
    const VarContext f = e.full();
    auto m = [&](std::vector<std::string> v) { return f.mask_of(v); };
    for (auto [x, y, u] : {std::tuple{"X1", "Y1", "U1"}, std::tuple{"X2", "Y2", "U2"}}) {
        e.consequence.add_eq(mutual_info_term(f, m({u}), m({y}), m({x})));
        e.consequence.add_eq(entropy_term(f, m({u})), entropy_term(f, m({y})));
        e.consequence.add_eq(entropy_term(f, m({x, u})), entropy_term(f, m({x, y})));
    }
    return e;
}

/// Superposition coding region: exists U: R1 <= I(X;Y1|U), R2 <= I(U;Y2),
/// R1 + R2 <= I(X;Y1), U - X - (Y1,Y2).
inline Eip superposition_region() {
    Eip p;
    p.base = VarContext({"X", "Y1", "Y2"}, {"R1", "R2"});
    p.aux = {"U"};
    const VarContext f = p.full();
    auto m = [&](std::vector<std::string> v) { return f.mask_of(v); };
    const EntropyExpr R1 = EntropyExpr::real(0), R2 = EntropyExpr::real(1);
    p.system.add_le(R1, mutual_info_term(f, m({"X"}), m({"Y1"}), m({"U"})));
    p.system.add_le(R2, mutual_info_term(f, m({"U"}), m({"Y2"})));
    p.system.add_le(R1 + R2, mutual_info_term(f, m({"X"}), m({"Y1"})));
    p.system.add_eq(mutual_info_term(f, m({"U"}), m({"Y1", "Y2"}), m({"X"})));
    return p;
}

/// exists U: R <= I(X;Y|U), I(U;X,Y) = 0, R <= I(X;Y) + H(Y|X).
/// Equivalent to R <= I(X;Y).
inline Eip independent_aux_region() {
    Eip p;
    p.base = VarContext({"X", "Y"}, {"R"});
    p.aux = {"U"};
    const VarContext f = p.full();
    const EntropyExpr R = EntropyExpr::real(0);
    p.system.add_le(R, mutual_info_term(f, 1, 2, 4));
    p.system.add_eq(mutual_info_term(f, 4, 3));
    p.system.add_le(R, mutual_info_term(f, 1, 2) + entropy_term(f, 2, 1));
    return p;
}

/// exists U: H(U|X) = H(U|Y) = 0, R <= H(U). No substitution from X, Y fits.
inline Eip common_part_region() {
    Eip p;
    p.base = VarContext({"X", "Y"}, {"R"});
    p.aux = {"U"};
    const VarContext f = p.full();
    p.system.add_eq(entropy_term(f, 4, 1));
    p.system.add_eq(entropy_term(f, 4, 2));
    p.system.add_le(EntropyExpr::real(0), entropy_term(f, 4));
    return p;
}

}  // namespace itp::testing
