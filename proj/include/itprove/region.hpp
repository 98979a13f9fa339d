// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "itprove/aux_search.hpp"
#include "itprove/eii.hpp"

namespace itp {

/// Row cap for one Fourier-Motzkin elimination; exceeding it raises BudgetExceeded.
inline constexpr std::size_t kFourierMotzkinRowCap = 4096;

/// Searches the sufficient EII  forall X, U: A -> exists V: B.  Existential
/// reals of q are projected out first; those of p become universal.
/// Throws std::invalid_argument when the base contexts differ.
SearchResult eip_implies(const Eip& p, const Eip& q, const SearchOptions& opts = {});

/// The EII searched by eip_implies.
Eii implication_eii(const Eip& p, const Eip& q);

struct DroppedRow {
    EntropyExpr row;
    DualCertificate certificate;  // remaining rows -> row, in the final context
    std::vector<EntropyExpr> remaining;
};

/// Greedy, rows with larger support first (reversed on request); repeats
/// until no row follows from the others.
Eip remove_redundant_rows(const Eip& p, const LpOptions& lp = {}, std::vector<DroppedRow>* dropped = nullptr,
                          bool reverse_order = false);

/// Eliminates an existential real; no-op when `real` is not one. Runs
/// remove_redundant_rows afterwards unless `prune` is false.
Eip fourier_motzkin(const Eip& p, const std::string& real, bool prune = true, const LpOptions& lp = {});

struct AuxRemoval {
    Eip region;
    Mask substitution = 0;  // over base ++ aux of the input region
    ProofCertificate certificate;
};

/// Finds U = (X_S, U_T) with U itself excluded from T, substitutes it and
/// drops U. std::nullopt when no single substitution works. Throws
/// std::invalid_argument for an unknown name and BudgetExceeded on budget.
std::optional<AuxRemoval> remove_auxiliary(const Eip& p, const std::string& aux, const SearchOptions& opts = {});

struct RegionStep {
    enum class Kind { RemoveRow, RemoveAuxiliary, EliminateReal };
    Kind kind = Kind::RemoveRow;
    std::string detail;
    Eip before;
    Eip after;
    std::optional<DualCertificate> row_certificate;  // RemoveRow
    std::optional<ProofCertificate> forward;         // RemoveAuxiliary: before -> after
    std::optional<ProofCertificate> reverse;         // RemoveAuxiliary: after -> before
};
const char* to_string(RegionStep::Kind k);

struct RegionReport {
    Eip original;
    Eip simplified;
    std::vector<RegionStep> log;
    bool complete = true;  // false when a budget stopped the pipeline
    std::string message;
};

/// Fixpoint of rows -> auxiliaries -> Fourier-Motzkin.
RegionReport simplify(const Eip& p, const SearchOptions& opts = {});

}  // namespace itp
