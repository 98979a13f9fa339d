// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include "itprove/aux_search.hpp"
#include "itprove/region.hpp"
#include "itprove/rules.hpp"

// Rationals are {"num": "<int>", "den": "<int>"} with decimal strings.
namespace nlohmann {
template <>
struct adl_serializer<itp::Rational> {
    static void to_json(json& j, const itp::Rational& r);
    static void from_json(const json& j, itp::Rational& r);
};
}  // namespace nlohmann

namespace itp {

using json = nlohmann::json;

/// Bumped on any incompatible change of the layouts below.
inline constexpr int kSchemaVersion = 1;

/// Thrown for structurally invalid documents (nlohmann's own errors pass through).
class SchemaError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

void to_json(json& j, const VarContext& c);
void from_json(const json& j, VarContext& c);
void to_json(json& j, const EntropyExpr& e);
void from_json(const json& j, EntropyExpr& e);
void to_json(json& j, const IneqSystem& s);
void from_json(const json& j, IneqSystem& s);
void to_json(json& j, const Eii& e);
void from_json(const json& j, Eii& e);
void to_json(json& j, const Eip& p);
void from_json(const json& j, Eip& p);
void to_json(json& j, const DualCertificate& c);
void from_json(const json& j, DualCertificate& c);
void to_json(json& j, const PremiseApplication& a);
void from_json(const json& j, PremiseApplication& a);
void to_json(json& j, const CaseTree& t);
void from_json(const json& j, CaseTree& t);
void to_json(json& j, const ProofCertificate& c);
void from_json(const json& j, ProofCertificate& c);
void to_json(json& j, const ProofStep& s);
void from_json(const json& j, ProofStep& s);
void to_json(json& j, const ProofObject& p);
void from_json(const json& j, ProofObject& p);

void to_json(json& j, const SearchResult& r);
void to_json(json& j, const RegionReport& r);

/// {"schema_version", "certificate"?, "proof"?}; either part may be absent.
json proof_document(const ProofCertificate* cert, const ProofObject* proof);

struct ProofDocument {
    std::optional<ProofCertificate> certificate;
    std::optional<ProofObject> proof;
};
/// Throws SchemaError on a version mismatch or when both parts are missing.
ProofDocument read_proof_document(const json& j);

}  // namespace itp
