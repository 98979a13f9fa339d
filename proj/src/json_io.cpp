// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#include "itprove/json_io.hpp"

#include "itprove/syntax.hpp"

namespace nlohmann {

void adl_serializer<itp::Rational>::to_json(json& j, const itp::Rational& r) {
    j = json{{"num", r.get_num().get_str()}, {"den", r.get_den().get_str()}};
}

void adl_serializer<itp::Rational>::from_json(const json& j, itp::Rational& r) {
    const auto num = j.at("num").get<std::string>(), den = j.at("den").get<std::string>();
    mpz_class n, d;
    if (n.set_str(num, 10) != 0 || d.set_str(den, 10) != 0 || d == 0)
        throw itp::SchemaError("malformed rational {" + num + ", " + den + "}");
    r = itp::Rational(n, d);
    r.canonicalize();
}

}  // namespace nlohmann

namespace itp {

namespace {

template <class T>
std::vector<T> list(const json& j, const char* key) {
    return j.contains(key) ? j.at(key).get<std::vector<T>>() : std::vector<T>{};
}

json indexed(const std::vector<std::pair<std::size_t, Rational>>& v) {
    json out = json::array();
    for (const auto& [k, c] : v) out.push_back({{"index", k}, {"coeff", c}});
    return out;
}

std::vector<std::pair<std::size_t, Rational>> indexed_from(const json& j) {
    std::vector<std::pair<std::size_t, Rational>> out;
    for (const auto& e : j) out.emplace_back(e.at("index").get<std::size_t>(), e.at("coeff").get<Rational>());
    return out;
}

}  // namespace

void to_json(json& j, const VarContext& c) { j = json{{"random", c.rvs()}, {"real", c.reals()}}; }
void from_json(const json& j, VarContext& c) { c = VarContext(list<std::string>(j, "random"), list<std::string>(j, "real")); }

void to_json(json& j, const EntropyExpr& e) {
    json h = json::array(), r = json::array();
    for (const auto& [m, c] : e.h) h.push_back({{"mask", m}, {"coeff", c}});
    for (const auto& [k, c] : e.reals) r.push_back({{"index", k}, {"coeff", c}});
    j = json{{"h", h}, {"reals", r}, {"constant", e.constant}};
}

void from_json(const json& j, EntropyExpr& e) {
    e = EntropyExpr();
    for (const auto& t : j.at("h")) {
        const auto m = t.at("mask").get<Mask>();
        if (m == 0) throw SchemaError("entropy term with an empty set");
        e.add_h(m, t.at("coeff").get<Rational>());
    }
    for (const auto& t : j.at("reals")) e.add_real(t.at("index").get<std::size_t>(), t.at("coeff").get<Rational>());
    e.constant = j.at("constant").get<Rational>();
}

void to_json(json& j, const IneqSystem& s) { j = s.rows; }
void from_json(const json& j, IneqSystem& s) { s.rows = j.get<std::vector<EntropyExpr>>(); }

void to_json(json& j, const Eii& e) {
    j = json{{"base", e.base},
             {"aux", e.aux},
             {"premise", e.premise},
             {"consequence", e.consequence},
             {"text", print_statement(e)}};
}

void from_json(const json& j, Eii& e) {
    e.base = j.at("base").get<VarContext>();
    e.aux = list<std::string>(j, "aux");
    e.premise = j.at("premise").get<IneqSystem>();
    e.consequence = j.at("consequence").get<IneqSystem>();
    e.validate();
}

void to_json(json& j, const Eip& p) {
    j = json{{"base", p.base},
             {"aux", p.aux},
             {"aux_reals", p.aux_reals},
             {"system", p.system},
             {"text", print_region(p)}};
}

void from_json(const json& j, Eip& p) {
    p.base = j.at("base").get<VarContext>();
    p.aux = list<std::string>(j, "aux");
    p.aux_reals = list<std::string>(j, "aux_reals");
    p.system = j.at("system").get<IneqSystem>();
    p.validate();
}

void to_json(json& j, const DualCertificate& c) {
    j = json{{"elemental", indexed(c.elemental)}, {"premises", indexed(c.premises)}, {"slack", c.slack}};
}

void from_json(const json& j, DualCertificate& c) {
    c.elemental = indexed_from(j.at("elemental"));
    c.premises = indexed_from(j.at("premises"));
    c.slack = j.at("slack").get<Rational>();
}

void to_json(json& j, const PremiseApplication& a) {
    j = json{{"premise", a.premise},
             {"substitution", a.substitution},
             {"fresh", a.fresh},
             {"condition_certificates", a.condition_certificates}};
}

void from_json(const json& j, PremiseApplication& a) {
    a.premise = j.at("premise").get<std::size_t>();
    a.substitution = j.at("substitution").get<std::vector<Mask>>();
    a.fresh = j.at("fresh").get<std::vector<std::string>>();
    a.condition_certificates = j.at("condition_certificates").get<std::vector<DualCertificate>>();
}

void to_json(json& j, const CaseTree& t) {
    json leaves = json::array();
    for (const auto& l : t.leaves) leaves.push_back({{"assignment", l.assignment}, {"certificates", l.certificates}});
    j = json{{"splits", t.splits}, {"leaves", leaves}};
}

void from_json(const json& j, CaseTree& t) {
    t.splits = j.at("splits").get<std::vector<EntropyExpr>>();
    t.leaves.clear();
    for (const auto& l : j.at("leaves"))
        t.leaves.push_back({l.at("assignment").get<std::vector<Mask>>(),
                            l.at("certificates").get<std::vector<DualCertificate>>()});
}

void to_json(json& j, const ProofCertificate& c) {
    j = json{{"goal", c.goal}, {"premises", c.premises}, {"applications", c.applications}, {"cases", c.cases}};
}

void from_json(const json& j, ProofCertificate& c) {
    c.goal = j.at("goal").get<Eii>();
    c.premises = j.at("premises").get<std::vector<Eii>>();
    c.applications = j.at("applications").get<std::vector<PremiseApplication>>();
    c.cases = j.at("cases").get<CaseTree>();
}

namespace {

json payload_json(const Payload& p) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ShaPayload>) {
                json o{{"context", v.context}, {"i", v.i}};
                if (v.j) o["j"] = *v.j;
                return o;
            } else if constexpr (std::is_same_v<T, ConPayload>) {
                return {{"context", v.context}, {"system", v.system}, {"matrix", v.matrix}, {"offset", v.offset}};
            } else if constexpr (std::is_same_v<T, JoinPayload>) {
                return {{"context", v.context}, {"aux", v.aux}};
            } else if constexpr (std::is_same_v<T, PermPayload>) {
                return {{"base", v.base}, {"aux", v.aux}};
            } else if constexpr (std::is_same_v<T, ElimPayload>) {
                return {{"add_base", v.add_base},   {"add_aux", v.add_aux},   {"add_reals", v.add_reals},
                        {"drop_base", v.drop_base}, {"drop_aux", v.drop_aux}};
            } else if constexpr (std::is_same_v<T, CiPayload>) {
                return {{"interacting", v.interacting}};
            } else if constexpr (std::is_same_v<T, UnionPayload>) {
                return {{"split", v.split}};
            } else if constexpr (std::is_same_v<T, PremisePayload>) {
                return {{"premise", v.premise},
                        {"context", v.context},
                        {"substitution", v.substitution},
                        {"fresh", v.fresh}};
            } else {
                return json::object();
            }
        },
        p);
}

Payload payload_from(Rule r, const json& j) {
    switch (r) {
        case Rule::Sha: {
            ShaPayload p{j.at("context").get<VarContext>(), j.at("i").get<std::size_t>(), std::nullopt};
            if (j.contains("j")) p.j = j.at("j").get<std::size_t>();
            return p;
        }
        case Rule::Con:
            return ConPayload{j.at("context").get<VarContext>(), j.at("system").get<IneqSystem>(),
                              j.at("matrix").get<std::vector<std::vector<Rational>>>(),
                              j.at("offset").get<std::vector<Rational>>()};
        case Rule::Join: return JoinPayload{j.at("context").get<VarContext>(), j.at("aux").get<std::string>()};
        case Rule::Tran: return TranPayload{};
        case Rule::Abs: return AbsPayload{};
        case Rule::Perm:
            return PermPayload{j.at("base").get<std::vector<std::size_t>>(), j.at("aux").get<std::vector<std::size_t>>()};
        case Rule::Elim:
            return ElimPayload{list<std::string>(j, "add_base"), list<std::string>(j, "add_aux"),
                               list<std::string>(j, "add_reals"), j.value("drop_base", std::size_t{0}),
                               j.value("drop_aux", std::size_t{0})};
        case Rule::CI: return CiPayload{j.at("interacting").get<Mask>()};
        case Rule::Union: return UnionPayload{j.at("split").get<EntropyExpr>()};
        case Rule::Premise:
            return PremisePayload{j.at("premise").get<std::size_t>(), j.at("context").get<VarContext>(),
                                  j.at("substitution").get<std::vector<Mask>>(),
                                  j.at("fresh").get<std::vector<std::string>>()};
    }
    throw SchemaError("unknown rule");
}

}  // namespace

void to_json(json& j, const ProofStep& s) {
    j = json{{"rule", to_string(s.rule)}, {"refs", s.refs}, {"payload", payload_json(s.payload)}};
}

void from_json(const json& j, ProofStep& s) {
    const auto name = j.at("rule").get<std::string>();
    auto r = parse_rule(name);
    if (!r) throw SchemaError("unknown rule '" + name + "'");
    s.rule = *r;
    s.refs = list<std::size_t>(j, "refs");
    s.payload = payload_from(*r, j.at("payload"));
}

void to_json(json& j, const ProofObject& p) { j = json{{"goal", p.goal}, {"premises", p.premises}, {"steps", p.steps}}; }

void from_json(const json& j, ProofObject& p) {
    p.goal = j.at("goal").get<Eii>();
    p.premises = j.at("premises").get<std::vector<Eii>>();
    p.steps = j.at("steps").get<std::vector<ProofStep>>();
}

void to_json(json& j, const SearchResult& r) {
    j = json{{"status", to_string(r.status)},
             {"lp_solves", r.lp_solves},
             {"cache_rejections", r.cache_rejections},
             {"best_rows_covered", r.best_rows_covered},
             {"bounds", {{"upper", r.bounds.upper}, {"lower", r.bounds.lower}}}};
    if (!r.message.empty()) j["message"] = r.message;
    if (r.certificate) j["certificate"] = *r.certificate;
}

void to_json(json& j, const RegionReport& r) {
    json log = json::array();
    for (const auto& st : r.log) {
        json s{{"kind", to_string(st.kind)}, {"detail", st.detail}, {"before", st.before}, {"after", st.after}};
        if (st.row_certificate) s["row_certificate"] = *st.row_certificate;
        if (st.forward) s["forward"] = *st.forward;
        if (st.reverse) s["reverse"] = *st.reverse;
        s["equivalence_certified"] = st.kind != RegionStep::Kind::RemoveAuxiliary || st.reverse.has_value();
        log.push_back(std::move(s));
    }
    j = json{{"original", r.original}, {"simplified", r.simplified}, {"log", log}, {"complete", r.complete}};
    if (!r.message.empty()) j["message"] = r.message;
}

json proof_document(const ProofCertificate* cert, const ProofObject* proof) {
    json j{{"schema_version", kSchemaVersion}};
    if (cert) j["certificate"] = *cert;
    if (proof) j["proof"] = *proof;
    return j;
}

ProofDocument read_proof_document(const json& j) {
    if (!j.is_object() || !j.contains("schema_version")) throw SchemaError("missing schema_version");
    const int v = j.at("schema_version").get<int>();
    if (v != kSchemaVersion)
        throw SchemaError("schema_version " + std::to_string(v) + " is not supported (expected " +
                          std::to_string(kSchemaVersion) + ")");
    ProofDocument d;
    if (j.contains("certificate")) d.certificate = j.at("certificate").get<ProofCertificate>();
    if (j.contains("proof")) d.proof = j.at("proof").get<ProofObject>();
    if (!d.certificate && !d.proof) throw SchemaError("document holds neither a certificate nor a proof");
    return d;
}

}  // namespace itp
